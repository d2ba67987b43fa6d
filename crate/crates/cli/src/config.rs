//! JSON config file and the named-input / amplitude parsers shared by the
//! subcommands.

use rieszlab_core::multi_index::MultiIndex;
use rieszlab_core::sparse::AmplitudeDist;
use rieszlab_core::verification::TestFunction;
use rieszlab_core::{Error, Grid, SampledField};
use std::path::Path;

#[derive(Default)]
pub struct ConfigFile {
    pub gamma: Option<f64>,
    pub p: Option<String>,
    pub d: Option<usize>,
    pub l: Option<f64>,
    pub n: Option<usize>,
    pub op: Option<String>,
    pub input: Option<String>,
    pub suite: Option<String>,
    pub lambda: Option<f64>,
    pub box_b: Option<f64>,
    pub amplitude: Option<String>,
    pub seed: Option<u64>,
    pub n_samples: Option<usize>,
    pub t: Option<String>,
    pub mode: Option<String>,
    pub y0: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)?;
        let v: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("config json: {e}")))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("config must be a JSON object".into()))?;
        let mut c = ConfigFile::default();
        for (k, val) in obj {
            match k.as_str() {
                "gamma" => c.gamma = val.as_f64(),
                "p" => c.p = Some(stringish(val)?),
                "d" => c.d = val.as_u64().map(|x| x as usize),
                "l" | "L" => c.l = val.as_f64(),
                "n" => c.n = val.as_u64().map(|x| x as usize),
                "op" => c.op = val.as_str().map(String::from),
                "input" => c.input = val.as_str().map(String::from),
                "suite" => c.suite = val.as_str().map(String::from),
                "lambda" => c.lambda = val.as_f64(),
                "box_b" | "B" => c.box_b = val.as_f64(),
                "amplitude" => c.amplitude = val.as_str().map(String::from),
                "seed" => c.seed = val.as_u64(),
                "n_samples" => c.n_samples = val.as_u64().map(|x| x as usize),
                "t" => c.t = Some(stringish(val)?),
                "mode" => c.mode = val.as_str().map(String::from),
                "y0" => c.y0 = val.as_f64(),
                other => return Err(Error::Parse(format!("unknown config key {other}"))),
            }
        }
        Ok(c)
    }
}

fn stringish(v: &serde_json::Value) -> Result<String, Error> {
    Ok(match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) => n.to_string(),
        serde_json::Value::Array(a) => a
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(","),
        _ => return Err(Error::Parse(format!("expected string-like value, got {v}"))),
    })
}

/// det:a0 | gaussian:sigma | laplace:b | uniform:lo,hi. Heavy-tailed
/// laws are rejected: the characteristic functional requires E|a| < ∞.
pub fn parse_amplitude(s: &str) -> Result<AmplitudeDist, Error> {
    let (kind, args) = s.split_once(':').unwrap_or((s, ""));
    let nums = || -> Result<Vec<f64>, Error> {
        args.split(',')
            .filter(|p| !p.is_empty())
            .map(|p| p.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number in {s}"))))
            .collect()
    };
    match kind {
        "det" | "deterministic" => {
            let v = nums()?;
            Ok(AmplitudeDist::Deterministic { a0: *v.first().unwrap_or(&1.0) })
        }
        "gaussian" | "normal" => {
            let v = nums()?;
            let sigma = *v.first().unwrap_or(&1.0);
            if !(sigma > 0.0) {
                return Err(Error::Spec("gaussian sigma must be positive".into()));
            }
            Ok(AmplitudeDist::Gaussian { sigma })
        }
        "laplace" => {
            let v = nums()?;
            let b = *v.first().unwrap_or(&1.0);
            if !(b > 0.0) {
                return Err(Error::Spec("laplace scale must be positive".into()));
            }
            Ok(AmplitudeDist::Laplace { b })
        }
        "uniform" => {
            let v = nums()?;
            if v.len() != 2 || v[0] >= v[1] {
                return Err(Error::Spec("uniform needs lo,hi with lo < hi".into()));
            }
            Ok(AmplitudeDist::Uniform { lo: v[0], hi: v[1] })
        }
        "cauchy" => Err(Error::Spec(
            "cauchy amplitudes rejected: the characteristic functional requires a finite mean \
             absolute amplitude E|a| < ∞"
                .into(),
        )),
        other => Err(Error::Parse(format!("unknown amplitude kind {other}"))),
    }
}

/// gaussian[:sigma] | shifted_gaussian:sigma,x0 | bump[:i] |
/// moment_cancelled:m0 | csv:path
pub fn parse_input(s: &str, grid: Grid) -> Result<SampledField, Error> {
    let (kind, args) = s.split_once(':').unwrap_or((s, ""));
    match kind {
        "gaussian" => {
            let sigma = if args.is_empty() {
                1.0
            } else {
                args.parse::<f64>().map_err(|_| Error::Parse(format!("bad sigma {args}")))?
            };
            TestFunction::Gaussian { sigma }.sample(grid)
        }
        "shifted_gaussian" => {
            let v: Vec<f64> = args
                .split(',')
                .map(|p| p.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad arg {p}"))))
                .collect::<Result<_, _>>()?;
            if v.len() != 1 + grid.dim {
                return Err(Error::Parse("shifted_gaussian needs sigma,x0...".into()));
            }
            TestFunction::ShiftedGaussian { sigma: v[0], x0: v[1..].to_vec() }.sample(grid)
        }
        "bump" => {
            let idx = if args.is_empty() {
                MultiIndex::zero(grid.dim)
            } else {
                let v: Vec<usize> = args
                    .split(',')
                    .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad index {p}"))))
                    .collect::<Result<_, _>>()?;
                if v.len() != grid.dim {
                    return Err(Error::Parse("bump index dimension".into()));
                }
                MultiIndex(v)
            };
            TestFunction::BumpPsi { index: idx }.sample(grid)
        }
        "moment_cancelled" => {
            let m0 = args.parse::<usize>().map_err(|_| Error::Parse(format!("bad m0 {args}")))?;
            TestFunction::MomentCancelled { m0 }.sample(grid)
        }
        "csv" => {
            let f = std::fs::File::open(args)
                .map_err(|e| Error::Parse(format!("cannot open input {args}: {e}")))?;
            SampledField::read_csv(&mut std::io::BufReader::new(f))
        }
        other => Err(Error::Parse(format!("unknown input {other}"))),
    }
}
