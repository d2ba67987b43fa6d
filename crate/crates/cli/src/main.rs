//! rieszlab: apply fractional-Laplacian/Riesz operators, run the
//! verification suites, simulate sparse Poisson fields, and compare
//! characteristic functionals.
//!
//! Exit codes: 0 success, 1 check/agreement failure, 2 configuration
//! error, 3 numeric precondition failure.

mod config;

use clap::{Args, Parser, Subcommand};
use config::{parse_amplitude, parse_input, ConfigFile};
use rieszlab_core::operators::{
    adjoint_integrable_potential, fractional_laplacian, integrable_potential_fourier,
    integrable_potential_spatial, riesz_potential_convolution, riesz_potential_fourier,
    OperatorResult, PExp, PathUsed, PotentialSpec,
};
use rieszlab_core::sparse::{
    charfun_closed_from_field, charfun_monte_carlo, pointwise_charfun, potential_field,
    render_field, sample_realization, PoissonConfig,
};
use rieszlab_core::verification::run_suite;
use rieszlab_core::{Error, Grid, SampledField};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rieszlab", version, about)]
struct Cli {
    /// JSON config file; command-line flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: $RIESZLAB_OUT or the working directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for all stochastic commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores; results are bit-stable either way).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct GridArgs {
    /// Box half-width L (box is [-L, L) per axis).
    #[arg(long)]
    l: Option<f64>,
    /// Grid points per axis (even).
    #[arg(long)]
    n: Option<usize>,
    /// Dimension (1 or 2).
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Apply an operator to a named test function or a CSV field.
    Apply {
        /// frac_laplacian | riesz | riesz_conv | integrable_riesz |
        /// integrable_riesz_fourier | adjoint
        #[arg(long)]
        op: Option<String>,
        #[arg(long)]
        gamma: Option<f64>,
        /// Integrability index p >= 1, or "inf".
        #[arg(long)]
        p: Option<String>,
        /// gaussian[:sigma] | shifted_gaussian:sigma,x0 | bump[:i] |
        /// moment_cancelled:m0 | csv:path
        #[arg(long)]
        input: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Run a verification suite and emit JSON-lines reports.
    Verify {
        /// left_inverse | dilation | translation | decay | composition |
        /// integrability | all
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        gamma1: Option<f64>,
        #[arg(long)]
        gamma2: Option<f64>,
    },
    /// Draw Poisson realizations and render the sparse field.
    Simulate {
        #[arg(long)]
        lambda: Option<f64>,
        /// Impulse box half-width B.
        #[arg(long)]
        box_b: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        /// det:a0 | gaussian:sigma | laplace:b | uniform:lo,hi
        #[arg(long)]
        amplitude: Option<String>,
        /// Number of realizations to emit.
        #[arg(long, default_value_t = 1)]
        realizations: u64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Closed-form vs Monte-Carlo characteristic functionals.
    Charfun {
        /// functional | pointwise
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        box_b: Option<f64>,
        #[arg(long)]
        amplitude: Option<String>,
        /// Comma-separated t values.
        #[arg(long)]
        t: Option<String>,
        #[arg(long)]
        n_samples: Option<usize>,
        /// Evaluation point for pointwise mode.
        #[arg(long)]
        y0: Option<f64>,
        /// Test function for functional mode (default bump).
        #[arg(long)]
        input: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Decay(_) | Error::Pole(_) | Error::SingularPoint | Error::EmptyWindow => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let out_dir = cli
        .out
        .clone()
        .or_else(|| std::env::var_os("RIESZLAB_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let cfg = match cli.config.as_deref().map(ConfigFile::load).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(cli, cfg, &out_dir) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn make_grid(args: &GridArgs, cfg: &ConfigFile, default_n: usize) -> Result<Grid, Error> {
    let d = args.d.or(cfg.d).unwrap_or(1);
    let l = args.l.or(cfg.l).unwrap_or(20.0);
    let n = args.n.or(cfg.n).unwrap_or(default_n);
    Grid::new(d, l, n)
}

fn parse_p(s: Option<&str>, cfg: &ConfigFile) -> Result<PExp, Error> {
    let s = s
        .map(str::to_owned)
        .or_else(|| cfg.p.clone())
        .unwrap_or_else(|| "1".into());
    if s == "inf" || s == "infinity" {
        return Ok(PExp::Infinity);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad p value {s}")))?;
    Ok(PExp::Finite(v))
}

fn write_operator_output(res: &OperatorResult, out_dir: &Path) -> Result<(), Error> {
    std::fs::create_dir_all(out_dir)?;
    let mut f = std::fs::File::create(out_dir.join("field.csv"))?;
    res.field.write_csv(&mut f)?;
    let diag = serde_json::json!({
        "path": res.path_used.as_str(),
        "tail_sup": res.diagnostics.get("tail_sup").copied().unwrap_or(0.0),
        "flagged_nodes": res.flagged_nodes,
        "diagnostics": res.diagnostics,
    });
    let mut f = std::fs::File::create(out_dir.join("diagnostics.json"))?;
    writeln!(f, "{}", serde_json::to_string_pretty(&diag).expect("json"))?;
    Ok(())
}

fn run(cli: Cli, cfg: ConfigFile, out_dir: &Path) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Apply { op, gamma, p, input, grid } => {
            let grid = make_grid(&grid, &cfg, 2048)?;
            let opname = op.or_else(|| cfg.op.clone()).ok_or_else(|| Error::Parse("--op required".into()))?;
            let gamma = gamma.or(cfg.gamma).ok_or_else(|| Error::Parse("--gamma required".into()))?;
            let pexp = parse_p(p.as_deref(), &cfg)?;
            let input = input.or_else(|| cfg.input.clone()).unwrap_or_else(|| "gaussian".into());
            let field = parse_input(&input, grid)?;
            let res = match opname.as_str() {
                "frac_laplacian" => OperatorResult {
                    field: fractional_laplacian(&field, gamma)?,
                    path_used: PathUsed::Fourier,
                    diagnostics: Default::default(),
                    flagged_nodes: vec![],
                },
                "riesz" => OperatorResult {
                    field: riesz_potential_fourier(&field, gamma)?,
                    path_used: PathUsed::Fourier,
                    diagnostics: Default::default(),
                    flagged_nodes: vec![],
                },
                "riesz_conv" => OperatorResult {
                    field: riesz_potential_convolution(&field, gamma)?,
                    path_used: PathUsed::SpatialKernel,
                    diagnostics: Default::default(),
                    flagged_nodes: vec![],
                },
                "integrable_riesz" => {
                    let spec = PotentialSpec::new(gamma, pexp, grid.dim)?;
                    integrable_potential_spatial(&field, &spec)?
                }
                "integrable_riesz_fourier" => {
                    let spec = PotentialSpec::new(gamma, pexp, grid.dim)?;
                    integrable_potential_fourier(&field, &spec)?
                }
                "adjoint" => {
                    let spec = PotentialSpec::new(gamma, pexp, grid.dim)?;
                    adjoint_integrable_potential(&field, &spec)?
                }
                other => return Err(Error::Parse(format!("unknown operator {other}"))),
            };
            write_operator_output(&res, out_dir)?;
            println!("wrote {}", out_dir.join("field.csv").display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, gamma1, gamma2 } => {
            let suite = suite.or_else(|| cfg.suite.clone()).ok_or_else(|| Error::Parse("--suite required".into()))?;
            if suite.is_empty() {
                return Err(Error::Parse("empty suite selection".into()));
            }
            let reports = if suite == "composition" && (gamma1.is_some() || gamma2.is_some()) {
                let g1 = gamma1.unwrap_or(0.2);
                let g2 = gamma2.unwrap_or(0.3);
                let grid = Grid::new(1, 20.0, 2048)?;
                vec![rieszlab_core::verification::check_composition(
                    g1,
                    g2,
                    1,
                    &rieszlab_core::verification::TestFunction::Gaussian { sigma: 1.0 },
                    grid,
                )?]
            } else {
                run_suite(&suite)?
            };
            std::fs::create_dir_all(out_dir)?;
            let mut file = std::fs::File::create(out_dir.join("reports.jsonl"))?;
            let mut all = true;
            for r in &reports {
                let line = r.to_json_line();
                println!("{line}");
                writeln!(file, "{line}")?;
                all &= r.passed;
            }
            Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Simulate { lambda, box_b, gamma, amplitude, realizations, grid } => {
            let grid = make_grid(&grid, &cfg, 2048)?;
            let lambda = lambda.or(cfg.lambda).unwrap_or(1.0);
            let box_b = box_b.or(cfg.box_b).unwrap_or(grid.half_width / 2.0);
            let gamma = gamma.or(cfg.gamma).unwrap_or(0.5);
            let amp = parse_amplitude(
                &amplitude.or_else(|| cfg.amplitude.clone()).unwrap_or_else(|| "det:1".into()),
            )?;
            let seed = cli.seed.or(cfg.seed).unwrap_or(0);
            let pcfg = PoissonConfig::new(lambda, box_b, grid.dim, amp, seed)?;
            let spec = PotentialSpec::new(gamma, PExp::Finite(1.0), grid.dim)?;
            std::fs::create_dir_all(out_dir)?;
            for m in 0..realizations {
                let r = sample_realization(&pcfg, m);
                let name = if realizations == 1 {
                    "realization.csv".to_string()
                } else {
                    format!("realization_{m}.csv")
                };
                let mut f = std::fs::File::create(out_dir.join(&name))?;
                write!(f, "k")?;
                for a in 0..grid.dim {
                    write!(f, ", x_{}", a + 1)?;
                }
                writeln!(f, ", a")?;
                for (k, (p, a)) in r.points.iter().zip(&r.amplitudes).enumerate() {
                    write!(f, "{k}")?;
                    for v in p {
                        write!(f, ", {v:.17e}")?;
                    }
                    writeln!(f, ", {a:.17e}")?;
                }
                if m == 0 {
                    let (field, flagged) = render_field(&r, &spec, grid)?;
                    let mut f = std::fs::File::create(out_dir.join("field.csv"))?;
                    field.write_csv(&mut f)?;
                    let diag = serde_json::json!({
                        "path": "spatial_kernel",
                        "tail_sup": 0.0,
                        "flagged_nodes": flagged,
                    });
                    let mut f = std::fs::File::create(out_dir.join("diagnostics.json"))?;
                    writeln!(f, "{}", serde_json::to_string_pretty(&diag).expect("json"))?;
                }
            }
            println!("wrote {} realization(s) to {}", realizations, out_dir.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Charfun { mode, gamma, lambda, box_b, amplitude, t, n_samples, y0, input, grid } => {
            let grid = make_grid(&grid, &cfg, 2048)?;
            let mode = mode.or_else(|| cfg.mode.clone()).unwrap_or_else(|| "functional".into());
            let gamma = gamma.or(cfg.gamma).unwrap_or(0.5);
            let lambda = lambda.or(cfg.lambda).unwrap_or(1.0);
            let box_b = box_b.or(cfg.box_b).unwrap_or(grid.half_width);
            let amp = parse_amplitude(
                &amplitude.or_else(|| cfg.amplitude.clone()).unwrap_or_else(|| "det:1".into()),
            )?;
            let seed = cli.seed.or(cfg.seed).unwrap_or(0);
            let n_samples = n_samples.or(cfg.n_samples).unwrap_or(10_000);
            let ts: Vec<f64> = match t.or_else(|| cfg.t.clone()) {
                Some(s) => s
                    .split(',')
                    .map(|v| v.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad t {v}"))))
                    .collect::<Result<_, _>>()?,
                None => vec![0.5, 1.0, 2.0],
            };
            let pcfg = PoissonConfig::new(lambda, box_b, grid.dim, amp, seed)?;
            let spec = PotentialSpec::new(gamma, PExp::Finite(1.0), grid.dim)?;
            std::fs::create_dir_all(out_dir)?;
            let mut file = std::fs::File::create(out_dir.join("charfun.jsonl"))?;
            let mut all_agree = true;
            match mode.as_str() {
                "functional" => {
                    if box_b > grid.half_width {
                        return Err(Error::Spec("impulse box exceeds the grid box".into()));
                    }
                    let input = input.or_else(|| cfg.input.clone()).unwrap_or_else(|| "bump".into());
                    let field = parse_input(&input, grid)?;
                    let g = potential_field(&field, &spec)?;
                    for &tv in &ts {
                        let closed = charfun_closed_from_field(&g, tv, &pcfg);
                        let mc = charfun_monte_carlo(&field, &spec, tv, &pcfg, n_samples)?;
                        let agree = (closed - mc.value()).norm() <= 3.0 * mc.stderr;
                        all_agree &= agree;
                        let row = serde_json::json!({
                            "t": tv,
                            "closed_re": closed.re, "closed_im": closed.im,
                            "mc_re": mc.re, "mc_im": mc.im,
                            "stderr": mc.stderr, "n": mc.n_samples,
                            "agree": agree,
                        });
                        println!("{row}");
                        writeln!(file, "{row}")?;
                    }
                }
                "pointwise" => {
                    let y = vec![y0.or(cfg.y0).unwrap_or(1.0); 1];
                    if grid.dim != 1 {
                        return Err(Error::Spec("pointwise mode is 1-d".into()));
                    }
                    for &tv in &ts {
                        let r = pointwise_charfun(&y, &spec, tv, &pcfg, n_samples)?;
                        let agree = (r.closed - r.mc.value()).norm() <= 3.0 * r.mc.stderr;
                        all_agree &= agree;
                        let row = serde_json::json!({
                            "t": tv,
                            "closed_re": r.closed.re, "closed_im": r.closed.im,
                            "mc_re": r.mc.re, "mc_im": r.mc.im,
                            "stderr": r.mc.stderr, "n": r.mc.n_samples,
                            "agree": agree,
                            "tail_est": r.diagnostics.get("tail_est").copied().unwrap_or(0.0),
                        });
                        println!("{row}");
                        writeln!(file, "{row}")?;
                    }
                }
                other => return Err(Error::Parse(format!("unknown mode {other}"))),
            }
            Ok(if all_agree { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}
