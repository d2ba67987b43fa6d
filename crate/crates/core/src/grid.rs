//! Uniform grids over the box [-L, L)^d and complex fields sampled on them.
//!
//! Node coordinates are x_m = -L + m·h with h = 2L/n; the dual grid has
//! spacing Δξ = π/L and frequencies ξ_k = (k - n/2)·Δξ per axis. Fields are
//! stored row-major with the first axis slowest.

use crate::{Error, Result};
use num_complex::Complex64;
use std::io::{BufRead, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainTag {
    Spatial,
    Frequency,
}

impl DomainTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            DomainTag::Spatial => "spatial",
            DomainTag::Frequency => "frequency",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub dim: usize,
    pub half_width: f64,
    pub points_per_axis: usize,
}

impl Grid {
    pub fn new(dim: usize, half_width: f64, points_per_axis: usize) -> Result<Self> {
        if dim == 0 || dim > 2 {
            return Err(Error::Range(format!("dimension {dim} not in {{1,2}}")));
        }
        if !(half_width > 0.0) {
            return Err(Error::Range("half_width must be positive".into()));
        }
        if points_per_axis == 0 || points_per_axis % 2 != 0 {
            return Err(Error::Range("points_per_axis must be positive even".into()));
        }
        Ok(Grid { dim, half_width, points_per_axis })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points_per_axis as f64
    }

    pub fn freq_spacing(&self) -> f64 {
        std::f64::consts::PI / self.half_width
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spatial coordinate along one axis.
    pub fn axis_coord(&self, m: usize) -> f64 {
        -self.half_width + m as f64 * self.spacing()
    }

    /// Dual coordinate along one axis.
    pub fn axis_freq(&self, k: usize) -> f64 {
        (k as f64 - self.points_per_axis as f64 / 2.0) * self.freq_spacing()
    }

    /// Row-major index -> per-axis indices.
    pub fn unravel(&self, idx: usize) -> Vec<usize> {
        let n = self.points_per_axis;
        match self.dim {
            1 => vec![idx],
            2 => vec![idx / n, idx % n],
            _ => unreachable!(),
        }
    }

    pub fn ravel(&self, ix: &[usize]) -> usize {
        let n = self.points_per_axis;
        match self.dim {
            1 => ix[0],
            2 => ix[0] * n + ix[1],
            _ => unreachable!(),
        }
    }

    /// Spatial coordinates of a flat index.
    pub fn coords(&self, idx: usize) -> Vec<f64> {
        self.unravel(idx).iter().map(|&m| self.axis_coord(m)).collect()
    }

    /// Frequency coordinates of a flat index.
    pub fn freqs(&self, idx: usize) -> Vec<f64> {
        self.unravel(idx).iter().map(|&k| self.axis_freq(k)).collect()
    }

    /// Flat index of the spatial origin / zero frequency node.
    pub fn center_index(&self) -> usize {
        let n = self.points_per_axis;
        match self.dim {
            1 => n / 2,
            2 => (n / 2) * n + n / 2,
            _ => unreachable!(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SampledField {
    pub grid: Grid,
    pub values: Vec<Complex64>,
    pub tag: DomainTag,
}

impl SampledField {
    pub fn new(grid: Grid, values: Vec<Complex64>, tag: DomainTag) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "values.len()={} but grid holds {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(SampledField { grid, values, tag })
    }

    pub fn zeros(grid: Grid, tag: DomainTag) -> Self {
        SampledField { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()], tag }
    }

    /// Sample a real-valued function of the spatial coordinates.
    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|i| Complex64::new(f(&grid.coords(i)), 0.0))
            .collect();
        SampledField { grid, values, tag: DomainTag::Spatial }
    }

    pub fn expect_tag(&self, tag: DomainTag) -> Result<()> {
        if self.tag != tag {
            return Err(Error::DomainTag { expected: tag.as_str(), got: self.tag.as_str() });
        }
        Ok(())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest |value| over boundary nodes (any axis index 0 or n-1).
    pub fn edge_sup(&self) -> f64 {
        let n = self.grid.points_per_axis;
        let mut m = 0.0f64;
        for i in 0..self.grid.len() {
            let ix = self.grid.unravel(i);
            if ix.iter().any(|&a| a == 0 || a == n - 1) {
                m = m.max(self.values[i].norm());
            }
        }
        m
    }

    /// CSV per the interchange format: a comment header with the grid
    /// metadata, then `index, re, im` rows in row-major order.
    pub fn write_csv(&self, w: &mut impl Write) -> Result<()> {
        writeln!(
            w,
            "# d={} L={} n={} tag={}",
            self.grid.dim,
            self.grid.half_width,
            self.grid.points_per_axis,
            self.tag.as_str()
        )?;
        writeln!(w, "index, re, im")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{}, {:.17e}, {:.17e}", i, v.re, v.im)?;
        }
        Ok(())
    }

    pub fn read_csv(r: &mut impl BufRead) -> Result<Self> {
        let mut header = String::new();
        r.read_line(&mut header)?;
        let header = header.trim();
        if !header.starts_with('#') {
            return Err(Error::Parse("missing grid header".into()));
        }
        let mut d = None;
        let mut l = None;
        let mut n = None;
        let mut tag = None;
        for piece in header.trim_start_matches('#').split_whitespace() {
            let (k, v) = piece
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field {piece}")))?;
            match k {
                "d" => d = Some(v.parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?),
                "L" => l = Some(v.parse::<f64>().map_err(|e| Error::Parse(e.to_string()))?),
                "n" => n = Some(v.parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?),
                "tag" => {
                    tag = Some(match v {
                        "spatial" => DomainTag::Spatial,
                        "frequency" => DomainTag::Frequency,
                        other => return Err(Error::Parse(format!("unknown tag {other}"))),
                    })
                }
                _ => return Err(Error::Parse(format!("unknown header key {k}"))),
            }
        }
        let grid = Grid::new(
            d.ok_or_else(|| Error::Parse("header missing d".into()))?,
            l.ok_or_else(|| Error::Parse("header missing L".into()))?,
            n.ok_or_else(|| Error::Parse("header missing n".into()))?,
        )?;
        let tag = tag.ok_or_else(|| Error::Parse("header missing tag".into()))?;
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        let mut line = String::new();
        r.read_line(&mut line)?; // column header
        loop {
            line.clear();
            if r.read_line(&mut line)? == 0 {
                break;
            }
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let cols: Vec<&str> = t.split(',').map(str::trim).collect();
            if cols.len() != 3 {
                return Err(Error::Parse(format!("bad row: {t}")));
            }
            let idx: usize = cols[0].parse().map_err(|_| Error::Parse(format!("bad index {t}")))?;
            if idx >= values.len() {
                return Err(Error::Parse(format!("index {idx} out of range")));
            }
            let re: f64 = cols[1].parse().map_err(|_| Error::Parse(format!("bad re {t}")))?;
            let im: f64 = cols[2].parse().map_err(|_| Error::Parse(format!("bad im {t}")))?;
            values[idx] = Complex64::new(re, im);
        }
        SampledField::new(grid, values, tag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_geometry() {
        let g = Grid::new(1, 20.0, 8).unwrap();
        assert_eq!(g.spacing(), 5.0);
        assert_eq!(g.axis_coord(0), -20.0);
        assert_eq!(g.axis_coord(4), 0.0);
        assert!((g.freq_spacing() - std::f64::consts::PI / 20.0).abs() < 1e-15);
        assert_eq!(g.axis_freq(4), 0.0);
        assert_eq!(g.center_index(), 4);
    }

    #[test]
    fn rejects_odd_n() {
        assert!(Grid::new(1, 1.0, 7).is_err());
        assert!(Grid::new(3, 1.0, 8).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let g = Grid::new(2, 3.0, 4).unwrap();
        let f = SampledField::from_fn(g, |x| x[0] + 2.0 * x[1]);
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let back = SampledField::read_csv(&mut std::io::BufReader::new(&buf[..])).unwrap();
        assert_eq!(back.grid, f.grid);
        assert_eq!(back.tag, DomainTag::Spatial);
        for (a, b) in back.values.iter().zip(&f.values) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn ravel_unravel_2d() {
        let g = Grid::new(2, 1.0, 6).unwrap();
        for i in 0..g.len() {
            assert_eq!(g.ravel(&g.unravel(i)), i);
        }
    }
}
