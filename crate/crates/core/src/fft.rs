//! The continuous Fourier transform pair
//!
//! ```text
//!   Fhat(ξ) =            ∫ e^{-i⟨x,ξ⟩} f(x) dx
//!   f(x)    = (2π)^{-d}  ∫ e^{+i⟨x,ξ⟩} Fhat(ξ) dξ
//! ```
//!
//! realized on the grid as a phase-corrected DFT. With x_m = -L + m·h and
//! ξ_k = (k - n/2)·π/L the forward rule per axis is
//!
//! ```text
//!   Fhat_k = h · (-1)^{k + n/2} · DFT[ (-1)^m f_m ]_k
//! ```
//!
//! (the sign factors carry both the -L grid origin and the centered
//! frequency layout; h^d gives the Riemann-sum scaling) and the inverse
//! divides by n·h per axis, which makes the pair exactly unitary on the
//! grid up to rounding.

use crate::{DomainTag, Error, Grid, Result, SampledField};
use num_complex::Complex64;
use rustfft::FftPlanner;

fn axis_pass(values: &mut [Complex64], grid: &Grid, inverse: bool) {
    let n = grid.points_per_axis;
    let h = grid.spacing();
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let half_sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };

    let rows: usize = values.len() / n;
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for row in 0..rows {
        let base = row * n;
        if inverse {
            // f_m = (1/(n h)) (-1)^m Σ_k (-1)^{k+n/2} F_k e^{+2πi mk/n}
            for k in 0..n {
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                buf[k] = values[base + k] * (s * half_sign);
            }
            fft.process(&mut buf);
            let scale = 1.0 / (n as f64 * h);
            for m in 0..n {
                let s = if m % 2 == 0 { 1.0 } else { -1.0 };
                values[base + m] = buf[m] * (s * scale);
            }
        } else {
            // F_k = h (-1)^{k+n/2} Σ_m (-1)^m f_m e^{-2πi mk/n}
            for m in 0..n {
                let s = if m % 2 == 0 { 1.0 } else { -1.0 };
                buf[m] = values[base + m] * s;
            }
            fft.process(&mut buf);
            for k in 0..n {
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                values[base + k] = buf[k] * (s * half_sign * h);
            }
        }
    }
}

fn transpose_square(values: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            values.swap(i * n + j, j * n + i);
        }
    }
}

fn transform(field: &SampledField, inverse: bool) -> Vec<Complex64> {
    let grid = field.grid;
    let mut v = field.values.clone();
    match grid.dim {
        1 => axis_pass(&mut v, &grid, inverse),
        2 => {
            let n = grid.points_per_axis;
            axis_pass(&mut v, &grid, inverse); // along the fast axis
            transpose_square(&mut v, n);
            axis_pass(&mut v, &grid, inverse); // along the other axis
            transpose_square(&mut v, n);
        }
        _ => unreachable!(),
    }
    v
}

/// Forward continuous FT of a spatial field onto the dual grid.
pub fn continuous_ft(f: &SampledField) -> Result<SampledField> {
    f.expect_tag(DomainTag::Spatial)?;
    Ok(SampledField { grid: f.grid, values: transform(f, false), tag: DomainTag::Frequency })
}

/// Inverse continuous FT of a frequency field back onto the spatial grid.
pub fn continuous_ift(f: &SampledField) -> Result<SampledField> {
    f.expect_tag(DomainTag::Frequency)?;
    Ok(SampledField { grid: f.grid, values: transform(f, true), tag: DomainTag::Spatial })
}

/// Circular (toroidal) convolution: out(x) = h^d Σ_y K(wrap(x - y)) g(y),
/// with the kernel supplied as samples over the wrapped offset grid in the
/// same row-major layout as the field.
pub fn circular_convolution(kernel_offsets: &[Complex64], g: &SampledField) -> Result<Vec<Complex64>> {
    let grid = g.grid;
    if kernel_offsets.len() != grid.len() {
        return Err(Error::GridMismatch("kernel table size".into()));
    }
    let kf = SampledField::new(grid, kernel_offsets.to_vec(), DomainTag::Spatial)?;
    let mut ka = kf.values.clone();
    let mut ga = g.values.clone();
    // plain (unphased) DFT along each axis is all we need for convolution
    plain_fft(&mut ka, &grid, false);
    plain_fft(&mut ga, &grid, false);
    for (a, b) in ga.iter_mut().zip(&ka) {
        *a *= b;
    }
    plain_fft(&mut ga, &grid, true);
    let scale = grid.spacing().powi(grid.dim as i32) / grid.len() as f64;
    for a in ga.iter_mut() {
        *a *= scale;
    }
    Ok(ga)
}

/// Linear convolution by zero padding each axis to 2n: the kernel is
/// supplied as a lookup over signed offsets j ∈ [-(n-1), n-1] per axis.
pub fn linear_convolution(
    kernel: impl Fn(&[i64]) -> Complex64,
    g: &SampledField,
) -> Result<Vec<Complex64>> {
    let grid = g.grid;
    let n = grid.points_per_axis;
    let m = 2 * n;
    match grid.dim {
        1 => {
            let mut ka = vec![Complex64::new(0.0, 0.0); m];
            for j in -(n as i64 - 1)..=(n as i64 - 1) {
                ka[j.rem_euclid(m as i64) as usize] = kernel(&[j]);
            }
            let mut ga = vec![Complex64::new(0.0, 0.0); m];
            ga[..n].copy_from_slice(&g.values);
            let big = Grid::new(1, 1.0, m)?;
            plain_fft(&mut ka, &big, false);
            plain_fft(&mut ga, &big, false);
            for (a, b) in ga.iter_mut().zip(&ka) {
                *a *= b;
            }
            plain_fft(&mut ga, &big, true);
            let scale = grid.spacing() / m as f64;
            Ok((0..n).map(|i| ga[i] * scale).collect())
        }
        2 => {
            let mut ka = vec![Complex64::new(0.0, 0.0); m * m];
            for j0 in -(n as i64 - 1)..=(n as i64 - 1) {
                for j1 in -(n as i64 - 1)..=(n as i64 - 1) {
                    let r = j0.rem_euclid(m as i64) as usize;
                    let c = j1.rem_euclid(m as i64) as usize;
                    ka[r * m + c] = kernel(&[j0, j1]);
                }
            }
            let mut ga = vec![Complex64::new(0.0, 0.0); m * m];
            for i0 in 0..n {
                for i1 in 0..n {
                    ga[i0 * m + i1] = g.values[i0 * n + i1];
                }
            }
            let big = Grid::new(2, 1.0, m)?;
            plain_fft(&mut ka, &big, false);
            plain_fft(&mut ga, &big, false);
            for (a, b) in ga.iter_mut().zip(&ka) {
                *a *= b;
            }
            plain_fft(&mut ga, &big, true);
            let scale = grid.spacing().powi(2) / (m * m) as f64;
            let mut out = vec![Complex64::new(0.0, 0.0); n * n];
            for i0 in 0..n {
                for i1 in 0..n {
                    out[i0 * n + i1] = ga[i0 * m + i1] * scale;
                }
            }
            Ok(out)
        }
        _ => unreachable!(),
    }
}

fn plain_fft(values: &mut [Complex64], grid: &Grid, inverse: bool) {
    let n = grid.points_per_axis;
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let rows = values.len() / n;
    for row in 0..rows {
        fft.process(&mut values[row * n..(row + 1) * n]);
    }
    if grid.dim == 2 || values.len() != n {
        // second axis for 2d layouts (values.len() = n*n)
        if values.len() == n * n {
            transpose_square(values, n);
            for row in 0..rows {
                fft.process(&mut values[row * n..(row + 1) * n]);
            }
            transpose_square(values, n);
        }
    }
}
