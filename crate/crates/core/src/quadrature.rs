//! Box quadrature on the uniform grid, moments, and Gauss rules.

use crate::multi_index::{monomial_eval, MultiIndex};
use crate::{DomainTag, Result, SampledField};
use num_complex::Complex64;

/// Midpoint-type rule: h^d Σ values.
pub fn integrate(f: &SampledField) -> Result<Complex64> {
    f.expect_tag(DomainTag::Spatial)?;
    let cell = f.grid.spacing().powi(f.grid.dim as i32);
    Ok(f.values.iter().sum::<Complex64>() * cell)
}

/// ∫ x^𝐢 f(x) dx by the same rule.
pub fn spatial_moment(f: &SampledField, i: &MultiIndex) -> Result<Complex64> {
    f.expect_tag(DomainTag::Spatial)?;
    let cell = f.grid.spacing().powi(f.grid.dim as i32);
    let mut acc = Complex64::new(0.0, 0.0);
    for idx in 0..f.grid.len() {
        acc += f.values[idx] * monomial_eval(&f.grid.coords(idx), i);
    }
    Ok(acc * cell)
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// by Newton iteration on P_n with the usual cosine initial guesses.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_pd(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_pd(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The 64-point Gauss-Legendre rule mapped to (0, 1), shared by the
/// t-integrals of the spatial potential path and the H kernels.
pub fn gauss_legendre_unit64() -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(64);
    (
        x.iter().map(|t| 0.5 * (t + 1.0)).collect(),
        w.iter().map(|v| 0.5 * v).collect(),
    )
}

/// Nodes and weights of the n-point Gauss-Hermite rule (weight e^{-x^2}).
/// Roots are bracketed by sign changes of the orthonormal polynomial and
/// polished by Newton; weights use w_i = 1 / Σ_{k<n} p_k(x_i)^2.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let hi = (2.0 * n as f64 + 2.0).sqrt();
    let probes = 40 * n;
    let mut roots = Vec::with_capacity(n);
    let mut prev_x = -hi;
    let mut prev_p = hermite_ortho(n, prev_x).0;
    for i in 1..=probes {
        let x = -hi + 2.0 * hi * i as f64 / probes as f64;
        let p = hermite_ortho(n, x).0;
        if prev_p == 0.0 {
            roots.push(prev_x);
        } else if p.signum() != prev_p.signum() {
            // newton from the bracket midpoint
            let mut r = 0.5 * (prev_x + x);
            for _ in 0..100 {
                let (pv, dv) = hermite_ortho(n, r);
                let dx = pv / dv;
                r -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            roots.push(r);
        }
        prev_x = x;
        prev_p = p;
    }
    assert_eq!(roots.len(), n, "gauss_hermite: found {} of {} roots", roots.len(), n);
    let weights = roots
        .iter()
        .map(|&r| {
            let mut s = 0.0;
            let mut p0 = std::f64::consts::PI.powf(-0.25);
            let mut p1 = std::f64::consts::SQRT_2 * r * p0;
            s += p0 * p0;
            if n > 1 {
                s += p1 * p1;
            }
            for k in 1..n - 1 {
                let kf = k as f64;
                let p2 = ((2.0 / (kf + 1.0)).sqrt() * r * p1) - ((kf / (kf + 1.0)).sqrt() * p0);
                p0 = p1;
                p1 = p2;
                s += p2 * p2;
            }
            1.0 / s
        })
        .collect();
    (roots, weights)
}

/// Orthonormal Hermite polynomial p_n (weight e^{-x^2}) and its derivative.
fn hermite_ortho(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = std::f64::consts::PI.powf(-0.25);
    if n == 0 {
        return (p0, 0.0);
    }
    let mut p1 = std::f64::consts::SQRT_2 * x * p0;
    for k in 1..n {
        let kf = k as f64;
        let p2 = (2.0 / (kf + 1.0)).sqrt() * x * p1 - (kf / (kf + 1.0)).sqrt() * p0;
        p0 = p1;
        p1 = p2;
    }
    // p_n' = sqrt(2n) p_{n-1}
    let d = (2.0 * n as f64).sqrt() * p0;
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Grid;

    #[test]
    fn box_measure() {
        let g = Grid::new(1, 1.0, 4).unwrap();
        let f = SampledField::from_fn(g, |_| 1.0);
        assert!((integrate(&f).unwrap().re - 2.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_integral() {
        let g = Grid::new(1, 20.0, 2048).unwrap();
        let f = SampledField::from_fn(g, |x| (-x[0] * x[0] / 2.0).exp());
        let v = integrate(&f).unwrap().re;
        assert!((v - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn odd_function_integrates_to_zero() {
        let g = Grid::new(1, 20.0, 1024).unwrap();
        let f = SampledField::from_fn(g, |x| x[0] * (-x[0] * x[0] / 2.0).exp());
        assert!(integrate(&f).unwrap().norm() < 1e-13);
    }

    #[test]
    fn gaussian_moments() {
        let g = Grid::new(1, 20.0, 2048).unwrap();
        let f = SampledField::from_fn(g, |x| (-x[0] * x[0] / 2.0).exp());
        let sq2pi = (2.0 * std::f64::consts::PI).sqrt();
        let m0 = spatial_moment(&f, &MultiIndex(vec![0])).unwrap().re;
        let m1 = spatial_moment(&f, &MultiIndex(vec![1])).unwrap().norm();
        let m2 = spatial_moment(&f, &MultiIndex(vec![2])).unwrap().re;
        assert!((m0 - sq2pi).abs() < 1e-10);
        assert!(m1 < 1e-12);
        // ∫ x^2 e^{-x^2/2} = sqrt(2π) (integration by parts oracle)
        assert!((m2 - sq2pi).abs() < 1e-9);
    }

    #[test]
    fn legendre_exactness() {
        let (x, w) = gauss_legendre(64);
        assert_eq!(x.len(), 64);
        // exact for polynomials of degree <= 127: check a few even powers
        for p in [0usize, 2, 10, 60, 126] {
            let s: f64 = x.iter().zip(&w).map(|(&t, &ww)| ww * t.powi(p as i32)).sum();
            let exact = 2.0 / (p as f64 + 1.0);
            assert!((s - exact).abs() < 1e-12, "p={p}: {s} vs {exact}");
        }
        // odd powers vanish
        let s: f64 = x.iter().zip(&w).map(|(&t, &ww)| ww * t.powi(31)).sum();
        assert!(s.abs() < 1e-14);
    }

    #[test]
    fn hermite_against_gaussian_charfn() {
        // E[e^{-i s a}] for a ~ N(0, σ²): GH-128 vs e^{-σ² s²/2}
        let (x, w) = gauss_hermite(128);
        let sqpi = std::f64::consts::PI.sqrt();
        for (sig, s) in [(1.3, 0.7), (0.5, 2.0), (2.0, 1.0)] {
            let mut re = 0.0;
            let mut im = 0.0;
            for (&t, &ww) in x.iter().zip(&w) {
                let a = std::f64::consts::SQRT_2 * sig * t;
                re += ww * (s * a).cos();
                im -= ww * (s * a).sin();
            }
            re /= sqpi;
            im /= sqpi;
            let exact = (-sig * sig * s * s / 2.0f64).exp();
            assert!((re - exact).abs() < 1e-12 && im.abs() < 1e-12);
        }
        // total mass sqrt(pi)
        let tot: f64 = w.iter().sum();
        assert!((tot - sqpi).abs() < 1e-12);
    }
}
