//! Homogeneous Fourier symbols and their closed-form spatial kernels.
//!
//! The symbol family is radial powers with a monomial factor,
//! Ω(ξ) = (iξ)^𝐣 ‖ξ‖^ρ, which is closed under the weighting Ω ↦ (iξ)^𝐣 Ω
//! and under products. Spatial kernels are sums of terms c·x^𝐢·‖x‖^β,
//! closed under differentiation; the base kernel K_0 = c_{γ,d} ‖x‖^{γ-d}
//! is the inverse transform of ‖ξ‖^{-γ}.

use crate::multi_index::{monomial_eval, MultiIndex};
use crate::special::gamma;
use crate::{Error, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Ω(ξ) = (iξ)^monomial · ‖ξ‖^radial_exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousSymbol {
    pub radial_exponent: f64,
    pub monomial: MultiIndex,
}

impl HomogeneousSymbol {
    /// Homogeneity degree: |monomial| + radial_exponent.
    pub fn degree(&self) -> f64 {
        self.monomial.order() as f64 + self.radial_exponent
    }

    pub fn dim(&self) -> usize {
        self.monomial.dim()
    }

    /// Evaluate at ξ ≠ 0.
    pub fn eval(&self, xi: &[f64]) -> Complex64 {
        let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        let phase = Complex64::i().powu(self.monomial.order() as u32);
        phase * monomial_eval(xi, &self.monomial) * r.powf(self.radial_exponent)
    }
}

/// The symbol ‖ξ‖^{-γ} of degree -γ.
pub fn radial_symbol(gamma_exp: f64, d: usize) -> HomogeneousSymbol {
    HomogeneousSymbol { radial_exponent: -gamma_exp, monomial: MultiIndex::zero(d) }
}

/// Ω_𝐣(ξ) = (iξ)^𝐣 Ω(ξ).
pub fn weight_symbol(omega: &HomogeneousSymbol, j: &MultiIndex) -> HomogeneousSymbol {
    HomogeneousSymbol {
        radial_exponent: omega.radial_exponent,
        monomial: omega.monomial.add(j),
    }
}

/// Pointwise product; degrees add.
pub fn symbol_product(a: &HomogeneousSymbol, b: &HomogeneousSymbol) -> HomogeneousSymbol {
    HomogeneousSymbol {
        radial_exponent: a.radial_exponent + b.radial_exponent,
        monomial: a.monomial.add(&b.monomial),
    }
}

/// c_{γ,d} = π^{-d/2} 2^{-γ} Γ((d-γ)/2) / Γ(γ/2).
pub fn riesz_constant(g: f64, d: usize) -> Result<f64> {
    if !(g > 0.0) {
        return Err(Error::Range(format!("gamma={g} must be positive")));
    }
    let num = gamma((d as f64 - g) / 2.0)?;
    let den = gamma(g / 2.0)?;
    Ok(std::f64::consts::PI.powf(-(d as f64) / 2.0) * 2f64.powf(-g) * num / den)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelTerm {
    pub coef: Complex64,
    pub monomial: MultiIndex,
    pub radial_exponent: f64,
}

/// K(x) = Σ c · x^𝐢 · ‖x‖^β with all terms of one homogeneity degree.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPolyKernel {
    pub terms: Vec<KernelTerm>,
    dim: usize,
}

impl RadialPolyKernel {
    pub fn new(dim: usize, terms: Vec<KernelTerm>) -> Self {
        RadialPolyKernel { terms, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Common homogeneity degree (0 for the empty kernel).
    pub fn degree(&self) -> f64 {
        self.terms
            .first()
            .map(|t| t.monomial.order() as f64 + t.radial_exponent)
            .unwrap_or(0.0)
    }

    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        let r2 = x.iter().map(|v| v * v).sum::<f64>();
        if r2 == 0.0 && !self.terms.is_empty() {
            return Err(Error::SingularPoint);
        }
        let r = r2.sqrt();
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            acc += t.coef * monomial_eval(x, &t.monomial) * r.powf(t.radial_exponent);
        }
        Ok(acc)
    }

    /// Exact ∫_a^b K(x) dx in d=1 (the integrand may straddle 0; requires
    /// every term exponent > -1, i.e. local integrability).
    pub fn integral_1d(&self, a: f64, b: f64) -> Result<Complex64> {
        assert_eq!(self.dim, 1);
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let i = t.monomial.0[0];
            let e = i as f64 + t.radial_exponent;
            if e <= -1.0 {
                return Err(Error::Range(format!("kernel term exponent {e} not integrable")));
            }
            // on x>0 the term is c x^e; on x<0 it is c (-1)^i |x|^e
            let seg = |lo: f64, hi: f64| (hi.powf(e + 1.0) - lo.powf(e + 1.0)) / (e + 1.0);
            let mut v = 0.0;
            if a < 0.0 {
                let hi = b.min(0.0);
                let sgn = if i % 2 == 0 { 1.0 } else { -1.0 };
                v += sgn * seg(-hi, -a);
            }
            if b > 0.0 {
                let lo = a.max(0.0);
                v += seg(lo, b);
            }
            acc += t.coef * v;
        }
        Ok(acc)
    }

    /// Exact integral over the origin-centered disc of area h² (d=2
    /// singular-cell rule). Odd monomial components integrate to zero.
    pub fn disc_integral_2d(&self, h: f64) -> Result<Complex64> {
        assert_eq!(self.dim, 2);
        let rho = h / std::f64::consts::PI.sqrt();
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let (i1, i2) = (t.monomial.0[0], t.monomial.0[1]);
            if i1 % 2 == 1 || i2 % 2 == 1 {
                continue;
            }
            let e = t.radial_exponent + (i1 + i2) as f64;
            if e <= -2.0 {
                return Err(Error::Range(format!("kernel term degree {e} not integrable in 2d")));
            }
            let radial = rho.powf(e + 2.0) / (e + 2.0);
            let ang = 2.0 * gamma((i1 as f64 + 1.0) / 2.0)? * gamma((i2 as f64 + 1.0) / 2.0)?
                / gamma((i1 + i2) as f64 / 2.0 + 1.0)?;
            acc += t.coef * radial * ang;
        }
        Ok(acc)
    }
}

/// K_0(x) = c_{γ,d} ‖x‖^{γ-d}, the inverse transform of ‖ξ‖^{-γ}
/// (by analytic continuation for γ ∈ (d, d+2)).
pub fn kernel_from_radial_symbol(g: f64, d: usize) -> Result<RadialPolyKernel> {
    if !(g > 0.0 && g < d as f64 + 2.0) {
        return Err(Error::Range(format!("gamma={g} outside (0, d+2)")));
    }
    if g >= d as f64 && (g - d as f64).fract() == 0.0 {
        return Err(Error::Range(format!(
            "gamma - d = {} must not be a nonnegative integer",
            g - d as f64
        )));
    }
    let c = riesz_constant(g, d)?;
    Ok(RadialPolyKernel::new(
        d,
        vec![KernelTerm {
            coef: Complex64::new(c, 0.0),
            monomial: MultiIndex::zero(d),
            radial_exponent: g - d as f64,
        }],
    ))
}

/// Symbolic ∂^𝐣 K, term by term:
/// ∂_m (x^𝐢 ‖x‖^β) = i_m x^{𝐢-e_m} ‖x‖^β + β x^{𝐢+e_m} ‖x‖^{β-2}.
pub fn kernel_derivative(k: &RadialPolyKernel, j: &MultiIndex) -> Result<RadialPolyKernel> {
    if j.order() > 4 {
        return Err(Error::UnsupportedOrder(j.order()));
    }
    let mut cur = k.clone();
    for (axis, &reps) in j.0.iter().enumerate() {
        for _ in 0..reps {
            cur = derive_once(&cur, axis);
        }
    }
    Ok(cur)
}

fn derive_once(k: &RadialPolyKernel, axis: usize) -> RadialPolyKernel {
    // collect like terms keyed by (monomial, exponent bits)
    let mut map: BTreeMap<(Vec<usize>, u64), Complex64> = BTreeMap::new();
    let mut add = |mono: Vec<usize>, beta: f64, c: Complex64| {
        if c.norm() == 0.0 {
            return;
        }
        *map.entry((mono, beta.to_bits())).or_insert(Complex64::new(0.0, 0.0)) += c;
    };
    for t in &k.terms {
        let im = t.monomial.0[axis];
        if im > 0 {
            let mut m = t.monomial.0.clone();
            m[axis] -= 1;
            add(m, t.radial_exponent, t.coef * im as f64);
        }
        if t.radial_exponent != 0.0 {
            let mut m = t.monomial.0.clone();
            m[axis] += 1;
            add(m, t.radial_exponent - 2.0, t.coef * t.radial_exponent);
        }
    }
    let terms = map
        .into_iter()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|((mono, bits), coef)| KernelTerm {
            coef,
            monomial: MultiIndex(mono),
            radial_exponent: f64::from_bits(bits),
        })
        .collect();
    RadialPolyKernel::new(k.dim, terms)
}
