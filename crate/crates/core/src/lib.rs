//! Numerical kernel for fractional Laplacians, generalized and p-integrable
//! Riesz potentials, and sparse Poisson shot-noise fields on uniform grids.
//!
//! The crate is organized around a small substrate (grids, the continuous
//! Fourier transform realized as a phase-corrected DFT, Gauss quadrature,
//! the Gamma function, multi-index algebra) on top of which the operator
//! layer implements
//!
//! * `(-Δ)^{γ/2}` as the Fourier multiplier `‖ξ‖^γ`,
//! * the classical Riesz potential `I_γ` through both a multiplier path and
//!   a singular-kernel convolution path,
//! * the p-integrable potentials `I_{γ,p} = U_{Ω,p}` (Taylor-corrected
//!   multipliers) through a Fourier path and a spatial path built from the
//!   kernel family `K_j = ∂^j K_0`,
//! * the adjoint `U*_{Ω,p}` and the pointwise kernel `H_{y0}`.
//!
//! The `verification` module turns operator identities (left-inverse,
//! dilation/translation behavior, decay exponents, compositions,
//! non-integrability growth) into machine-checkable reports, and `sparse`
//! simulates white Poisson noise driven through `I*_{γ,1}` with Monte-Carlo
//! validation of characteristic functionals.

pub mod error;
pub mod fft;
pub mod grid;
pub mod multi_index;
pub mod operators;
pub mod quadrature;
pub mod sparse;
pub mod special;
pub mod symbols;
pub mod verification;

pub use error::Error;
pub use grid::{DomainTag, Grid, SampledField};
pub use multi_index::MultiIndex;
pub use operators::{OperatorResult, PExp, PotentialSpec};
pub use symbols::{HomogeneousSymbol, RadialPolyKernel};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
