//! Numerical laboratory for the Tomas-Stein extension inequality on the unit
//! circle.
//!
//! The crate evaluates the extension `(fσ)^` of a density on S¹, the
//! quintilinear convolution `Q(f₁,…,f₅) = f₁σ∗⋯∗f₅σ|_{S¹}` that appears in the
//! Euler-Lagrange equation for extremizers, and a family of finite-resolution
//! experiments around it: a sharp-constant estimate, an extremizer search, a
//! contraction-mapping lab and smoothness diagnostics.
//!
//! Conventions used throughout:
//! - plane Fourier transform `ĝ(ξ) = ∫ e^{-ix·ξ} g(x) dx`, so `σ^(ξ) = 2π J₀(|ξ|)`;
//! - circle coefficients `f(θ) = Σ c_n e^{inθ}`;
//! - `F(ρ,φ) = (fσ)^(ρ e^{iφ}) = 2π Σ (-i)ⁿ c_n J_n(ρ) e^{inφ}`;
//! - the Lebesgue exponent of the inequality on S¹ is 6.

pub mod bessel;
pub mod cli;
pub mod error;
pub mod extension;
pub mod quadrature;
pub mod quintic;
pub mod regularity;
pub mod report;
pub mod solver;
pub mod spectral;
pub mod variational;

pub use error::{Error, Result};
pub use spectral::{CircleFunction, SymmetryElement};

/// Version string recorded in result envelopes.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
