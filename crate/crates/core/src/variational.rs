//! The Tomas-Stein functional, quotient, Euler-Lagrange residual and the
//! sharp-constant estimate.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extension::{default_grid, extend};
use crate::quintic::{quintic_self, QuinticEngine, Term};
use crate::solver::AscentResult;
use crate::spectral::{inner_product, CircleFunction};

/// `Φ(f) = Re ⟨Q(f,f,f,f̃,f̃), f⟩`.
pub fn ts_functional(f: &CircleFunction) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    let n = f.bandwidth();
    let q = quintic_self(f, n)?;
    let v = inner_product(&q, f);
    if v.im.abs() > 1e-9 * v.re.abs().max(f64::MIN_POSITIVE) {
        log::warn!("functional has imaginary part {:e} against real part {:e}", v.im, v.re);
    }
    Ok(v.re)
}

/// `‖(fσ)^‖_{L⁶} / ‖f‖_{L²}`.
pub fn quotient(f: &CircleFunction) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let field = extend(f, &default_grid(f.bandwidth()))?;
    Ok(field.l6_norm()? / f.norm())
}

/// Quotient through the functional, `((2π)² Φ(f))^{1/6} / ‖f‖`.
pub fn quotient_from_functional(f: &CircleFunction) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(((2.0 * PI).powi(2) * ts_functional(f)?).max(0.0).powf(1.0 / 6.0) / f.norm())
}

#[derive(Clone, Debug, Serialize)]
pub struct ELReport {
    /// `⟨Q(f), f⟩ / ‖f‖²`.
    pub lambda_fit: f64,
    /// `𝓡̂⁶ ‖f‖⁴ (2π)^{-2}` with the constants-based estimate `𝓡̂`.
    pub lambda_paper: f64,
    pub residual_l2: f64,
    pub residual_sup: f64,
    pub quotient: f64,
    pub out_band: usize,
}

impl ELReport {
    pub fn summary(&self) -> String {
        format!(
            "quotient {:.12} lambda_fit {:.12e} residual {:.3e}",
            self.quotient, self.lambda_fit, self.residual_l2
        )
    }
}

/// Residual of `Q(f,f,f,f̃,f̃) = λ f`, with `Q` kept up to mode `2N` so that
/// energy leaking above the input band counts against the fit.
pub fn el_residual(f: &CircleFunction) -> Result<ELReport> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let n = f.bandwidth();
    let out = 2 * n;
    let ft = f.conj_reflect();
    let terms = [Term::new(1.0, [0, 0, 0, 1, 1])];
    let q = QuinticEngine::default().evaluate(&[f, &ft], &terms, out)?.value;
    let wide = f.with_bandwidth(out);
    let lambda_fit = inner_product(&q, &wide).re / f.norm_sq();
    let r = q.sub(&wide.scale(lambda_fit.into()));
    let residual_sup = r.sup_norm(crate::regularity::sample_grid(out))?;
    let quotient = quotient(f)?;
    let r_hat = constants_quotient()?;
    let lambda_paper = r_hat.powi(6) * f.norm_sq().powi(2) / (2.0 * PI).powi(2);
    Ok(ELReport {
        lambda_fit,
        lambda_paper,
        residual_l2: r.norm(),
        residual_sup,
        quotient,
        out_band: out,
    })
}

fn constants_quotient() -> Result<f64> {
    quotient(&CircleFunction::constant(1.0.into(), 0))
}

/// Where the constant estimate comes from.
pub enum ConstantSource<'a> {
    FromConstants,
    FromSolver(&'a AscentResult),
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantEstimate {
    pub value: f64,
    pub source: &'static str,
    /// Set when the value relies on constants being the extremizers.
    pub conditional: bool,
}

/// `𝓡̂` as the quotient at constants or at a converged solver output.
pub fn constant_estimate(source: ConstantSource) -> Result<ConstantEstimate> {
    match source {
        ConstantSource::FromConstants => Ok(ConstantEstimate {
            value: constants_quotient()?,
            source: "constants",
            conditional: true,
        }),
        ConstantSource::FromSolver(r) => {
            if !r.converged {
                return Err(Error::NotConverged(format!(
                    "solver stopped after {} iterations with residual {:.3e}",
                    r.trace.len(),
                    r.residual
                )));
            }
            Ok(ConstantEstimate {
                value: quotient(&r.f)?,
                source: "solver",
                conditional: true,
            })
        }
    }
}
