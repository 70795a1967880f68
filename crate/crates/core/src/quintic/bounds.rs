//! Quintilinear bounds `‖Q(f₁,…,f₅)‖ ≤ C ∏‖f_i‖` at `s = 0` and on the
//! difference-quotient scale.
//!
//! Cauchy-Schwarz gives `|Q(f)(x)|² ≤ Q(|f₁|²,…,|f₅|²)(x) · μ₅(x)`, so
//! `‖Q(f)‖² ≤ Ĉ₅ ∫ Q(|f₁|²,…,|f₅|²) dθ` with `Ĉ₅ ≥ sup μ₅`. This per-instance
//! bound is what is checked; it is not reduced further to `∏‖f_i‖²`.

use std::f64::consts::PI;

use serde::Serialize;

use super::engine::{QuinticEngine, Term};
use crate::error::{Error, Result};
use crate::regularity::{calh_estimate, dyadic_steps};
use crate::spectral::CircleFunction;

fn full_q(fs: [&CircleFunction; 5]) -> Result<CircleFunction> {
    let band: usize = fs.iter().map(|f| f.bandwidth()).sum();
    let terms = [Term::new(1.0, [0, 1, 2, 3, 4])];
    Ok(QuinticEngine::default().evaluate(&fs, &terms, band)?.value)
}

/// `√(Ĉ₅ ∫ Q(|g₁|²,…,|g₅|²) dθ)`.
pub fn cauchy_schwarz_bound(gs: [&CircleFunction; 5], c5: f64) -> Result<f64> {
    let sq: Vec<CircleFunction> = gs.iter().map(|g| g.abs_squared()).collect();
    let refs: Vec<&CircleFunction> = sq.iter().collect();
    let terms = [Term::new(1.0, [0, 1, 2, 3, 4])];
    let q0 = QuinticEngine::default().evaluate(&refs, &terms, 0)?.value.coeff(0).re;
    Ok((c5 * 2.0 * PI * q0.max(0.0)).sqrt())
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub s: f64,
    /// `‖Q‖ / ∏‖f_i‖` in the chosen scale.
    pub ratio: f64,
    /// Bound on the same ratio from the measured constant, when available.
    pub bound: Option<f64>,
    pub numerator: f64,
    pub denominator: f64,
    pub constant: f64,
    pub within: Option<bool>,
}

fn norm_in_scale(f: &CircleFunction, s: f64) -> f64 {
    if s == 0.0 {
        f.norm()
    } else {
        calh_estimate(f, s)
    }
}

/// `‖Q(f₁,…,f₅)‖ / ∏‖f_i‖` with norms in `L²` (`s = 0`) or the
/// difference-quotient scale `𝓗ˢ`.
pub fn quintilinear_bound_ratio(fs: [&CircleFunction; 5], s: f64) -> Result<f64> {
    Ok(quintilinear_bound_check(fs, s, None)?.ratio)
}

/// Ratio together with the Cauchy-Schwarz bound for constant `c5`. For
/// `0 < s < 1` the difference `Q∘R_t − Q` is split into five terms, each
/// with one difference `R_t f_i − f_i` in its slot, and each term is
/// bounded separately.
pub fn quintilinear_bound_check(
    fs: [&CircleFunction; 5],
    s: f64,
    c5: Option<f64>,
) -> Result<BoundReport> {
    if s < 0.0 {
        return Err(Error::Domain(format!("smoothness index must be nonnegative, got {s}")));
    }
    if let Some(i) = fs.iter().position(|f| f.is_zero()) {
        return Err(Error::UndefinedRatio(format!("input {} is zero", i + 1)));
    }
    let q = full_q(fs)?;
    let numerator = norm_in_scale(&q, s);
    let denominator: f64 = fs.iter().map(|f| norm_in_scale(f, s)).product();
    let ratio = numerator / denominator;
    let bound = match c5 {
        None => None,
        Some(c5) if s == 0.0 => Some(cauchy_schwarz_bound(fs, c5)?),
        Some(c5) if s < 1.0 => {
            let base = cauchy_schwarz_bound(fs, c5)?;
            let mut worst: f64 = 0.0;
            for t in dyadic_steps() {
                let rotated: Vec<CircleFunction> = fs.iter().map(|f| f.rotate(t)).collect();
                let mut sum = 0.0;
                for i in 0..5 {
                    let diff = rotated[i].sub(fs[i]);
                    let slots: [&CircleFunction; 5] = std::array::from_fn(|j| {
                        if j < i {
                            &rotated[j]
                        } else if j == i {
                            &diff
                        } else {
                            fs[j]
                        }
                    });
                    sum += cauchy_schwarz_bound(slots, c5)?;
                }
                worst = worst.max(sum / t.powf(s));
            }
            Some(base + worst)
        }
        Some(_) => None,
    };
    let bound_ratio = bound.map(|b| b / denominator);
    Ok(BoundReport {
        s,
        ratio,
        bound: bound_ratio,
        numerator,
        denominator,
        constant: c5.unwrap_or(f64::NAN),
        within: bound_ratio.map(|b| ratio <= b * (1.0 + 1e-9)),
    })
}
