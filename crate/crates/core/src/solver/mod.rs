//! Extremizer search by normalized ascent, and the contraction lab.

pub mod picard;

pub use picard::{
    decompose, decompose_at, linear_part, nonlinear_part, normalize_lambda, picard_iterate,
    PicardConfig, PicardState, LINEAR_TERMS, NONLINEAR_TERMS,
};

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quintic::{QuinticEngine, Term};
use crate::spectral::{inner_product, CircleFunction};

const ROUNDING: f64 = 8.0 * f64::EPSILON;

#[derive(Clone, Debug, Serialize)]
pub struct AscentConfig {
    pub max_iter: usize,
    /// Initial step along `Q(f)/λ − f`.
    pub step: f64,
    pub halving: f64,
    pub max_halvings: usize,
    /// Stop once `‖Q(f)/λ − f‖` falls below this.
    pub residual_tol: f64,
    /// Stop once an accepted step raises the quotient by less than this
    /// relative amount while the residual is below `1e-6`.
    pub quotient_tol: f64,
    pub bandwidth: usize,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self {
            max_iter: 400,
            step: 1.0,
            halving: 0.5,
            max_halvings: 30,
            residual_tol: 1e-9,
            quotient_tol: 1e-15,
            bandwidth: 16,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceRecord {
    pub k: usize,
    pub quotient: f64,
    pub step: f64,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct AscentResult {
    /// Unit `L²` norm.
    pub f: CircleFunction,
    pub quotient: f64,
    /// `⟨Q(f), f⟩ / ‖f‖²` at the final iterate.
    pub lambda: f64,
    pub residual: f64,
    pub converged: bool,
    pub trace: Vec<TraceRecord>,
}

impl AscentResult {
    /// One JSON object per line.
    pub fn trace_jsonl(&self) -> String {
        self.trace
            .iter()
            .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
            .collect()
    }
}

/// `Q(f,f,f,f̃,f̃)` projected onto the band of `f`.
pub fn galerkin_q(f: &CircleFunction) -> Result<CircleFunction> {
    let ft = f.conj_reflect();
    let terms = [Term::new(1.0, [0, 0, 0, 1, 1])];
    Ok(QuinticEngine::default().evaluate(&[f, &ft], &terms, f.bandwidth())?.value)
}

struct Point {
    f: CircleFunction,
    q: CircleFunction,
    lambda: f64,
    quotient: f64,
}

fn point(f: CircleFunction) -> Result<Point> {
    let q = galerkin_q(&f)?;
    let phi = inner_product(&q, &f).re;
    let norm_sq = f.norm_sq();
    let quotient = ((2.0 * PI).powi(2) * phi).max(0.0).powf(1.0 / 6.0) / norm_sq.sqrt();
    Ok(Point {
        lambda: phi / norm_sq,
        f,
        q,
        quotient,
    })
}

fn unit(f: &CircleFunction) -> CircleFunction {
    f.scale(Complex64::new(1.0 / f.norm(), 0.0))
}

/// Ascent on the quotient along `d = Q(f)/λ − f` with unit-norm
/// renormalization; a step is accepted only if the quotient does not drop,
/// otherwise it is halved.
pub fn ascend(f0: &CircleFunction, config: &AscentConfig) -> Result<AscentResult> {
    if f0.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !(config.step > 0.0 && config.residual_tol > 0.0) {
        return Err(Error::Config("step and tolerance must be positive".into()));
    }
    let mut cur = point(unit(&f0.with_bandwidth(config.bandwidth)))?;
    let mut trace = Vec::new();
    let mut step = config.step;
    let mut converged = false;
    let mut residual = f64::INFINITY;
    for k in 0..config.max_iter {
        let d = cur.q.scale(Complex64::new(1.0 / cur.lambda, 0.0)).sub(&cur.f);
        residual = d.norm();
        trace.push(TraceRecord {
            k,
            quotient: cur.quotient,
            step,
            residual,
        });
        if residual < config.residual_tol {
            converged = true;
            break;
        }
        let mut accepted = None;
        let mut s = step;
        for _ in 0..=config.max_halvings {
            let cand = point(unit(&cur.f.axpby(Complex64::new(1.0, 0.0), &d, Complex64::new(s, 0.0))))?;
            // near the maximum the quotient is flat to rounding; a step that
            // loses no more than that still shrinks the residual
            if cand.quotient >= cur.quotient * (1.0 - ROUNDING) {
                accepted = Some(cand);
                break;
            }
            s *= config.halving;
        }
        match accepted {
            Some(next) => {
                let gain = (next.quotient - cur.quotient) / cur.quotient;
                cur = next;
                step = (s / config.halving).min(config.step);
                if gain.abs() < config.quotient_tol && residual < 1e-6 && s < config.step * 1e-3 {
                    converged = true;
                    break;
                }
            }
            None => {
                // no admissible step at machine precision: a critical point
                // up to rounding
                converged = residual < 1e-6;
                break;
            }
        }
    }
    let f = cur.f.clone();
    Ok(AscentResult {
        quotient: cur.quotient,
        lambda: cur.lambda,
        residual,
        converged,
        trace,
        f,
    })
}

/// Seeded random start with coefficients decaying like `1/(1+|n|)`.
pub fn random_start(n: usize, seed: u64) -> CircleFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CircleFunction::from_coeffs(
        (-(n as i64)..=n as i64)
            .map(|k| {
                let w = 1.0 / (1.0 + k.abs() as f64);
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * w
            })
            .collect(),
    )
}

/// Several independent ascents, run in parallel.
pub fn ascend_many(starts: &[CircleFunction], config: &AscentConfig) -> Vec<Result<AscentResult>> {
    use rayon::prelude::*;
    starts.par_iter().map(|f| ascend(f, config)).collect()
}

/// An extremizer with its modulation `e^{ix·ξ}` and winding `e^{iwθ}`
/// factored out.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReduction {
    pub xi: [f64; 2],
    pub winding: i64,
    #[serde(skip)]
    pub reduced: CircleFunction,
}

impl SymmetryReduction {
    /// Largest `|c_n|` of the reduced function over `|n| ≥ from`.
    pub fn tail(&self, from: i64) -> f64 {
        let n = self.reduced.bandwidth() as i64;
        (-n..=n)
            .filter(|k| k.abs() >= from)
            .map(|k| self.reduced.coeff(k).norm())
            .fold(0.0, f64::max)
    }
}

/// Read off `ξ` and the winding from the unwrapped phase of `f`, then
/// divide them out. Needs `f` free of zeros on the circle.
pub fn reduce_symmetry(f: &CircleFunction) -> Result<SymmetryReduction> {
    let n = f.bandwidth();
    let m = (8 * n + 8).next_power_of_two();
    let v = f.samples(m)?;
    let floor = v.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if !(floor > 1e-8 * f.norm()) {
        return Err(Error::Precondition("function vanishes on the circle".into()));
    }
    let mut phase = Vec::with_capacity(m);
    let mut acc = v[0].arg();
    phase.push(acc);
    for j in 1..m {
        acc += (v[j] / v[j - 1]).arg();
        phase.push(acc);
    }
    let total = acc + (v[0] / v[m - 1]).arg() - v[0].arg();
    let winding = (total / (2.0 * PI)).round() as i64;
    let h = 2.0 * PI / m as f64;
    let (mut a, mut b) = (0.0, 0.0);
    for (j, p) in phase.iter().enumerate() {
        let t = j as f64 * h;
        let p = p - winding as f64 * t;
        a += p * t.cos();
        b += p * t.sin();
    }
    let xi = [2.0 * a / m as f64, 2.0 * b / m as f64];
    let w: Vec<Complex64> = v
        .iter()
        .enumerate()
        .map(|(j, z)| {
            let t = j as f64 * h;
            z * Complex64::from_polar(1.0, -(xi[0] * t.cos() + xi[1] * t.sin() + winding as f64 * t))
        })
        .collect();
    Ok(SymmetryReduction {
        xi,
        winding,
        reduced: CircleFunction::from_samples(w, n)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{apply_symmetry, SymmetryElement};

    #[test]
    fn reduction_recovers_modulation() {
        let c = CircleFunction::constant(Complex64::new(0.6, -0.8), 16);
        let g = apply_symmetry(&c, &SymmetryElement::modulation([0.7, -1.1])).unwrap();
        let g = g.with_bandwidth(16).map_coeffs(|k, z| z * Complex64::from_polar(1.0, 0.3 * k as f64));
        let r = reduce_symmetry(&g).unwrap();
        assert_eq!(r.winding, 0);
        assert!(r.tail(1) < 1e-12, "{}", r.tail(1));
        assert!((r.reduced.coeff(0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduction_counts_winding() {
        let r = reduce_symmetry(&CircleFunction::mode(3, 4)).unwrap();
        assert_eq!(r.winding, 3);
        assert!(r.xi[0].abs() < 1e-12 && r.xi[1].abs() < 1e-12);
    }
}
