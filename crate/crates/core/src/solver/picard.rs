//! Contraction lab: `f = φ + g`, the linear and nonlinear parts of
//! `Q(φ+g, φ+g, φ+g, (φ+g)~, (φ+g)~) − φ` in `g`, and the iteration
//! `h ← 𝓛(φ, g) + 𝓝(φ, h)`.

use num_complex::Complex64;
use serde::Serialize;

use super::galerkin_q;
use crate::error::{Error, Result};
use crate::quintic::{QuinticEngine, Term};
use crate::regularity::calh_estimate;
use crate::spectral::{inner_product, CircleFunction};

// input slots: 0 = φ, 1 = φ̃, 2 = g, 3 = g̃

/// Terms of `𝓛` beyond `−φ`.
pub const LINEAR_TERMS: [Term; 3] = [
    Term::new(1.0, [0, 0, 0, 1, 1]),
    Term::new(2.0, [0, 0, 0, 1, 3]),
    Term::new(3.0, [0, 0, 1, 1, 2]),
];

/// Terms of `𝓝`.
pub const NONLINEAR_TERMS: [Term; 9] = [
    Term::new(1.0, [2, 2, 2, 3, 3]),
    Term::new(3.0, [2, 2, 3, 3, 0]),
    Term::new(2.0, [2, 2, 2, 3, 1]),
    Term::new(3.0, [2, 3, 3, 0, 0]),
    Term::new(6.0, [2, 2, 3, 0, 1]),
    Term::new(1.0, [2, 2, 2, 1, 1]),
    Term::new(1.0, [3, 3, 0, 0, 0]),
    Term::new(6.0, [2, 3, 0, 0, 1]),
    Term::new(3.0, [2, 2, 0, 1, 1]),
];

fn evaluate(phi: &CircleFunction, g: &CircleFunction, terms: &[Term]) -> Result<CircleFunction> {
    let n = phi.bandwidth().max(g.bandwidth());
    let phi = phi.with_bandwidth(n);
    let g = g.with_bandwidth(n);
    let inputs = [&phi, &phi.conj_reflect(), &g, &g.conj_reflect()];
    Ok(QuinticEngine::default().evaluate(&inputs, terms, n)?.value)
}

/// `𝓛(φ, g) = −φ + Q(φφφφ̃φ̃) + 2Q(φφφφ̃g̃) + 3Q(φφφ̃φ̃g)`.
pub fn linear_part(phi: &CircleFunction, g: &CircleFunction) -> Result<CircleFunction> {
    let q = evaluate(phi, g, &LINEAR_TERMS)?;
    Ok(q.sub(phi))
}

/// `𝓝(φ, h)`: the nine terms of degree at least two in `h`.
pub fn nonlinear_part(phi: &CircleFunction, h: &CircleFunction) -> Result<CircleFunction> {
    evaluate(phi, h, &NONLINEAR_TERMS)
}

/// `f·λ^{-1/4}` with `λ = ⟨Q(f), f⟩/‖f‖²`, so that the rescaled function
/// has `λ = 1`.
pub fn normalize_lambda(f: &CircleFunction) -> Result<(CircleFunction, f64)> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let lambda = inner_product(&galerkin_q(f)?, f).re / f.norm_sq();
    Ok((f.scale(Complex64::new(lambda.powf(-0.25), 0.0)), lambda))
}

/// Split at cutoff `k`: `φ` keeps `|n| ≤ k`.
pub fn decompose_at(f: &CircleFunction, k: usize) -> (CircleFunction, CircleFunction) {
    let phi = f.low_pass(k);
    let g = f.sub(&phi);
    (phi, g)
}

/// `f = φ + g` with the smallest cutoff `K` such that `‖g‖ < ε`. When
/// `ε > ‖f‖` the whole function goes to `g`.
pub fn decompose(f: &CircleFunction, eps: f64) -> Result<(CircleFunction, CircleFunction, usize)> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("ε must be positive, got {eps}")));
    }
    let n = f.bandwidth();
    if eps > f.norm() {
        log::warn!("ε = {eps} exceeds ‖f‖ = {}; φ is zero", f.norm());
        return Ok((CircleFunction::zero(n), f.clone(), 0));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut tail = 0.0;
    let mut k = n;
    // grow the tail from the top while it stays below ε²/(2π)
    while k > 0 {
        let e = f.coeff(k as i64).norm_sqr() + f.coeff(-(k as i64)).norm_sqr();
        if tail + e >= eps * eps / two_pi {
            break;
        }
        tail += e;
        k -= 1;
    }
    let (phi, g) = decompose_at(f, k);
    Ok((phi, g, k))
}

#[derive(Clone, Debug, Serialize)]
pub struct PicardConfig {
    pub eps: f64,
    /// Ball radius is `ε^{ball_exponent}`.
    pub ball_exponent: f64,
    /// Smoothness index `s(ε)` of the measuring norm.
    pub scale: f64,
    pub tolerance: f64,
    pub max_steps: usize,
    pub divergence_factor: f64,
}

impl Default for PicardConfig {
    fn default() -> Self {
        Self {
            eps: 0.05,
            ball_exponent: 0.75,
            scale: 0.1,
            tolerance: 1e-12,
            max_steps: 200,
            divergence_factor: 10.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PicardStep {
    pub k: usize,
    pub norm: f64,
    pub increment: f64,
    /// `‖𝓛_ε(h_k) − 𝓛_ε(h_{k−1})‖ / ‖h_k − h_{k−1}‖` in `L²`.
    pub ratio_l2: Option<f64>,
    /// Same ratio in the `𝓗^{s(ε)}` estimator.
    pub ratio_calh: Option<f64>,
    pub in_ball: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PicardState {
    pub config: PicardConfig,
    pub cutoff: usize,
    #[serde(skip)]
    pub phi: CircleFunction,
    #[serde(skip)]
    pub g: CircleFunction,
    /// `𝓛(φ, g)`, the center of the ball.
    #[serde(skip)]
    pub center: CircleFunction,
    #[serde(skip)]
    pub h: CircleFunction,
    #[serde(skip)]
    pub previous: Option<CircleFunction>,
    pub ball_radius: f64,
    pub initial_norm: f64,
    pub history: Vec<PicardStep>,
    pub converged: bool,
}

impl PicardState {
    /// State for a `λ = 1` normalized near-solution `f`, started at
    /// `h₀ = 𝓛(φ, g)`.
    pub fn new(f: &CircleFunction, config: PicardConfig) -> Result<Self> {
        let (phi, g, cutoff) = decompose(f, config.eps)?;
        let center = linear_part(&phi, &g)?;
        Ok(Self {
            ball_radius: config.eps.powf(config.ball_exponent),
            initial_norm: center.norm(),
            cutoff,
            phi,
            g,
            h: center.clone(),
            center,
            previous: None,
            history: Vec::new(),
            converged: false,
            config,
        })
    }

    pub fn max_ratio_l2(&self) -> Option<f64> {
        self.history.iter().filter_map(|s| s.ratio_l2).reduce(f64::max)
    }

    pub fn max_ratio_calh(&self) -> Option<f64> {
        self.history.iter().filter_map(|s| s.ratio_calh).reduce(f64::max)
    }

    /// `‖h − g‖`.
    pub fn distance_to_g(&self) -> f64 {
        self.h.sub(&self.g).norm()
    }
}

/// Up to `steps` iterations of `h ← 𝓛(φ, g) + 𝓝(φ, h)`, stopping once the
/// increment falls below the tolerance.
pub fn picard_iterate(mut state: PicardState, steps: usize) -> Result<PicardState> {
    let s = state.config.scale;
    let limit = state.config.divergence_factor * state.initial_norm.max(f64::MIN_POSITIVE);
    for _ in 0..steps {
        let next = state.center.add(&nonlinear_part(&state.phi, &state.h)?);
        let diff = next.sub(&state.h);
        let increment = diff.norm();
        let (ratio_l2, ratio_calh) = match &state.previous {
            Some(prev) => {
                let before = state.h.sub(prev);
                let d0 = before.norm();
                if d0 > 0.0 {
                    (
                        Some(increment / d0),
                        Some(calh_estimate(&diff, s) / calh_estimate(&before, s)),
                    )
                } else {
                    (None, None)
                }
            }
            None => (None, None),
        };
        let norm = next.norm();
        let in_ball = calh_estimate(&next.sub(&state.center), s) <= state.ball_radius;
        state.history.push(PicardStep {
            k: state.history.len(),
            norm,
            increment,
            ratio_l2,
            ratio_calh,
            in_ball,
        });
        if !norm.is_finite() || norm > limit {
            return Err(Error::Diverged(format!(
                "‖h‖ reached {norm:.3e} after {} steps (start {:.3e}); norms {:?}",
                state.history.len(),
                state.initial_norm,
                state.history.iter().map(|h| h.norm).collect::<Vec<_>>()
            )));
        }
        state.previous = Some(std::mem::replace(&mut state.h, next));
        if increment < state.config.tolerance {
            state.converged = true;
            break;
        }
    }
    Ok(state)
}
