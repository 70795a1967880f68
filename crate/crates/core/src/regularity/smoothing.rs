//! Smoothing of the quintic convolution: decay gain for a rough input, the
//! Lipschitz estimate with four smooth inputs and one `L²` input, and the
//! η-balancing of the sharp/flat argument.

use serde::Serialize;

use super::{decay_slope, dyadic_steps, sample_grid, sharp_flat_split, SlopeFit};
use crate::bessel::BesselTensor;
use crate::error::{Error, Result};
use crate::quintic::{quintic_convolve, QuinticEngine, Term};
use crate::spectral::CircleFunction;

#[derive(Clone, Debug, Serialize)]
pub struct SmoothingConfig {
    /// Band of `|n|` used for the decay fits.
    pub band: (usize, usize),
    /// Admissible input slopes (open interval).
    pub rough_window: (f64, f64),
    pub min_gain: f64,
    /// Smoothness index of the scale used in the sharp/flat split.
    pub split_scale: f64,
    pub etas: Vec<f64>,
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        Self {
            band: (8, 64),
            rough_window: (-1.6, -0.9),
            min_gain: 0.25,
            split_scale: 0.25,
            etas: vec![0.2, 0.1, 0.05, 0.025, 0.0125],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LipschitzReport {
    pub bandwidth: usize,
    pub grid: usize,
    /// `max_t sup_θ |F(θ+t) − F(θ)| / t`.
    pub value: f64,
    /// `(t, sup_θ |F(θ+t) − F(θ)|)`.
    pub differences: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EtaBalance {
    /// Fitted `p` in `Lip(f♯_η) ≈ C η^{-p}`.
    pub p: f64,
    pub c: f64,
    /// `(t, min_η C t η^{-p} + 2η)`.
    pub bounds: Vec<(f64, f64)>,
    /// Fitted exponent of `t` in the balanced bound.
    pub delta: f64,
    pub predicted_delta: f64,
    /// `(η, cutoff, Lipschitz estimate of f♯)`.
    pub splits: Vec<(f64, usize, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SmoothingReport {
    pub input_slope: SlopeFit,
    pub output_slope: SlopeFit,
    pub gain: f64,
    pub gain_holds: bool,
    pub lipschitz: LipschitzReport,
    /// Same configuration with sample and quadrature grids doubled.
    pub lipschitz_refined: LipschitzReport,
    pub lipschitz_change: f64,
    /// Same configuration with the input bandwidth doubled (reported only).
    pub lipschitz_resolution: Option<LipschitzReport>,
    /// Fitted exponent of `sup|F(·+t) − F|` in `t` over the dyadic shifts
    /// (1 for a Lipschitz profile).
    pub difference_exponent: f64,
    /// `max_t sup|ΔF| / (t ‖h‖)`.
    pub linear_constant: f64,
    pub eta: EtaBalance,
}

fn lipschitz_of(f: &CircleFunction, m: usize) -> Result<LipschitzReport> {
    let base = f.samples(m)?;
    let mut differences = Vec::new();
    let mut value: f64 = 0.0;
    for t in dyadic_steps() {
        let shifted = f.rotate(t).samples(m)?;
        let d = shifted
            .iter()
            .zip(&base)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        differences.push((t, d));
        value = value.max(d / t);
    }
    Ok(LipschitzReport {
        bandwidth: f.bandwidth(),
        grid: m,
        value,
        differences,
    })
}

fn fit_line(pts: &[(f64, f64)]) -> (f64, f64) {
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// `Q(c,c,c,c,h)` with four constant slots.
fn four_smooth_one_rough(h: &CircleFunction, engine: &QuinticEngine) -> Result<CircleFunction> {
    let one = CircleFunction::constant(num_complex::Complex64::new(1.0, 0.0), 0);
    let terms = [Term::new(1.0, [0, 0, 0, 0, 1])];
    Ok(engine.evaluate(&[&one, h], &terms, h.bandwidth())?.value)
}

/// Run the smoothing experiment on a rough input. The quintic convolution
/// uses `tensor` when its bandwidth covers the input and the polar engine
/// otherwise.
pub fn smoothing_experiment(
    f_rough: &CircleFunction,
    tensor: Option<&BesselTensor>,
    config: &SmoothingConfig,
) -> Result<SmoothingReport> {
    let n = f_rough.bandwidth();
    let band = (config.band.0, config.band.1.min(n));
    let input_slope = decay_slope(f_rough, band)?;
    let (lo, hi) = config.rough_window;
    if !(input_slope.slope > lo && input_slope.slope < hi) {
        return Err(Error::Precondition(format!(
            "input decay slope {:.3} lies outside ({lo}, {hi}); the input is not rough in the tested sense",
            input_slope.slope
        )));
    }
    let engine = QuinticEngine::default();
    let output = match tensor {
        Some(t) if t.n >= n => quintic_convolve([f_rough; 5], t)?,
        _ => {
            let terms = [Term::new(1.0, [0, 0, 0, 0, 0])];
            engine.evaluate(&[f_rough], &terms, n)?.value
        }
    };
    let output_slope = decay_slope(&output, band)?;
    let gain = input_slope.slope - output_slope.slope;

    let m = sample_grid(n);
    let f_lip = four_smooth_one_rough(f_rough, &engine)?;
    let lipschitz = lipschitz_of(&f_lip, m)?;
    let f_fine = four_smooth_one_rough(f_rough, &engine.refined())?;
    let lipschitz_refined = lipschitz_of(&f_fine, 2 * m)?;
    let lipschitz_change = (lipschitz_refined.value - lipschitz.value).abs() / lipschitz_refined.value;
    let lipschitz_resolution = if (24 * n * n) as f64 / 4.0 <= crate::quintic::engine::MAX_CUTOFF {
        let doubled = rebuild_at(f_rough, 2 * n);
        let f2 = four_smooth_one_rough(&doubled, &engine)?;
        Some(lipschitz_of(&f2, sample_grid(2 * n))?)
    } else {
        None
    };

    let h_norm = f_rough.norm();
    let pts: Vec<(f64, f64)> = lipschitz
        .differences
        .iter()
        .filter(|(_, d)| *d > 0.0)
        .map(|(t, d)| (t.ln(), d.ln()))
        .collect();
    let difference_exponent = if pts.len() >= 2 { fit_line(&pts).0 } else { f64::NAN };
    let linear_constant = lipschitz.value / h_norm;

    let eta = eta_balance(f_rough, config)?;
    Ok(SmoothingReport {
        input_slope,
        output_slope,
        gain,
        gain_holds: gain >= config.min_gain,
        lipschitz,
        lipschitz_refined,
        lipschitz_change,
        lipschitz_resolution,
        difference_exponent,
        linear_constant,
        eta,
    })
}

/// The square wave is the one rough input with a known series; other
/// inputs are zero padded.
fn rebuild_at(f: &CircleFunction, n: usize) -> CircleFunction {
    let sq = CircleFunction::square_wave(f.bandwidth());
    if sq.coeffs() == f.coeffs() {
        CircleFunction::square_wave(n)
    } else {
        f.with_bandwidth(n)
    }
}

fn eta_balance(f: &CircleFunction, config: &SmoothingConfig) -> Result<EtaBalance> {
    let mut splits = Vec::new();
    for eta in &config.etas {
        let (_, _, r) = sharp_flat_split(f, *eta, config.split_scale)?;
        splits.push((*eta, r.cutoff, r.sharp_lipschitz / r.calh));
    }
    let pts: Vec<(f64, f64)> = splits
        .iter()
        .filter(|s| s.2 > 0.0)
        .map(|s| (s.0.ln(), s.2.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Precondition("η grid yields fewer than two usable splits".into()));
    }
    let (slope, intercept) = fit_line(&pts);
    let p = -slope;
    let c = intercept.exp();
    let eta_grid: Vec<f64> = (0..=400).map(|i| 10f64.powf(-6.0 + 6.0 * i as f64 / 400.0)).collect();
    let bounds: Vec<(f64, f64)> = dyadic_steps()
        .into_iter()
        .map(|t| {
            let b = eta_grid
                .iter()
                .map(|e| c * t * e.powf(-p) + 2.0 * e)
                .fold(f64::INFINITY, f64::min);
            (t, b)
        })
        .collect();
    let logs: Vec<(f64, f64)> = bounds.iter().map(|(t, b)| (t.ln(), b.ln())).collect();
    let delta = fit_line(&logs).0;
    Ok(EtaBalance {
        p,
        c,
        bounds,
        delta,
        predicted_delta: 1.0 / (1.0 + p),
        splits,
    })
}
