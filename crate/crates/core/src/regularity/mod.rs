//! Finite-resolution smoothness estimators: Hölder and difference-quotient
//! norms over a dyadic set of shifts, Fourier decay slopes and the
//! sharp/flat frequency split.
//!
//! The shifts are rotations `f ↦ f(· + t)`, the only translation on S¹.

pub mod smoothing;

pub use smoothing::{smoothing_experiment, SmoothingConfig, SmoothingReport};

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::CircleFunction;

/// Number of dyadic shifts `t = 2^{-1}, …, 2^{-12}`.
pub const DYADIC_LEVELS: i32 = 12;

pub fn dyadic_steps() -> Vec<f64> {
    (1..=DYADIC_LEVELS).map(|j| 0.5f64.powi(j)).collect()
}

/// Sample grid used for sup norms of a function of bandwidth `n`.
pub fn sample_grid(n: usize) -> usize {
    (8 * n).max(256).next_power_of_two()
}

/// Exact `‖f(· + t) − f‖_{L²}` from the coefficients.
pub fn shift_difference_l2(f: &CircleFunction, t: f64) -> f64 {
    let n = f.bandwidth() as i64;
    let sum: f64 = (-n..=n)
        .map(|k| {
            let w = Complex64::from_polar(1.0, k as f64 * t) - 1.0;
            w.norm_sqr() * f.coeff(k).norm_sqr()
        })
        .sum();
    (2.0 * std::f64::consts::PI * sum).sqrt()
}

/// Hölder quotients over the dyadic shifts on a grid of `m` samples.
#[derive(Clone, Debug, Serialize)]
pub struct HolderProfile {
    pub alpha: f64,
    pub grid: usize,
    pub sup_norm: f64,
    /// `(t, sup_θ |f(θ+t) − f(θ)| / t^α)`.
    pub quotients: Vec<(f64, f64)>,
    pub value: f64,
    /// Quotients still growing at the finest resolved shifts.
    pub diverging: bool,
}

pub fn holder_profile(f: &CircleFunction, alpha: f64, m: usize) -> Result<HolderProfile> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("Hölder order must lie in (0, 1), got {alpha}")));
    }
    let base = f.samples(m)?;
    let sup_norm = base.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut quotients = Vec::new();
    for t in dyadic_steps() {
        let shifted = f.rotate(t).samples(m)?;
        let d = shifted
            .iter()
            .zip(&base)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        quotients.push((t, d / t.powf(alpha)));
    }
    let seminorm = quotients.iter().map(|q| q.1).fold(0.0, f64::max);
    Ok(HolderProfile {
        alpha,
        grid: m,
        sup_norm,
        diverging: resolution_growth(&quotients, f.bandwidth()) > 1.1,
        quotients,
        value: sup_norm + seminorm,
    })
}

/// Growth of a quotient profile from `t ≈ 16/N` down to `t ≈ 4/N`; a jump
/// truncated at band `N` is smeared over a few multiples of `1/N`, so finer
/// shifts only see the smoothing.
fn resolution_growth(quotients: &[(f64, f64)], n: usize) -> f64 {
    let n = n.max(1) as f64;
    let nearest = |target: f64| {
        quotients
            .iter()
            .min_by(|a, b| {
                (a.0.ln() - target.ln())
                    .abs()
                    .total_cmp(&(b.0.ln() - target.ln()).abs())
            })
            .map(|q| q.1)
            .unwrap_or(0.0)
    };
    let coarse = nearest(16.0 / n);
    let fine = nearest(4.0 / n);
    if coarse == 0.0 {
        1.0
    } else {
        fine / coarse
    }
}

/// `‖f‖_{C⁰} + sup_t sup_θ |f(θ+t) − f(θ)| / t^α`.
pub fn holder_estimate(f: &CircleFunction, alpha: f64) -> Result<f64> {
    Ok(holder_profile(f, alpha, sample_grid(f.bandwidth()))?.value)
}

/// Difference-quotient norm `𝓗ˢ`: `‖f‖ + Σ_{m=0}^{k} sup_t ‖Δ_t f^{(m)}‖ / t^{min(1, s−m)}`
/// with `k = ⌈s⌉ − 1`; `𝓗⁰ = L²`.
pub fn calh_estimate(f: &CircleFunction, s: f64) -> f64 {
    calh_profile(f, s).value
}

#[derive(Clone, Debug, Serialize)]
pub struct CalhProfile {
    pub s: f64,
    pub l2: f64,
    /// Per derivative order, `(t, quotient)` over the dyadic shifts.
    pub quotients: Vec<Vec<(f64, f64)>>,
    pub value: f64,
    pub diverging: bool,
}

pub fn calh_profile(f: &CircleFunction, s: f64) -> CalhProfile {
    let l2 = f.norm();
    if s <= 0.0 {
        return CalhProfile {
            s,
            l2,
            quotients: Vec::new(),
            value: l2,
            diverging: false,
        };
    }
    let top = (s.ceil() as i64 - 1).max(0) as u32;
    if top > 0 {
        let n = f.bandwidth();
        let edge = f.coeff(n as i64).norm() + f.coeff(-(n as i64)).norm();
        if edge * (n as f64).powi(top as i32) > 1e-8 * l2.max(f64::MIN_POSITIVE) {
            log::warn!("bandwidth {n} may not resolve {top} derivatives");
        }
    }
    let mut value = l2;
    let mut quotients = Vec::new();
    let mut diverging = false;
    for m in 0..=top {
        let g = if m == 0 { f.clone() } else { f.derivative(m) };
        let exponent = (s - m as f64).min(1.0);
        let q: Vec<(f64, f64)> = dyadic_steps()
            .into_iter()
            .map(|t| (t, shift_difference_l2(&g, t) / t.powf(exponent)))
            .collect();
        value += q.iter().map(|p| p.1).fold(0.0, f64::max);
        diverging |= exponent < 1.0 && resolution_growth(&q, f.bandwidth()) > 1.1;
        quotients.push(q);
    }
    CalhProfile {
        s,
        l2,
        quotients,
        value,
        diverging,
    }
}

/// `C` in `‖f‖_{𝓗^β} ≤ C ‖f‖^{1−β/α} ‖f‖^{β/α}_{𝓗^α}`.
pub fn interpolation_constant(f: &CircleFunction, beta: f64, alpha: f64) -> Result<f64> {
    if !(0.0 < beta && beta < alpha) {
        return Err(Error::Domain(format!("need 0 < β < α, got β = {beta}, α = {alpha}")));
    }
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let theta = beta / alpha;
    let rhs = f.norm().powf(1.0 - theta) * calh_estimate(f, alpha).powf(theta);
    Ok(calh_estimate(f, beta) / rhs)
}

/// `C(s,t)` in `‖f‖_{H^t} ≤ C ‖f‖_{𝓗ˢ}`.
pub fn inclusion_constant(f: &CircleFunction, t: f64, s: f64) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(crate::spectral::weighted_norm(f, t) / calh_estimate(f, s))
}

/// Least-squares fit of `log|c_n|` against `log|n|`.
#[derive(Clone, Debug, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    pub band: (usize, usize),
    pub points: usize,
}

/// Decay slope over `lo ≤ |n| ≤ hi`, ignoring magnitudes below 1e-14.
pub fn decay_slope(f: &CircleFunction, band: (usize, usize)) -> Result<SlopeFit> {
    let (lo, hi) = band;
    let hi = hi.min(f.bandwidth());
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for n in lo.max(1)..=hi {
        for k in [n as i64, -(n as i64)] {
            let a = f.coeff(k).norm();
            if a >= 1e-14 {
                xs.push((n as f64).ln());
                ys.push(a.ln());
            }
        }
    }
    if xs.len() < 2 {
        return Err(Error::Precondition(format!(
            "band {lo}..={hi} holds fewer than two usable coefficients"
        )));
    }
    let len = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Precondition("band holds a single frequency".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / len)
        .sqrt();
    Ok(SlopeFit {
        slope,
        intercept,
        residual,
        band: (lo, hi),
        points: xs.len(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitReport {
    pub eta: f64,
    pub scale: f64,
    /// Frequency cutoff `K`: `f♯` keeps `|n| ≤ K`.
    pub cutoff: usize,
    pub calh: f64,
    pub flat_norm: f64,
    pub flat_bound: f64,
    pub sharp_norm: f64,
    /// Measured `C = ‖f♯‖ / ‖f‖_{𝓗ˢ}`.
    pub sharp_constant: f64,
    /// `max_t sup_θ |f♯(θ+t) − f♯(θ)| / t`.
    pub sharp_lipschitz: f64,
    pub bounds_hold: bool,
}

/// `f = f♯ + f♭` with the smallest cutoff `K` such that
/// `‖f♭‖ ≤ η ‖f‖_{𝓗ˢ}`.
pub fn sharp_flat_split(
    f: &CircleFunction,
    eta: f64,
    scale: f64,
) -> Result<(CircleFunction, CircleFunction, SplitReport)> {
    if !(eta > 0.0) {
        return Err(Error::Domain(format!("η must be positive, got {eta}")));
    }
    let n = f.bandwidth();
    let calh = calh_estimate(f, scale);
    let flat_bound = eta * calh;
    // tail[K] = ‖modes with |n| > K‖²
    let mut tail = vec![0.0; n + 2];
    for k in (0..=n).rev() {
        let mut e = f.coeff(k as i64).norm_sqr();
        if k > 0 {
            e += f.coeff(-(k as i64)).norm_sqr();
        }
        tail[k] = tail[k + 1] + e;
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let cutoff = (0..=n)
        .find(|k| (two_pi * tail[k + 1]).sqrt() <= flat_bound)
        .unwrap_or(n);
    let sharp = f.low_pass(cutoff);
    let flat = f.sub(&sharp);
    let m = sample_grid(n);
    let base = sharp.samples(m)?;
    let mut lip: f64 = 0.0;
    for t in dyadic_steps() {
        let shifted = sharp.rotate(t).samples(m)?;
        let d = shifted
            .iter()
            .zip(&base)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        lip = lip.max(d / t);
    }
    let flat_norm = flat.norm();
    let sharp_norm = sharp.norm();
    let sharp_constant = if calh > 0.0 { sharp_norm / calh } else { 0.0 };
    let exact = sharp.add(&flat).coeffs() == f.coeffs();
    let bounds_hold = flat_norm <= flat_bound * (1.0 + 1e-12) + 1e-300
        && sharp_norm <= sharp_constant * calh * (1.0 + 1e-12) + 1e-300
        && exact;
    let report = SplitReport {
        eta,
        scale,
        cutoff,
        calh,
        flat_norm,
        flat_bound,
        sharp_norm,
        sharp_constant,
        sharp_lipschitz: lip,
        bounds_hold,
    };
    Ok((sharp, flat, report))
}

/// Fitted `p` in `K(η) ∝ η^{-p}` over the given η values.
pub fn split_exponent(f: &CircleFunction, etas: &[f64], scale: f64) -> Result<(f64, Vec<(f64, usize)>)> {
    let mut pts = Vec::new();
    for eta in etas {
        let (_, _, r) = sharp_flat_split(f, *eta, scale)?;
        pts.push((*eta, r.cutoff));
    }
    let usable: Vec<(f64, f64)> = pts
        .iter()
        .filter(|(_, k)| *k > 0)
        .map(|(e, k)| (e.ln(), (*k as f64).ln()))
        .collect();
    if usable.len() < 2 {
        return Err(Error::Precondition("need two nonzero cutoffs to fit an exponent".into()));
    }
    let len = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / len;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok((-sxy / sxx, pts))
}

/// Smoothness summary of one function.
#[derive(Clone, Debug, Serialize)]
pub struct RegularityProfile {
    pub bandwidth: usize,
    pub slope: SlopeFit,
    /// `(α, estimate, grows with resolution)`.
    pub holder: Vec<(f64, f64, bool)>,
    /// `(s, estimate, grows with resolution)`.
    pub calh: Vec<(f64, f64, bool)>,
    /// `(n, |c_n|)` for `n = -N..=N`.
    #[serde(skip)]
    pub spectrum: Vec<(i64, f64)>,
}

/// Estimates at full bandwidth, flagged when they exceed the value at half
/// the bandwidth by more than 10%.
pub fn regularity_profile(f: &CircleFunction, alphas: &[f64], ss: &[f64]) -> Result<RegularityProfile> {
    let n = f.bandwidth();
    let half = f.low_pass(n / 2);
    let m = sample_grid(n);
    let mut holder = Vec::new();
    for a in alphas {
        let full = holder_profile(f, *a, m)?.value;
        let coarse = holder_profile(&half, *a, m)?.value;
        holder.push((*a, full, full > 1.1 * coarse));
    }
    let mut calh = Vec::new();
    for s in ss {
        let full = calh_estimate(f, *s);
        let coarse = calh_estimate(&half, *s);
        calh.push((*s, full, full > 1.1 * coarse));
    }
    let slope = decay_slope(f, (1, n))?;
    let spectrum = (-(n as i64)..=n as i64).map(|k| (k, f.coeff(k).norm())).collect();
    Ok(RegularityProfile {
        bandwidth: n,
        slope,
        holder,
        calh,
        spectrum,
    })
}

impl RegularityProfile {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    /// `n,abs_c` rows.
    pub fn spectrum_csv(&self) -> String {
        let mut s = String::from("n,abs_c\n");
        for (k, a) in &self.spectrum {
            let _ = writeln!(s, "{k},{a:.17e}");
        }
        s
    }
}
