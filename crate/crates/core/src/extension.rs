//! The extension `F = (fσ)^` on a polar grid and its L⁶ norm.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bessel::asymptotic::{TailMemo, TailSeries};
use crate::bessel::radial::{RadialGrid, DEFAULT_CUTOFF};
use crate::bessel::{bessel_j, bessel_j_orders};
use crate::error::{Error, Result};
use crate::spectral::{fft_plan, CircleFunction};

/// Weights `2π(-i)ⁿ c_n` of the Bessel expansion of `F`.
fn extension_weights(f: &CircleFunction) -> Vec<Complex64> {
    let n = f.bandwidth() as i64;
    (-n..=n)
        .map(|k| 2.0 * PI * Complex64::new(0.0, -1.0).powi(k as i32) * f.coeff(k))
        .collect()
}

/// Number of angles used for a source of bandwidth `n`.
pub fn angular_size(n: usize) -> usize {
    (6 * n + 2).max(64)
}

/// `F(ρ, φ) = 2π Σ (-i)ⁿ c_n J_n(ρ) e^{inφ}` at a single point.
pub fn extension_at(f: &CircleFunction, rho: f64, phi: f64) -> Result<Complex64> {
    let n = f.bandwidth();
    let j = bessel_j_orders(n, rho)?;
    let w = extension_weights(f);
    let mut out = Complex64::new(0.0, 0.0);
    for (idx, wk) in w.iter().enumerate() {
        let k = idx as i64 - n as i64;
        let jk = if k < 0 && k % 2 != 0 {
            -j[k.unsigned_abs() as usize]
        } else {
            j[k.unsigned_abs() as usize]
        };
        out += wk * jk * Complex64::from_polar(1.0, k as f64 * phi);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ExtensionTail {
    pub cutoff: f64,
    /// Hankel expansion of `F` on the angular grid.
    pub series: TailSeries,
}

/// Values of `(fσ)^` on a polar grid.
#[derive(Clone, Debug)]
pub struct ExtensionField {
    pub bandwidth: usize,
    pub radii: Vec<f64>,
    pub weights: Vec<f64>,
    pub angles: usize,
    /// `values[k][j] = F(ρ_k, 2πj/J)`.
    pub values: Vec<Vec<Complex64>>,
    pub origin: Complex64,
    pub tail: Option<ExtensionTail>,
}

/// Default grid for a source of bandwidth `n`.
pub fn default_grid(n: usize) -> RadialGrid {
    RadialGrid::new(
        RadialGrid::cutoff_for_orders(DEFAULT_CUTOFF, &[n as i64; 6]),
        true,
    )
}

/// Evaluate the extension of `f` on `grid`.
pub fn extend(f: &CircleFunction, grid: &RadialGrid) -> Result<ExtensionField> {
    let n = f.bandwidth();
    let angles = angular_size(n);
    let w = extension_weights(f);
    let values: Vec<Vec<Complex64>> = grid
        .nodes
        .par_iter()
        .map(|rho| {
            let j = bessel_j_orders(n, *rho)?;
            let mut buf = vec![Complex64::new(0.0, 0.0); angles];
            for (idx, wk) in w.iter().enumerate() {
                let k = idx as i64 - n as i64;
                let jk = if k < 0 && k % 2 != 0 {
                    -j[k.unsigned_abs() as usize]
                } else {
                    j[k.unsigned_abs() as usize]
                };
                buf[k.rem_euclid(angles as i64) as usize] += wk * jk;
            }
            fft_plan(angles, true).process(&mut buf);
            Ok(buf)
        })
        .collect::<Result<_>>()?;
    let tail = if grid.tail {
        Some(ExtensionTail {
            cutoff: grid.cutoff,
            series: TailSeries::angular(&w, angles, grid.tail_order),
        })
    } else {
        None
    };
    Ok(ExtensionField {
        bandwidth: n,
        radii: grid.nodes.clone(),
        weights: grid.weights.clone(),
        angles,
        values,
        origin: w[n],
        tail,
    })
}

impl ExtensionField {
    pub fn angle(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.angles as f64
    }

    /// `(∫∫ |F|⁶ ρ dρ dφ)^{1/6}`, tail beyond the cutoff included.
    pub fn l6_norm(&self) -> Result<f64> {
        let tail = self.tail.as_ref().ok_or(Error::TailRequired)?;
        let dphi = 2.0 * PI / self.angles as f64;
        let body: f64 = self
            .radii
            .iter()
            .zip(&self.weights)
            .zip(&self.values)
            .map(|((rho, w), row)| {
                w * rho * dphi * row.iter().map(|v| v.norm_sqr().powi(3)).sum::<f64>()
            })
            .sum();
        let f = &tail.series;
        let fc = f.conj();
        let f3 = f.mul(f).mul(f);
        let fc3 = fc.mul(&fc).mul(&fc);
        let density = f3.mul(&fc3).times_power(1).angular_mean();
        let mut memo = TailMemo::default();
        let (t, _) = density.integrate(tail.cutoff, &mut memo)?;
        let total = body + 2.0 * PI * t.re;
        Ok(total.max(0.0).powf(1.0 / 6.0))
    }

    /// `(ρ, φ, re, im)` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("rho,phi,re,im\n");
        for (rho, row) in self.radii.iter().zip(&self.values) {
            for (j, v) in row.iter().enumerate() {
                let _ = writeln!(s, "{:.17e},{:.17e},{:.17e},{:.17e}", rho, self.angle(j), v.re, v.im);
            }
        }
        s
    }
}

pub fn l6_norm(field: &ExtensionField) -> Result<f64> {
    field.l6_norm()
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    pub rho_min: f64,
    pub rho_max: f64,
    /// `sup √ρ |F(ρ,·)| / 2π` over the sampled radii.
    pub envelope: f64,
    pub bound: f64,
    pub holds: bool,
    pub samples: usize,
}

/// Sup of `√ρ |F| / 2π` over the field's radii in `[ρ₀, P]`, compared with
/// the bound 1.
pub fn decay_check(field: &ExtensionField, rho_min: f64) -> DecayReport {
    let mut envelope: f64 = 0.0;
    let mut count = 0;
    let mut rho_max: f64 = rho_min;
    for (rho, row) in field.radii.iter().zip(&field.values) {
        if *rho < rho_min {
            continue;
        }
        count += 1;
        rho_max = rho_max.max(*rho);
        for v in row {
            envelope = envelope.max(rho.sqrt() * v.norm() / (2.0 * PI));
        }
    }
    DecayReport {
        rho_min,
        rho_max,
        envelope,
        bound: 1.0,
        holds: envelope <= 1.0,
        samples: count,
    }
}

/// Dense-sampling version of [`decay_check`] for a single mode `e^{ikθ}`:
/// `sup √ρ |J_k(ρ)|` on a uniform grid of spacing `step`.
pub fn mode_envelope(k: usize, rho_min: f64, rho_max: f64, step: f64) -> Result<f64> {
    let count = ((rho_max - rho_min) / step).ceil() as usize;
    let mut sup: f64 = 0.0;
    for i in 0..=count {
        let rho = (rho_min + i as f64 * step).min(rho_max);
        sup = sup.max(rho.sqrt() * bessel_j(k, rho)?.abs());
    }
    Ok(sup)
}
