//! Polar-grid evaluation of multilinear combinations of quintic
//! convolutions.
//!
//! With `U_j(ρ,ψ) = Σ c_n J_n(ρ) e^{inψ}` the m-th coefficient of
//! `Q(f₁,…,f₅)` is `(2π)⁴ ∫₀^∞ J_m(ρ) [∏U_j(ρ,·)]^_m ρ dρ`. The angular
//! product is formed by FFT at every radial node and the radial integral is
//! closed with the Hankel expansion of the same product beyond the cutoff.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bessel::asymptotic::{TailMemo, TailSeries, DEFAULT_ORDER};
use crate::bessel::radial::{RadialGrid, DEFAULT_CUTOFF};
use crate::bessel::bessel_j_orders;
use crate::error::{Error, Result};
use crate::spectral::{fft_plan, CircleFunction};

/// One monomial `coef · Q(u[s₀], …, u[s₄])` of a multilinear combination.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub slots: [usize; 5],
}

impl Term {
    pub const fn new(coef: f64, slots: [usize; 5]) -> Self {
        Self { coef, slots }
    }
}

const CHUNK: usize = 64;

/// Quadrature settings for the polar path.
#[derive(Clone, Debug)]
pub struct QuinticEngine {
    /// Lower bound on the radial cutoff; raised with the input bandwidths.
    pub base_cutoff: f64,
    pub tail_order: usize,
    /// Radial panel width (20 Gauss nodes per panel).
    pub panel_width: f64,
    /// Extra factor on the angular grid size.
    pub angular_factor: usize,
}

impl Default for QuinticEngine {
    fn default() -> Self {
        Self {
            base_cutoff: DEFAULT_CUTOFF,
            tail_order: DEFAULT_ORDER,
            panel_width: 2.0,
            angular_factor: 1,
        }
    }
}

/// Output of [`QuinticEngine::evaluate`].
#[derive(Clone, Debug)]
pub struct QuinticOutput {
    pub value: CircleFunction,
    pub cutoff: f64,
    pub nodes: usize,
    pub angles: usize,
    /// Size of the highest-order tail terms, summed over modes.
    pub tail_error: f64,
}

fn signed(j: &[f64], n: i64) -> f64 {
    let v = j[n.unsigned_abs() as usize];
    if n < 0 && n % 2 != 0 {
        -v
    } else {
        v
    }
}

/// Largest radial cutoff the Bessel evaluation supports.
pub const MAX_CUTOFF: f64 = 9000.0;

impl QuinticEngine {
    /// Same engine with halved radial panels and doubled angular grid.
    pub fn refined(&self) -> Self {
        Self {
            panel_width: self.panel_width / 2.0,
            angular_factor: self.angular_factor * 2,
            ..self.clone()
        }
    }

    /// `Σ_t coef_t · Q(inputs[slots_t])` restricted to modes `|m| ≤ out_band`.
    pub fn evaluate(
        &self,
        inputs: &[&CircleFunction],
        terms: &[Term],
        out_band: usize,
    ) -> Result<QuinticOutput> {
        for t in terms {
            if let Some(s) = t.slots.iter().find(|s| **s >= inputs.len()) {
                return Err(Error::Precondition(format!(
                    "term refers to input {s} but only {} were given",
                    inputs.len()
                )));
            }
        }
        let bands: Vec<usize> = inputs.iter().map(|f| f.bandwidth()).collect();
        let in_max = bands.iter().copied().max().unwrap_or(0);
        let nmax = in_max.max(out_band);
        let angles = (self.angular_factor * (5 * in_max + out_band + 1))
            .max(2 * out_band + 1)
            .next_power_of_two()
            .max(8);
        let mut orders: Vec<i64> = bands.iter().map(|n| *n as i64).collect();
        orders.push(out_band as i64);
        // the worst term uses the largest band in every slot
        let cutoff = self
            .base_cutoff
            .max(((5 * in_max * in_max + out_band * out_band) as f64) / 4.0);
        if cutoff > MAX_CUTOFF {
            return Err(Error::Bandwidth(format!(
                "bands up to {nmax} need a radial cutoff of {cutoff:.0}, above {MAX_CUTOFF}"
            )));
        }
        let grid = RadialGrid::with_density(cutoff, true, self.panel_width, 20);
        let used: Vec<bool> = (0..inputs.len())
            .map(|i| terms.iter().any(|t| t.slots.contains(&i)))
            .collect();

        let out_len = 2 * out_band + 1;
        let node_ids: Vec<usize> = (0..grid.len()).collect();
        let partials: Vec<Result<Vec<Complex64>>> = node_ids
            .par_chunks(CHUNK)
            .map(|chunk| {
                let inv = fft_plan(angles, true);
                let fwd = fft_plan(angles, false);
                let mut acc_q = vec![Complex64::new(0.0, 0.0); out_len];
                let mut fields: Vec<Vec<Complex64>> = vec![Vec::new(); inputs.len()];
                let mut acc = vec![Complex64::new(0.0, 0.0); angles];
                for &k in chunk {
                    let rho = grid.nodes[k];
                    let w = grid.weights[k];
                    let j = bessel_j_orders(nmax, rho)?;
                    for (i, f) in inputs.iter().enumerate() {
                        if !used[i] {
                            continue;
                        }
                        let n = f.bandwidth() as i64;
                        let buf = &mut fields[i];
                        buf.clear();
                        buf.resize(angles, Complex64::new(0.0, 0.0));
                        for m in -n..=n {
                            buf[m.rem_euclid(angles as i64) as usize] += f.coeff(m) * signed(&j, m);
                        }
                        inv.process(buf);
                    }
                    acc.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
                    for t in terms {
                        let [a, b, c, d, e] = t.slots;
                        for l in 0..angles {
                            acc[l] += t.coef
                                * fields[a][l]
                                * fields[b][l]
                                * fields[c][l]
                                * fields[d][l]
                                * fields[e][l];
                        }
                    }
                    fwd.process(&mut acc);
                    let scale = w * rho / angles as f64;
                    for (idx, q) in acc_q.iter_mut().enumerate() {
                        let m = idx as i64 - out_band as i64;
                        *q += scale * signed(&j, m) * acc[m.rem_euclid(angles as i64) as usize];
                    }
                }
                Ok(acc_q)
            })
            .collect();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); out_len];
        for p in partials {
            for (c, v) in coeffs.iter_mut().zip(p?) {
                *c += v;
            }
        }

        let (tail, tail_error) = self.tail(inputs, terms, &used, angles, out_band, cutoff)?;
        let lead = (2.0 * PI).powi(4);
        for (c, t) in coeffs.iter_mut().zip(tail) {
            *c = lead * (*c + t);
        }
        Ok(QuinticOutput {
            value: CircleFunction::from_coeffs(coeffs),
            cutoff,
            nodes: grid.len(),
            angles,
            tail_error: lead * tail_error,
        })
    }

    fn tail(
        &self,
        inputs: &[&CircleFunction],
        terms: &[Term],
        used: &[bool],
        angles: usize,
        out_band: usize,
        cutoff: f64,
    ) -> Result<(Vec<Complex64>, f64)> {
        let series: Vec<Option<TailSeries>> = inputs
            .iter()
            .zip(used)
            .map(|(f, u)| u.then(|| TailSeries::angular(f.coeffs(), angles, self.tail_order)))
            .collect();
        let mut total = TailSeries::zero(angles, self.tail_order);
        for t in terms {
            let s = |i: usize| series[t.slots[i]].as_ref().expect("slot in use");
            let prod = s(0).mul(s(1)).mul(s(2)).mul(s(3)).mul(s(4));
            total.add_scaled(Complex64::new(t.coef, 0.0), &prod);
        }
        let modes = total.angular_modes(out_band);
        let mut memo = TailMemo::default();
        let mut out = Vec::with_capacity(modes.len());
        let mut err = 0.0;
        for (idx, mode) in modes.iter().enumerate() {
            let m = idx as i64 - out_band as i64;
            let radial = TailSeries::bessel(m, 1.0, self.tail_order).times_power(1);
            let (v, e) = mode.mul(&radial).integrate(cutoff, &mut memo)?;
            out.push(v);
            err += e;
        }
        Ok((out, err))
    }
}

/// `Q(f₁,…,f₅)` on modes `|m| ≤ out_band` with the default engine.
pub fn quintic_polar(fs: [&CircleFunction; 5], out_band: usize) -> Result<CircleFunction> {
    let terms = [Term::new(1.0, [0, 1, 2, 3, 4])];
    Ok(QuinticEngine::default().evaluate(&fs, &terms, out_band)?.value)
}

/// `Q(f,f,f,f̃,f̃)` on modes `|m| ≤ out_band`.
pub fn quintic_self(f: &CircleFunction, out_band: usize) -> Result<CircleFunction> {
    let ft = f.conj_reflect();
    let terms = [Term::new(1.0, [0, 0, 0, 1, 1])];
    Ok(QuinticEngine::default().evaluate(&[f, &ft], &terms, out_band)?.value)
}
