//! Large-argument expansions of Bessel products.
//!
//! A [`TailSeries`] is a finite sum `Σ a_j ρ^{-p_j} e^{iω_jρ}` whose
//! coefficients `a_j` are either scalars or arrays over an angular grid. The
//! Hankel expansion
//! `J_n(ρ) = √(2/(πρ)) · ½ Σ_{s=±1} e^{is(ρ-π/4)} (-is)ⁿ Σ_k (is)^k a_k(n) ρ^{-k}`
//! turns products of Bessel functions into such sums, which are then
//! integrated from a cutoff to infinity in closed form.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::quadrature::power_tail;
use crate::spectral::fft_plan;

/// Default truncation order of the expansion.
pub const DEFAULT_ORDER: usize = 12;

#[derive(Clone, Debug)]
pub struct TailTerm {
    /// Twice the decay exponent: the term decays like `ρ^{-twice_power/2}`.
    pub twice_power: i32,
    /// Oscillation frequency.
    pub omega: f64,
    /// Number of inverse powers of ρ picked up from the expansions.
    pub order: usize,
    pub coef: Vec<Complex64>,
}

#[derive(Clone, Debug)]
pub struct TailSeries {
    pub width: usize,
    pub max_order: usize,
    pub terms: Vec<TailTerm>,
}

fn omega_key(w: f64) -> i64 {
    (w * 1e9).round() as i64
}

/// Coefficients `a_k(n)` of the Hankel expansion, `k = 0..=order`.
pub fn hankel_coefficients(n: i64, order: usize) -> Vec<f64> {
    let mu = 4.0 * (n * n) as f64;
    let mut a = vec![1.0; order + 1];
    for k in 1..=order {
        let odd = (2 * k - 1) as f64;
        a[k] = a[k - 1] * (mu - odd * odd) / (8.0 * k as f64);
    }
    a
}

fn unit(s: f64, k: i64) -> Complex64 {
    // (i s)^k for s = ±1 and integer k
    Complex64::new(0.0, s).powi(k as i32)
}

impl TailSeries {
    /// Expansion of `J_n(scale·ρ)`.
    pub fn bessel(n: i64, scale: f64, order: usize) -> Self {
        let a = hankel_coefficients(n, order);
        let amp = (2.0 / (PI * scale)).sqrt() * 0.5;
        let mut terms = Vec::new();
        for s in [1.0, -1.0] {
            let phase = Complex64::from_polar(amp, -s * PI / 4.0) * unit(-s, n);
            for (k, ak) in a.iter().enumerate() {
                let c = phase * unit(s, k as i64) * (*ak / scale.powi(k as i32));
                terms.push(TailTerm {
                    twice_power: 1 + 2 * k as i32,
                    omega: s * scale,
                    order: k,
                    coef: vec![c],
                });
            }
        }
        Self {
            width: 1,
            max_order: order,
            terms,
        }
    }

    /// Expansion of `Σ_n w_n J_n(ρ) e^{inψ_l}` on `width` uniform angles,
    /// with `weights[j]` holding `w_{j-N}`.
    pub fn angular(weights: &[Complex64], width: usize, order: usize) -> Self {
        let n = (weights.len() / 2) as i64;
        assert!(width as i64 > 2 * n);
        let amp = (2.0 / PI).sqrt() * 0.5;
        let a: Vec<Vec<f64>> = (0..=n).map(|m| hankel_coefficients(m, order)).collect();
        let plan = fft_plan(width, true);
        let mut terms = Vec::new();
        for s in [1.0, -1.0] {
            let phase = Complex64::from_polar(amp, -s * PI / 4.0);
            for k in 0..=order {
                let mut buf = vec![Complex64::new(0.0, 0.0); width];
                for (j, w) in weights.iter().enumerate() {
                    let m = j as i64 - n;
                    let c = w * unit(-s, m) * a[m.unsigned_abs() as usize][k];
                    buf[m.rem_euclid(width as i64) as usize] += c;
                }
                plan.process(&mut buf);
                let lead = phase * unit(s, k as i64);
                for v in buf.iter_mut() {
                    *v *= lead;
                }
                terms.push(TailTerm {
                    twice_power: 1 + 2 * k as i32,
                    omega: s,
                    order: k,
                    coef: buf,
                });
            }
        }
        Self {
            width,
            max_order: order,
            terms,
        }
    }

    pub fn zero(width: usize, max_order: usize) -> Self {
        Self {
            width,
            max_order,
            terms: Vec::new(),
        }
    }

    /// Product truncated at total order `max_order` of the result.
    pub fn mul(&self, other: &Self) -> Self {
        let width = self.width.max(other.width);
        let max_order = self.max_order.min(other.max_order);
        let mut out = Self::zero(width, max_order);
        for a in &self.terms {
            for b in &other.terms {
                if a.order + b.order > max_order {
                    continue;
                }
                let coef = if a.coef.len() == b.coef.len() {
                    a.coef.iter().zip(&b.coef).map(|(x, y)| x * y).collect()
                } else if a.coef.len() == 1 {
                    b.coef.iter().map(|y| a.coef[0] * y).collect()
                } else {
                    a.coef.iter().map(|x| x * b.coef[0]).collect()
                };
                out.terms.push(TailTerm {
                    twice_power: a.twice_power + b.twice_power,
                    omega: a.omega + b.omega,
                    order: a.order + b.order,
                    coef,
                });
            }
        }
        out.merge();
        out
    }

    /// Combine terms with equal power, frequency and order.
    pub fn merge(&mut self) {
        let mut index: HashMap<(i32, i64, usize), usize> = HashMap::new();
        let mut merged: Vec<TailTerm> = Vec::new();
        for t in self.terms.drain(..) {
            let key = (t.twice_power, omega_key(t.omega), t.order);
            match index.get(&key) {
                Some(&i) => {
                    for (x, y) in merged[i].coef.iter_mut().zip(&t.coef) {
                        *x += y;
                    }
                }
                None => {
                    index.insert(key, merged.len());
                    merged.push(t);
                }
            }
        }
        self.terms = merged;
    }

    /// `a·self + other`.
    pub fn add_scaled(&mut self, a: Complex64, other: &Self) {
        self.max_order = self.max_order.min(other.max_order);
        self.width = self.width.max(other.width);
        for t in &other.terms {
            let mut t = t.clone();
            for v in t.coef.iter_mut() {
                *v *= a;
            }
            self.terms.push(t);
        }
        self.merge();
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        for t in out.terms.iter_mut() {
            t.omega = -t.omega;
            for v in t.coef.iter_mut() {
                *v = v.conj();
            }
        }
        out
    }

    /// Multiply by `ρ^k`.
    pub fn times_power(&self, k: i32) -> Self {
        let mut out = self.clone();
        for t in out.terms.iter_mut() {
            t.twice_power -= 2 * k;
        }
        out
    }

    /// Angular Fourier coefficients `m` of each term as scalar series, for
    /// `m = -mmax..=mmax`.
    pub fn angular_modes(&self, mmax: usize) -> Vec<TailSeries> {
        let width = self.width;
        assert!(width > 2 * mmax);
        let plan = fft_plan(width, false);
        let mut out: Vec<TailSeries> = (0..=2 * mmax)
            .map(|_| Self::zero(1, self.max_order))
            .collect();
        for t in &self.terms {
            let mut buf = t.coef.clone();
            plan.process(&mut buf);
            for (j, series) in out.iter_mut().enumerate() {
                let m = j as i64 - mmax as i64;
                let c = buf[m.rem_euclid(width as i64) as usize] / width as f64;
                series.terms.push(TailTerm {
                    twice_power: t.twice_power,
                    omega: t.omega,
                    order: t.order,
                    coef: vec![c],
                });
            }
        }
        out
    }

    /// Mean over the angular grid, as a scalar series.
    pub fn angular_mean(&self) -> TailSeries {
        let mut out = Self::zero(1, self.max_order);
        for t in &self.terms {
            let mean = t.coef.iter().sum::<Complex64>() / t.coef.len() as f64;
            out.terms.push(TailTerm {
                coef: vec![mean],
                ..t.clone()
            });
        }
        out
    }

    /// Value at `ρ` (scalar series only).
    pub fn eval(&self, rho: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| {
                t.coef[0]
                    * rho.powf(-t.twice_power as f64 / 2.0)
                    * Complex64::from_polar(1.0, t.omega * rho)
            })
            .sum()
    }

    /// `∫_P^∞` of a scalar series, with an error estimate taken from the
    /// terms of highest order.
    pub fn integrate(&self, cutoff: f64, memo: &mut TailMemo) -> Result<(Complex64, f64)> {
        let mut total = Complex64::new(0.0, 0.0);
        let mut last = 0.0;
        for t in &self.terms {
            if t.coef[0].norm_sqr() == 0.0 {
                continue;
            }
            let v = t.coef[0] * memo.get(t.twice_power, t.omega, cutoff)?;
            if t.order == self.max_order {
                last += v.norm();
            }
            total += v;
        }
        Ok((total, last))
    }
}

/// Cache of closed-form tail integrals `∫_P^∞ ρ^{-p} e^{iωρ} dρ`.
#[derive(Default)]
pub struct TailMemo {
    values: HashMap<(i32, i64, u64), Complex64>,
}

impl TailMemo {
    pub fn get(&mut self, twice_power: i32, omega: f64, cutoff: f64) -> Result<Complex64> {
        let key = (twice_power, omega_key(omega), cutoff.to_bits());
        if let Some(v) = self.values.get(&key) {
            return Ok(*v);
        }
        if twice_power <= 0 {
            return Err(crate::error::Error::Divergent(format!(
                "tail term ρ^{} e^{{i{omega}ρ}} does not decay",
                -twice_power as f64 / 2.0
            )));
        }
        let v = power_tail(twice_power as u32, omega, cutoff)?;
        self.values.insert(key, v);
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::bessel_j;

    #[test]
    fn expansion_matches_bessel_values() {
        for (n, x) in [(0i64, 40.0), (3, 60.0), (7, 200.0), (-5, 80.0)] {
            let s = TailSeries::bessel(n, 1.0, DEFAULT_ORDER);
            let mut want = bessel_j(n.unsigned_abs() as usize, x).unwrap();
            if n < 0 && n % 2 != 0 {
                want = -want;
            }
            let got = s.eval(x);
            assert!((got.re - want).abs() < 1e-13 && got.im.abs() < 1e-13, "{n} {x}: {got}");
        }
        let s = TailSeries::bessel(2, 0.5, DEFAULT_ORDER);
        assert!((s.eval(300.0).re - bessel_j(2, 150.0).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn product_expansion_matches_pointwise_product() {
        let j0 = TailSeries::bessel(0, 1.0, 10);
        let j3 = TailSeries::bessel(3, 1.0, 10);
        let p = j0.mul(&j0).mul(&j3).times_power(1);
        let x = 150.0;
        let want = x * bessel_j(0, x).unwrap().powi(2) * bessel_j(3, x).unwrap();
        assert!((p.eval(x).re - want).abs() < 1e-14);
    }

    #[test]
    fn angular_expansion_matches_direct_sum() {
        let w = vec![
            Complex64::new(0.2, 0.1),
            Complex64::new(1.0, 0.0),
            Complex64::new(-0.3, 0.4),
        ];
        let width = 8;
        let s = TailSeries::angular(&w, width, 10);
        let rho = 120.0;
        for l in 0..width {
            let psi = 2.0 * PI * l as f64 / width as f64;
            let mut want = Complex64::new(0.0, 0.0);
            for (j, c) in w.iter().enumerate() {
                let n = j as i64 - 1;
                let mut jn = bessel_j(n.unsigned_abs() as usize, rho).unwrap();
                if n < 0 {
                    jn = -jn;
                }
                want += c * jn * Complex64::from_polar(1.0, n as f64 * psi);
            }
            let got: Complex64 = s
                .terms
                .iter()
                .map(|t| {
                    t.coef[l]
                        * rho.powf(-t.twice_power as f64 / 2.0)
                        * Complex64::from_polar(1.0, t.omega * rho)
                })
                .sum();
            assert!((got - want).norm() < 1e-13);
        }
    }
}
