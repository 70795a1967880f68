//! Band-limited functions on the unit circle.
//!
//! A [`CircleFunction`] stores Fourier coefficients `c_n`, `|n| ≤ N`, and may
//! carry the uniform samples it was built from. Sample values are produced by
//! FFT on demand.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::bessel::bessel_j_orders;
use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn fft_plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    })
}

/// Samples `Σ c_n e^{inθ_m}` on `θ_m = 2πm/M` for coefficients ordered
/// `n = -N..=N`.
pub fn synthesize(coeffs: &[Complex64], m: usize) -> Result<Vec<Complex64>> {
    let n = bandwidth_of(coeffs);
    if m < 2 * n + 2 {
        return Err(Error::GridTooSmall {
            grid: m,
            bandwidth: n,
            needed: 2 * n + 2,
        });
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (k, c) in coeffs.iter().enumerate() {
        let idx = (k as i64 - n as i64).rem_euclid(m as i64) as usize;
        buf[idx] += *c;
    }
    fft_plan(m, true).process(&mut buf);
    Ok(buf)
}

/// Coefficients `c_n = M⁻¹ Σ_m s_m e^{-inθ_m}` for `|n| ≤ N`. Energy left
/// above mode `N` is reported through the log when it exceeds 1e-8 of the
/// total.
pub fn analyze(samples: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    let m = samples.len();
    if m < 2 * n + 2 {
        return Err(Error::GridTooSmall {
            grid: m,
            bandwidth: n,
            needed: 2 * n + 2,
        });
    }
    let mut buf = samples.to_vec();
    fft_plan(m, false).process(&mut buf);
    let scale = 1.0 / m as f64;
    let mut out = Vec::with_capacity(2 * n + 1);
    let mut kept = 0.0;
    for k in -(n as i64)..=(n as i64) {
        let c = buf[k.rem_euclid(m as i64) as usize] * scale;
        kept += c.norm_sqr();
        out.push(c);
    }
    let total: f64 = buf.iter().map(|c| (c * scale).norm_sqr()).sum();
    if total > 0.0 && (total - kept) > 1e-8 * total {
        log::warn!(
            "aliasing: {:.3e} of the sample energy lies above mode {n}",
            (total - kept) / total
        );
    }
    Ok(out)
}

fn bandwidth_of(coeffs: &[Complex64]) -> usize {
    assert!(coeffs.len() % 2 == 1, "coefficient vector must have odd length");
    coeffs.len() / 2
}

/// A complex function on S¹ with coefficients `c_n`, `|n| ≤ N`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleFunction {
    coeffs: Vec<Complex64>,
    samples: Option<Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
struct CircleFunctionJson {
    #[serde(rename = "N")]
    n: usize,
    coeffs: Vec<[f64; 2]>,
}

impl CircleFunction {
    /// Build from coefficients ordered `n = -N..=N`.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        bandwidth_of(&coeffs);
        Self {
            coeffs,
            samples: None,
        }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_coeffs(vec![Complex64::new(0.0, 0.0); 2 * n + 1])
    }

    pub fn constant(value: Complex64, n: usize) -> Self {
        let mut f = Self::zero(n);
        f.coeffs[n] = value;
        f
    }

    /// `e^{ikθ}` held at bandwidth `n ≥ |k|`.
    pub fn mode(k: i64, n: usize) -> Self {
        assert!(k.unsigned_abs() as usize <= n);
        let mut f = Self::zero(n);
        f.coeffs[(k + n as i64) as usize] = Complex64::new(1.0, 0.0);
        f
    }

    /// Build from samples on the uniform grid, keeping them alongside.
    pub fn from_samples(samples: Vec<Complex64>, n: usize) -> Result<Self> {
        let coeffs = analyze(&samples, n)?;
        Ok(Self {
            coeffs,
            samples: Some(samples),
        })
    }

    /// Sample `g` on `M` uniform points and keep modes `|n| ≤ N`.
    pub fn from_fn<G: Fn(f64) -> Complex64>(g: G, n: usize, m: usize) -> Result<Self> {
        let samples = (0..m).map(|j| g(2.0 * PI * j as f64 / m as f64)).collect();
        Self::from_samples(samples, n)
    }

    /// Truncated Fourier series of `sign(cos θ)`.
    pub fn square_wave(n: usize) -> Self {
        let mut f = Self::zero(n);
        for k in 1..=n as i64 {
            if k % 2 == 1 {
                let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
                let c = Complex64::new(2.0 * sign / (PI * k as f64), 0.0);
                f.coeffs[(n as i64 + k) as usize] = c;
                f.coeffs[(n as i64 - k) as usize] = c;
            }
        }
        f
    }

    pub fn bandwidth(&self) -> usize {
        self.coeffs.len() / 2
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `c_k`, zero outside the band.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let n = self.bandwidth() as i64;
        if k.abs() > n {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + n) as usize]
        }
    }

    /// The samples this function was built from, if any.
    pub fn stored_samples(&self) -> Option<&[Complex64]> {
        self.samples.as_deref()
    }

    /// Values on the uniform grid of `m` points.
    pub fn samples(&self, m: usize) -> Result<Vec<Complex64>> {
        match &self.samples {
            Some(s) if s.len() == m => Ok(s.clone()),
            _ => synthesize(&self.coeffs, m),
        }
    }

    /// Pointwise value by direct summation.
    pub fn eval(&self, theta: f64) -> Complex64 {
        let n = self.bandwidth() as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::from_polar(1.0, (k as i64 - n) as f64 * theta))
            .sum()
    }

    /// Same function held at bandwidth `n` (zero padded or truncated).
    pub fn with_bandwidth(&self, n: usize) -> Self {
        let mut out = Self::zero(n);
        let m = self.bandwidth().min(n) as i64;
        for k in -m..=m {
            out.coeffs[(k + n as i64) as usize] = self.coeff(k);
        }
        out
    }

    /// Keep only modes `|k| ≤ cutoff`, holding the bandwidth fixed.
    pub fn low_pass(&self, cutoff: usize) -> Self {
        let n = self.bandwidth() as i64;
        let mut out = self.clone();
        out.samples = None;
        for k in -n..=n {
            if k.unsigned_abs() as usize > cutoff {
                out.coeffs[(k + n) as usize] = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    pub fn map_coeffs<G: Fn(i64, Complex64) -> Complex64>(&self, g: G) -> Self {
        let n = self.bandwidth() as i64;
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| g(k as i64 - n, *c))
                .collect(),
        )
    }

    pub fn scale(&self, a: Complex64) -> Self {
        self.map_coeffs(|_, c| a * c)
    }

    /// `a·self + b·other` at the larger of the two bandwidths.
    pub fn axpby(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        let n = self.bandwidth().max(other.bandwidth());
        let x = self.with_bandwidth(n);
        let y = other.with_bandwidth(n);
        Self::from_coeffs(
            x.coeffs
                .iter()
                .zip(&y.coeffs)
                .map(|(p, q)| a * p + b * q)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpby(Complex64::new(1.0, 0.0), other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpby(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    /// Pointwise product, exact at bandwidth `N₁+N₂`.
    pub fn mul(&self, other: &Self) -> Self {
        let (n1, n2) = (self.bandwidth() as i64, other.bandwidth() as i64);
        let n = n1 + n2;
        let mut out = vec![Complex64::new(0.0, 0.0); (2 * n + 1) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    /// `|f|²` as a band-limited function of bandwidth `2N`.
    pub fn abs_squared(&self) -> Self {
        self.mul(&self.conj())
    }

    /// Pointwise complex conjugate: `c_n ↦ conj(c_{-n})`.
    pub fn conj(&self) -> Self {
        let n = self.bandwidth() as i64;
        Self::from_coeffs((-n..=n).map(|k| self.coeff(-k).conj()).collect())
    }

    /// `f̃(x) = conj(f(-x))`, coefficients `(-1)ⁿ conj(c_{-n})`.
    pub fn conj_reflect(&self) -> Self {
        let n = self.bandwidth() as i64;
        Self::from_coeffs(
            (-n..=n)
                .map(|k| {
                    let c = self.coeff(-k).conj();
                    if k % 2 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .collect(),
        )
    }

    /// `θ ↦ f(θ + t)`.
    pub fn rotate(&self, t: f64) -> Self {
        self.map_coeffs(|k, c| c * Complex64::from_polar(1.0, k as f64 * t))
    }

    /// `m`-th derivative in θ, computed spectrally.
    pub fn derivative(&self, m: u32) -> Self {
        self.map_coeffs(|k, c| c * Complex64::new(0.0, k as f64).powu(m))
    }

    /// `‖f‖²_{L²(dθ)} = 2π Σ |c_n|²`.
    pub fn norm_sq(&self) -> f64 {
        2.0 * PI * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm_sqr() == 0.0)
    }

    /// Largest modulus over the grid of `m` points.
    pub fn sup_norm(&self, m: usize) -> Result<f64> {
        Ok(self.samples(m)?.iter().map(|c| c.norm()).fold(0.0, f64::max))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = CircleFunctionJson {
            n: self.bandwidth(),
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        };
        serde_json::to_value(j).expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let j: CircleFunctionJson = serde_json::from_value(value.clone())?;
        if j.coeffs.len() != 2 * j.n + 1 {
            return Err(Error::Schema(format!(
                "expected {} coefficients for N = {}, found {}",
                2 * j.n + 1,
                j.n,
                j.coeffs.len()
            )));
        }
        Ok(Self::from_coeffs(
            j.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect(),
        ))
    }
}

/// `∫ f ḡ dθ = 2π Σ c_n conj(d_n)`.
pub fn inner_product(f: &CircleFunction, g: &CircleFunction) -> Complex64 {
    let n = f.bandwidth().min(g.bandwidth()) as i64;
    2.0 * PI * (-n..=n).map(|k| f.coeff(k) * g.coeff(k).conj()).sum::<Complex64>()
}

/// `(2π Σ (1+n²)^s |c_n|²)^{1/2}`.
pub fn weighted_norm(f: &CircleFunction, s: f64) -> f64 {
    let n = f.bandwidth() as i64;
    let sum: f64 = (-n..=n)
        .map(|k| (1.0 + (k * k) as f64).powf(s) * f.coeff(k).norm_sqr())
        .sum();
    (2.0 * PI * sum).sqrt()
}

/// Element of the symmetry group generated by rotations, modulations
/// `e^{ix·ξ}` and the conjugate reflection `f ↦ f̃`.
///
/// Acting on `f`, the reflection is applied first, then the rotation
/// `f(θ) ↦ f(θ+θ₀)`, then the modulation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryElement {
    pub rotation: f64,
    pub modulation: [f64; 2],
    pub conj_reflect: bool,
}

impl Default for SymmetryElement {
    fn default() -> Self {
        Self::identity()
    }
}

impl SymmetryElement {
    pub fn identity() -> Self {
        Self {
            rotation: 0.0,
            modulation: [0.0, 0.0],
            conj_reflect: false,
        }
    }

    pub fn rotation(theta: f64) -> Self {
        Self {
            rotation: theta,
            ..Self::identity()
        }
    }

    pub fn modulation(xi: [f64; 2]) -> Self {
        Self {
            modulation: xi,
            ..Self::identity()
        }
    }

    pub fn reflection() -> Self {
        Self {
            conj_reflect: true,
            ..Self::identity()
        }
    }

    /// The element acting as `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let (s, c) = (-self.rotation).sin_cos();
        let [x, y] = other.modulation;
        let turned = [c * x - s * y, s * x + c * y];
        Self {
            rotation: self.rotation + other.rotation,
            modulation: [self.modulation[0] + turned[0], self.modulation[1] + turned[1]],
            conj_reflect: self.conj_reflect ^ other.conj_reflect,
        }
    }
}

/// Coefficients of `e^{ix·ξ}` on S¹ with `|J_n(|ξ|)| ≥ 1e-14`.
pub fn plane_wave(xi: [f64; 2]) -> Result<CircleFunction> {
    let r = xi[0].hypot(xi[1]);
    if r > 50.0 {
        return Err(Error::Bandwidth(format!(
            "modulation |ξ| = {r} exceeds 50"
        )));
    }
    if r == 0.0 {
        return Ok(CircleFunction::constant(Complex64::new(1.0, 0.0), 0));
    }
    let phi = xi[1].atan2(xi[0]);
    let jn = bessel_j_orders((r as usize) + 60, r)?;
    let mut top = 0;
    for (k, v) in jn.iter().enumerate() {
        if v.abs() >= 1e-14 {
            top = k;
        }
    }
    let n = top as i64;
    // e^{ir cos(θ-φ)} = Σ iⁿ J_n(r) e^{in(θ-φ)}
    let coeffs = (-n..=n)
        .map(|k| {
            let j = if k < 0 && k % 2 != 0 {
                -jn[(-k) as usize]
            } else {
                jn[k.unsigned_abs() as usize]
            };
            Complex64::i().powi(k as i32) * j * Complex64::from_polar(1.0, -(k as f64) * phi)
        })
        .collect();
    Ok(CircleFunction::from_coeffs(coeffs))
}

/// Action of a symmetry element on a band-limited function.
pub fn apply_symmetry(f: &CircleFunction, s: &SymmetryElement) -> Result<CircleFunction> {
    let mut g = if s.conj_reflect {
        f.conj_reflect()
    } else {
        f.clone()
    };
    if s.rotation != 0.0 {
        g = g.rotate(s.rotation);
    }
    if s.modulation != [0.0, 0.0] {
        g = g.mul(&plane_wave(s.modulation)?);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_and_single_mode_synthesis() {
        let one = CircleFunction::constant(c(1.0, 0.0), 0);
        assert!(one.samples(8).unwrap().iter().all(|s| (s - 1.0).norm() < 1e-15));
        let e1 = CircleFunction::mode(1, 1);
        for (m, s) in e1.samples(8).unwrap().iter().enumerate() {
            let want = Complex64::from_polar(1.0, 2.0 * PI * m as f64 / 8.0);
            assert!((s - want).norm() < 1e-15);
        }
        assert!(matches!(
            synthesize(&[c(0.0, 0.0); 9], 8),
            Err(Error::GridTooSmall { .. })
        ));
    }

    #[test]
    fn analyze_recovers_pure_modes() {
        let ones = vec![c(1.0, 0.0); 16];
        let cs = analyze(&ones, 3).unwrap();
        assert!((cs[3] - 1.0).norm() < 1e-15);
        let e2: Vec<_> = (0..16)
            .map(|m| Complex64::from_polar(1.0, 2.0 * 2.0 * PI * m as f64 / 16.0))
            .collect();
        let cs = analyze(&e2, 3).unwrap();
        assert!((cs[5] - 1.0).norm() < 1e-14);
        assert!(cs.iter().enumerate().all(|(k, v)| k == 5 || v.norm() < 1e-14));
    }

    #[test]
    fn conj_reflect_of_first_mode() {
        let f = CircleFunction::mode(1, 1);
        let g = f.conj_reflect();
        for k in 0..16 {
            let th = 2.0 * PI * k as f64 / 16.0;
            let want = f.eval(th + PI).conj();
            assert!((g.eval(th) - want).norm() < 1e-14);
        }
        assert!((g.coeff(-1) + 1.0).norm() < 1e-15);
    }

    #[test]
    fn modulation_of_constant_is_plane_wave() {
        let one = CircleFunction::constant(c(1.0, 0.0), 0);
        let g = apply_symmetry(&one, &SymmetryElement::modulation([1.0, 0.0])).unwrap();
        for k in 0..32 {
            let th = 2.0 * PI * k as f64 / 32.0;
            let want = Complex64::from_polar(1.0, th.cos());
            assert!((g.eval(th) - want).norm() < 1e-13);
        }
        assert!(apply_symmetry(&one, &SymmetryElement::modulation([60.0, 0.0])).is_err());
    }

    #[test]
    fn weighted_norm_examples() {
        let one = CircleFunction::constant(c(1.0, 0.0), 2);
        assert!((weighted_norm(&one, 3.3) - (2.0 * PI).sqrt()).abs() < 1e-14);
        let e1 = CircleFunction::mode(1, 1);
        assert!((weighted_norm(&e1, 1.0) - (4.0 * PI).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let f = CircleFunction::from_coeffs(vec![c(1.0, 2.0), c(0.5, 0.0), c(-3.0, 0.25)]);
        let v = f.to_json();
        assert_eq!(v["N"], 1);
        assert_eq!(CircleFunction::from_json(&v).unwrap(), f);
    }

    #[test]
    fn composition_matches_sequential_action() {
        let f = CircleFunction::from_coeffs(vec![c(0.3, -0.1), c(1.0, 0.2), c(-0.4, 0.5)]);
        let a = SymmetryElement {
            rotation: 0.7,
            modulation: [0.3, -0.2],
            conj_reflect: true,
        };
        let b = SymmetryElement {
            rotation: -1.1,
            modulation: [-0.5, 0.4],
            conj_reflect: false,
        };
        let seq = apply_symmetry(&apply_symmetry(&f, &b).unwrap(), &a).unwrap();
        let once = apply_symmetry(&f, &a.compose(&b)).unwrap();
        for k in 0..20 {
            let th = 0.31 * k as f64;
            assert!((seq.eval(th) - once.eval(th)).norm() < 1e-12);
        }
    }
}
