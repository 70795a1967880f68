//! The quintilinear convolution `Q(f₁,…,f₅) = f₁σ∗⋯∗f₅σ|_{S¹}`, densities of
//! `σ^{∗k}` and the bound checks built on them.

pub mod bounds;
pub mod density;
pub mod engine;

pub use bounds::{cauchy_schwarz_bound, quintilinear_bound_check, quintilinear_bound_ratio, BoundReport};
pub use density::{auto_density, density_value, sup_bound_check, RadialDensity, SupBoundReport};
pub use engine::{quintic_polar, quintic_self, QuinticEngine, Term};

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bessel::BesselTensor;
use crate::error::{Error, Result};
use crate::spectral::CircleFunction;

/// `Q(f₁,…,f₅)` by contraction against the Bessel tensor:
/// `q_m = (2π)⁴ Σ c¹_{n₁}⋯c⁵_{n₅} (-1)^{n₄+n₅} T(n₁,n₂,n₃; m,-n₄,-n₅)` with
/// `n₅ = m - n₁ - ⋯ - n₄`. The output carries the tensor's bandwidth.
pub fn quintic_convolve(fs: [&CircleFunction; 5], tensor: &BesselTensor) -> Result<CircleFunction> {
    let n = tensor.n as i64;
    for (i, f) in fs.iter().enumerate() {
        if f.bandwidth() > tensor.n {
            return Err(Error::Bandwidth(format!(
                "input {} has bandwidth {} above the tensor's {}",
                i + 1,
                f.bandwidth(),
                tensor.n
            )));
        }
    }
    if tensor.is_empty() {
        return Err(Error::TensorMismatch("empty tensor".into()));
    }
    let lead = (2.0 * PI).powi(4);
    let coeffs: Vec<Complex64> = (-n..=n)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&m| {
            let mut q = Complex64::new(0.0, 0.0);
            for n1 in -n..=n {
                let a = fs[0].coeff(n1);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for n2 in -n..=n {
                    let b = a * fs[1].coeff(n2);
                    if b == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for n3 in -n..=n {
                        let c = b * fs[2].coeff(n3);
                        if c == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        for n4 in -n..=n {
                            let n5 = m - n1 - n2 - n3 - n4;
                            if n5.abs() > n {
                                continue;
                            }
                            let d = c * fs[3].coeff(n4) * fs[4].coeff(n5);
                            if d == Complex64::new(0.0, 0.0) {
                                continue;
                            }
                            let t = tensor.get(&[
                                n1 as i32,
                                n2 as i32,
                                n3 as i32,
                                m as i32,
                                -n4 as i32,
                                -n5 as i32,
                            ])?;
                            let sign = if (n4 + n5).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                            q += d * (sign * t);
                        }
                    }
                }
            }
            Ok(lead * q)
        })
        .collect::<Result<_>>()?;
    Ok(CircleFunction::from_coeffs(coeffs))
}
