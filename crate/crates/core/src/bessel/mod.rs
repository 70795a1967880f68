//! Bessel functions of integer order and the radial quadrature built on them.

pub mod asymptotic;
pub mod cache;
pub mod radial;
pub mod tensor;

pub use asymptotic::TailSeries;
pub use radial::{radial_integrate, Integrand, RadialGrid};
pub use tensor::{build_tensor, six_bessel_integral, BesselTensor};

use std::f64::consts::PI;

use crate::error::{Error, Result};

const MAX_ORDER: usize = 256;
const MAX_ARG: f64 = 1e4;

fn check_domain(n: usize, x: f64) -> Result<()> {
    if n > MAX_ORDER || !(0.0..=MAX_ARG).contains(&x) || x.is_nan() {
        return Err(Error::Domain(format!(
            "J_n(x) needs 0 ≤ n ≤ {MAX_ORDER} and 0 ≤ x ≤ {MAX_ARG}; got n = {n}, x = {x}"
        )));
    }
    Ok(())
}

/// `J_n(x)` for `0 ≤ n ≤ 256`, `0 ≤ x ≤ 10⁴`, absolute error below 1e-12.
pub fn bessel_j(n: usize, x: f64) -> Result<f64> {
    check_domain(n, x)?;
    if x <= 12.0 {
        Ok(power_series(n, x))
    } else if x >= hankel_threshold(n) {
        Ok(hankel(n as f64, x))
    } else {
        Ok(bessel_j_orders(n, x)?[n])
    }
}

/// Smallest argument at which the Hankel expansion is used for order `n`.
pub fn hankel_threshold(n: usize) -> f64 {
    30.0 + (n * n) as f64 / 4.0
}

/// `[J_0(x), …, J_nmax(x)]`.
pub fn bessel_j_orders(nmax: usize, x: f64) -> Result<Vec<f64>> {
    check_domain(nmax, x)?;
    if x == 0.0 {
        let mut out = vec![0.0; nmax + 1];
        out[0] = 1.0;
        return Ok(out);
    }
    if x >= 30.0 && (nmax as f64) < x {
        let mut out = Vec::with_capacity(nmax + 1);
        out.push(hankel(0.0, x));
        if nmax >= 1 {
            out.push(hankel(1.0, x));
        }
        for k in 1..nmax {
            let next = 2.0 * k as f64 / x * out[k] - out[k - 1];
            out.push(next);
        }
        return Ok(out);
    }
    Ok(miller(nmax, x))
}

fn power_series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for j in 1..=n {
        lead *= half / j as f64;
    }
    if lead == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut term = lead;
    let mut sum = lead;
    for k in 1..200 {
        term *= q / (k as f64 * (n + k) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(lead) {
            break;
        }
    }
    sum
}

/// Hankel asymptotic expansion, truncated at the smallest term.
fn hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let chi = x - (0.5 * nu + 0.25) * PI;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Downward recurrence normalized by `J_0 + 2 Σ J_{2k} = 1`.
fn miller(nmax: usize, x: f64) -> Vec<f64> {
    let top = nmax.max(x.ceil() as usize) + 20 + (12.2 * x.cbrt()) as usize;
    let start = top + (top % 2);
    let mut out = vec![0.0; nmax + 1];
    let mut upper = 0.0;
    let mut cur = 1e-300;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        // cur = J_k (unnormalized), compute J_{k-1}
        let lower = 2.0 * k as f64 / x * cur - upper;
        upper = cur;
        cur = lower;
        let j = k - 1;
        if j <= nmax {
            out[j] = cur;
        }
        if j % 2 == 0 {
            norm += if j == 0 { cur } else { 2.0 * cur };
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            upper *= 1e-250;
            norm *= 1e-250;
            for v in out.iter_mut().skip(j) {
                *v *= 1e-250;
            }
        }
    }
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    // scipy.special.jv / mpmath.besselj at 20 digits
    const GOLDEN: [(usize, f64, f64); 22] = [
        (0, 0.5, 0.93846980724081290423),
        (0, 1.0, 0.76519768655796655145),
        (1, 1.0, 0.44005058574493351596),
        (0, 5.0, -0.17759677131433830435),
        (2, 5.0, 0.046565116277752215532),
        (5, 10.0, -0.23406152818679364044),
        (0, 12.0, 0.047689310796833536624),
        (3, 12.5, 0.11000813631434926814),
        (10, 12.0, 0.30047603527126931073),
        (20, 12.0, 0.00025121327024539953203),
        (30, 29.0, 0.10304804665860467132),
        (0, 35.0, -0.12684568275631256981),
        (1, 35.0, 0.04399094217962563997),
        (12, 40.0, -0.12697799611784806361),
        (50, 45.0, 0.017284343240791224451),
        (100, 100.0, 0.096366673295861559674),
        (100, 300.0, -0.014491227064785698861),
        (256, 200.0, 3.3691125958978743023e-14),
        (256, 10000.0, 0.0075248140685580049494),
        (0, 10000.0, -0.0070961603533888014773),
        (5, 1000.0, 0.0050254069452331860742),
        (64, 2048.0, 0.017540333484306279568),
    ];

    #[test]
    fn matches_reference_values() {
        for (n, x, want) in GOLDEN {
            let got = bessel_j(n, x).unwrap();
            assert!((got - want).abs() < 1e-12, "J_{n}({x}) = {got}, want {want}");
            let all = bessel_j_orders(n, x).unwrap();
            assert!((all[n] - want).abs() < 1e-12, "orders J_{n}({x}) = {}", all[n]);
        }
    }

    #[test]
    fn trivial_values_and_domain() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(3, 0.0).unwrap(), 0.0);
        assert!(bessel_j(3, 17000.0).is_err());
        assert!(bessel_j(300, 1.0).is_err());
        assert!(bessel_j(0, -1.0).is_err());
    }

    #[test]
    fn first_zero_of_j0() {
        assert!(bessel_j(0, 2.404825557695773).unwrap().abs() < 1e-10);
    }

    #[test]
    fn jacobi_anger_parseval() {
        for x in [0.5, 1.0, 5.0, 20.0] {
            let j = bessel_j_orders(80, x).unwrap();
            let s: f64 = j[0] * j[0] + 2.0 * j[1..].iter().map(|v| v * v).sum::<f64>();
            assert!((s - 1.0).abs() < 1e-10, "x = {x}: {s}");
            assert!(j.iter().all(|v| v.abs() <= 1.0));
        }
    }

    #[test]
    fn methods_agree_across_switch_points() {
        for n in [0usize, 1, 4, 9, 17] {
            let x = hankel_threshold(n);
            let a = hankel(n as f64, x);
            let b = miller(n, x)[n];
            assert!((a - b).abs() < 1e-12, "n = {n}: {a} vs {b}");
        }
        for n in [0usize, 3, 8, 30] {
            let a = power_series(n, 12.0);
            let b = miller(n, 12.0)[n];
            assert!((a - b).abs() < 1e-12, "n = {n}: {a} vs {b}");
        }
    }
}
