//! Oracles written independently of the library code paths.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tomas_stein::CircleFunction;

/// Double-exponential rule on `(a, b)`; endpoint singularities of
/// inverse-square-root or logarithmic type are fine.
pub fn de_quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, h: f64) -> f64 {
    de_quad_ends(|x, _, _| f(x), a, b, h)
}

/// Same rule, also passing the exact distances `x − a` and `b − x` so the
/// integrand can avoid cancellation next to an endpoint.
pub fn de_quad_ends<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, h: f64) -> f64 {
    let half = 0.5 * (b - a);
    let kmax = (4.5 / h) as i64;
    let mut sum = 0.0;
    for k in -kmax..=kmax {
        let t = k as f64 * h;
        let u = 0.5 * PI * t.sinh();
        let da = 2.0 * half / ((-2.0 * u).exp() + 1.0);
        let db = 2.0 * half / ((2.0 * u).exp() + 1.0);
        if da == 0.0 || db == 0.0 {
            continue;
        }
        let x = if da < db { a + da } else { b - db };
        let w = 0.5 * PI * t.cosh() / u.cosh().powi(2);
        sum += w * f(x, da, db);
    }
    sum * half * h
}

/// Density of `σ∗σ` at radius `d`, written from `4 − d²` to keep precision
/// near the rim.
fn mu2_from(d: f64, four_minus_d2: f64) -> f64 {
    4.0 / (d * four_minus_d2.sqrt())
}

/// `G_m(r) = ∫ cos(mα) μ₂(|r − e^{iα}|) dα` over the full circle.
pub fn angular_profile(m: i32, r: f64, h: f64) -> f64 {
    let amax = if r <= 1.0 {
        PI
    } else {
        ((r * r - 3.0) / (2.0 * r)).clamp(-1.0, 1.0).acos()
    };
    let (sa, ca) = (amax.sin(), amax.cos());
    let g = |a: f64, _: f64, db: f64| {
        let c = a.cos();
        let d2 = (1.0 - r).powi(2) + 4.0 * r * (0.5 * a).sin().powi(2);
        // 4 − d² = 2r (cos α − cos α_max) expanded around α_max
        let rim = if r > 1.0 {
            2.0 * r * (sa * db.sin() - 2.0 * ca * (0.5 * db).sin().powi(2))
        } else {
            3.0 - r * r + 2.0 * r * c
        };
        if rim <= 0.0 || d2 <= 0.0 {
            return 0.0;
        }
        (m as f64 * a).cos() * mu2_from(d2.sqrt(), rim)
    };
    2.0 * de_quad_ends(g, 0.0, amax, h)
}

/// `∫₀^∞ J_m(ρ)² J₀(ρ)⁴ ρ dρ` without Bessel functions: by Plancherel it is
/// `(2π)^{-4} ∫₀³ G_m(r)² r dr` for the density `G_m` of `e^{imθ}σ ∗ σ ∗ σ`.
pub fn spatial_tensor_oracle(m: i32, h: f64) -> f64 {
    let outer = |r: f64| angular_profile(m, r, h).powi(2) * r;
    let total = de_quad(outer, 0.0, 1.0, h) + de_quad(outer, 1.0, 3.0, h);
    total / (2.0 * PI).powi(4)
}

/// `(fσ)^(ρ e^{iφ}) = ∫ f(θ) e^{-iρ cos(θ−φ)} dθ` by the periodic
/// trapezoid rule.
pub fn direct_extension(f: &CircleFunction, rho: f64, phi: f64, m: usize) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for j in 0..m {
        let th = 2.0 * PI * j as f64 / m as f64;
        s += f.eval(th) * Complex64::from_polar(1.0, -rho * (th - phi).cos());
    }
    s * (2.0 * PI / m as f64)
}

/// Orbits of admissible tuples in `[-n, n]⁶` under permutations within each
/// triple, exchange of triples and negation, by explicit closure.
pub fn orbit_count(n: i32) -> usize {
    use std::collections::BTreeSet;
    let perms3 = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut seen = BTreeSet::new();
    let mut orbits = 0;
    let range: Vec<i32> = (-n..=n).collect();
    let mut tuples = Vec::new();
    for &a in &range {
        for &b in &range {
            for &c in &range {
                for &d in &range {
                    for &e in &range {
                        for &f in &range {
                            if a + b + c == d + e + f {
                                tuples.push([a, b, c, d, e, f]);
                            }
                        }
                    }
                }
            }
        }
    }
    for t in tuples {
        if seen.contains(&t) {
            continue;
        }
        orbits += 1;
        for p in perms3 {
            for q in perms3 {
                for swap in [false, true] {
                    for neg in [1, -1] {
                        let (x, y) = if swap { (3, 0) } else { (0, 3) };
                        let u = [
                            t[x + p[0]], t[x + p[1]], t[x + p[2]],
                            t[y + q[0]], t[y + q[1]], t[y + q[2]],
                        ];
                        seen.insert(u.map(|v| v * neg));
                    }
                }
            }
        }
    }
    orbits
}

/// Histogram of `|e^{iα} + e^{iβ}|` for uniform independent angles,
/// normalized to probabilities per bin.
pub fn mc_histogram(samples: usize, bins: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0usize; bins];
    for _ in 0..samples {
        let a: f64 = rng.gen_range(0.0..2.0 * PI);
        let b: f64 = rng.gen_range(0.0..2.0 * PI);
        let r = (a.cos() + b.cos()).hypot(a.sin() + b.sin());
        let k = ((r / 2.0) * bins as f64) as usize;
        counts[k.min(bins - 1)] += 1;
    }
    counts.iter().map(|c| *c as f64 / samples as f64).collect()
}

pub fn random_function(n: usize, rng: &mut ChaCha8Rng) -> CircleFunction {
    CircleFunction::from_coeffs(
        (0..2 * n + 1)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}
