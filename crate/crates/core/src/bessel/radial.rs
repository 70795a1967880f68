//! Composite radial quadrature on `[0, P]` with closed-form Bessel tails.

use num_complex::Complex64;
use serde::Serialize;

use super::asymptotic::{TailMemo, TailSeries, DEFAULT_ORDER};
use super::bessel_j;
use crate::error::{Error, Result};
use crate::quadrature::composite_rule;

/// Default radial cutoff.
pub const DEFAULT_CUTOFF: f64 = 200.0;
const PANEL_WIDTH: f64 = 2.0;
const PANEL_ORDER: usize = 20;

/// Gauss-Legendre panels on `[0, P]`.
#[derive(Clone, Debug, Serialize)]
pub struct RadialGrid {
    pub cutoff: f64,
    #[serde(skip)]
    pub nodes: Vec<f64>,
    #[serde(skip)]
    pub weights: Vec<f64>,
    pub tail: bool,
    pub tail_order: usize,
}

impl RadialGrid {
    /// Panels of width at most 2 with 20 nodes each.
    pub fn new(cutoff: f64, tail: bool) -> Self {
        Self::with_density(cutoff, tail, PANEL_WIDTH, PANEL_ORDER)
    }

    pub fn with_density(cutoff: f64, tail: bool, panel_width: f64, order: usize) -> Self {
        assert!(cutoff > 0.0);
        let panels = (cutoff / panel_width).ceil().max(1.0) as usize;
        let edges: Vec<f64> = (0..=panels)
            .map(|k| cutoff * k as f64 / panels as f64)
            .collect();
        let (nodes, weights) = composite_rule(&edges, order);
        Self {
            cutoff,
            nodes,
            weights,
            tail,
            tail_order: DEFAULT_ORDER,
        }
    }

    /// Cutoff large enough for the Hankel expansion of orders `orders` to
    /// be accurate, and at least `base`.
    pub fn cutoff_for_orders(base: f64, orders: &[i64]) -> f64 {
        let s: i64 = orders.iter().map(|n| n * n).sum();
        base.max(s as f64 / 4.0)
    }

    /// Same layout with the cutoff doubled.
    pub fn doubled(&self) -> Self {
        let mut g = Self::new(2.0 * self.cutoff, self.tail);
        g.tail_order = self.tail_order;
        g
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Radial integrands understood by [`radial_integrate`].
pub enum Integrand<'a> {
    /// Integrand negligible beyond the cutoff.
    Decaying(&'a (dyn Fn(f64) -> f64 + Sync)),
    /// `ρ^p ∏ J_{n_i}(s_i ρ)`.
    BesselProduct {
        factors: Vec<(i64, f64)>,
        rho_power: i32,
    },
}

fn signed_j(n: i64, x: f64) -> Result<f64> {
    let v = bessel_j(n.unsigned_abs() as usize, x)?;
    Ok(if n < 0 && n % 2 != 0 { -v } else { v })
}

/// Integral over `[0, ∞)` with an error estimate.
pub fn radial_integrate(g: &Integrand, grid: &RadialGrid) -> Result<(f64, f64)> {
    match g {
        Integrand::Decaying(f) => {
            let fine: f64 = grid.nodes.iter().zip(&grid.weights).map(|(x, w)| w * f(*x)).sum();
            let coarse_grid =
                RadialGrid::with_density(grid.cutoff, false, PANEL_WIDTH, PANEL_ORDER / 2);
            let coarse: f64 = coarse_grid
                .nodes
                .iter()
                .zip(&coarse_grid.weights)
                .map(|(x, w)| w * f(*x))
                .sum();
            Ok((fine, (fine - coarse).abs()))
        }
        Integrand::BesselProduct { factors, rho_power } => {
            let twice: i32 = factors.len() as i32 - 2 * rho_power;
            if twice <= 0 {
                return Err(Error::Divergent(format!(
                    "ρ^{rho_power} times {} Bessel factors does not decay",
                    factors.len()
                )));
            }
            let mut body = 0.0;
            for (x, w) in grid.nodes.iter().zip(&grid.weights) {
                let mut v = w * x.powi(*rho_power);
                for (n, s) in factors {
                    v *= signed_j(*n, s * x)?;
                }
                body += v;
            }
            if !grid.tail {
                return Ok((body, f64::NAN));
            }
            let (tail, err) = bessel_product_tail(factors, *rho_power, grid.cutoff, grid.tail_order)?;
            Ok((body + tail.re, err + 1e-15 * body.abs()))
        }
    }
}

/// `∫_P^∞ ρ^p ∏ J_{n_i}(s_i ρ) dρ` from the Hankel expansions.
pub fn bessel_product_tail(
    factors: &[(i64, f64)],
    rho_power: i32,
    cutoff: f64,
    order: usize,
) -> Result<(Complex64, f64)> {
    let mut series: Option<TailSeries> = None;
    for (n, s) in factors {
        let f = TailSeries::bessel(*n, *s, order);
        series = Some(match series {
            None => f,
            Some(acc) => acc.mul(&f),
        });
    }
    let series = series
        .ok_or_else(|| Error::Divergent("empty Bessel product".into()))?
        .times_power(rho_power);
    let mut memo = TailMemo::default();
    series.integrate(cutoff, &mut memo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_weights_sum_to_cutoff() {
        let g = RadialGrid::new(200.0, true);
        let total: f64 = g.weights.iter().sum();
        assert!((total - 200.0).abs() < 1e-12 * 200.0, "{total}");
        assert!(g.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(g.nodes[0] > 0.0 && *g.nodes.last().unwrap() < 200.0);
    }

    #[test]
    fn exponential_integrand() {
        let f = |x: f64| (-x).exp();
        let (v, err) = radial_integrate(&Integrand::Decaying(&f), &RadialGrid::new(60.0, false)).unwrap();
        assert!((v - 1.0).abs() < 1e-10 && err < 1e-10);
    }

    #[test]
    fn non_decaying_product_is_rejected() {
        let g = Integrand::BesselProduct {
            factors: vec![(0, 1.0), (0, 1.0)],
            rho_power: 1,
        };
        assert!(matches!(
            radial_integrate(&g, &RadialGrid::new(50.0, true)),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn sixth_power_is_cutoff_independent() {
        let g = Integrand::BesselProduct {
            factors: vec![(0, 1.0); 6],
            rho_power: 1,
        };
        let (a, _) = radial_integrate(&g, &RadialGrid::new(200.0, true)).unwrap();
        let (b, _) = radial_integrate(&g, &RadialGrid::new(400.0, true)).unwrap();
        assert!((a - b).abs() < 1e-10, "{a} {b}");
    }
}
