//! Six-fold Bessel product integrals `∫₀^∞ ∏ J_{n_i}(ρ) ρ dρ` and their
//! tabulation over admissible index tuples.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::asymptotic::DEFAULT_ORDER;
use super::radial::{bessel_product_tail, RadialGrid, DEFAULT_CUTOFF};
use super::bessel_j_orders;
use crate::error::{Error, Result};

pub type Tuple = [i32; 6];

pub fn is_admissible(t: &Tuple) -> bool {
    t[0] + t[1] + t[2] == t[3] + t[4] + t[5]
}

fn canonical_one(t: &Tuple) -> [i16; 6] {
    let mut a = [t[0], t[1], t[2]];
    let mut b = [t[3], t[4], t[5]];
    a.sort_unstable();
    b.sort_unstable();
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    [lo[0], lo[1], lo[2], hi[0], hi[1], hi[2]].map(|v| v as i16)
}

/// Representative of the class of `t` under permutations within each
/// triple, exchange of the triples and global negation.
pub fn canonical(t: &Tuple) -> [i16; 6] {
    let neg = t.map(|v| -v);
    canonical_one(t).min(canonical_one(&neg))
}

/// Sorted absolute orders together with the sign picked up from
/// `J_{-n} = (-1)ⁿ J_n`.
fn reduce(t: &[i32]) -> ([u16; 6], f64) {
    let mut abs = [0u16; 6];
    let mut sign = 1.0;
    for (i, v) in t.iter().enumerate() {
        if *v < 0 && v % 2 != 0 {
            sign = -sign;
        }
        abs[i] = v.unsigned_abs() as u16;
    }
    abs.sort_unstable();
    (abs, sign)
}

/// `∫₀^∞ ∏ J_{n_i}(ρ) ρ dρ` with the default cutoff, as (value, error).
pub fn six_bessel_integral(t: Tuple) -> Result<(f64, f64)> {
    let orders: Vec<i64> = t.iter().map(|v| *v as i64).collect();
    let grid = RadialGrid::new(RadialGrid::cutoff_for_orders(DEFAULT_CUTOFF, &orders), true);
    six_bessel_integral_on(t, &grid)
}

/// Same integral on a caller-supplied grid.
pub fn six_bessel_integral_on(t: Tuple, grid: &RadialGrid) -> Result<(f64, f64)> {
    if !is_admissible(&t) {
        return Err(Error::Inadmissible(t));
    }
    let (abs, sign) = reduce(&t);
    let nmax = *abs.iter().max().unwrap() as usize;
    let mut body = 0.0;
    for (x, w) in grid.nodes.iter().zip(&grid.weights) {
        let j = bessel_j_orders(nmax, *x)?;
        body += w * x * abs.iter().map(|n| j[*n as usize]).product::<f64>();
    }
    let (tail, err) = abs_tail(&abs, grid)?;
    Ok((sign * (body + tail), err))
}

fn abs_tail(abs: &[u16; 6], grid: &RadialGrid) -> Result<(f64, f64)> {
    if !grid.tail {
        return Ok((0.0, f64::NAN));
    }
    let factors: Vec<(i64, f64)> = abs.iter().map(|n| (*n as i64, 1.0)).collect();
    let (v, err) = bessel_product_tail(&factors, 1, grid.cutoff, grid.tail_order)?;
    Ok((v.re, err))
}

/// Tabulated six-fold integrals for all admissible tuples with `|n_i| ≤ N`,
/// stored once per symmetry class.
#[derive(Clone, Debug, Serialize)]
pub struct BesselTensor {
    pub n: usize,
    pub cutoff: f64,
    pub tail_order: usize,
    /// Seconds since the Unix epoch at build time; not persisted.
    pub built_at: Option<u64>,
    #[serde(skip)]
    pub(crate) entries: BTreeMap<[i16; 6], (f64, f64)>,
}

impl BesselTensor {
    pub fn from_entries(n: usize, cutoff: f64, entries: BTreeMap<[i16; 6], (f64, f64)>) -> Self {
        Self {
            n,
            cutoff,
            tail_order: DEFAULT_ORDER,
            built_at: None,
            entries,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[i16; 6], &(f64, f64))> {
        self.entries.iter()
    }

    /// Value and error for any admissible tuple within range.
    pub fn lookup(&self, t: &Tuple) -> Result<(f64, f64)> {
        if !is_admissible(t) {
            return Err(Error::Inadmissible(*t));
        }
        if t.iter().any(|v| v.unsigned_abs() as usize > self.n) {
            return Err(Error::TensorMismatch(format!(
                "tuple {t:?} exceeds tensor bandwidth {}",
                self.n
            )));
        }
        self.entries
            .get(&canonical(t))
            .copied()
            .ok_or_else(|| Error::TensorMismatch(format!("no entry for {t:?}")))
    }

    pub fn get(&self, t: &Tuple) -> Result<f64> {
        Ok(self.lookup(t)?.0)
    }

    /// Largest error estimate over all entries.
    pub fn max_error(&self) -> f64 {
        self.entries.values().map(|v| v.1).fold(0.0, f64::max)
    }

    /// Checksum over the serialized records.
    pub fn checksum(&self) -> u64 {
        super::cache::records_checksum(&super::cache::encode_records(self))
    }
}

/// Canonical representatives of all admissible classes with `|n_i| ≤ n`.
pub fn admissible_classes(n: usize) -> BTreeSet<[i16; 6]> {
    let n = n as i32;
    let mut by_sum: HashMap<i32, Vec<[i32; 3]>> = HashMap::new();
    for a in -n..=n {
        for b in a..=n {
            for c in b..=n {
                by_sum.entry(a + b + c).or_default().push([a, b, c]);
            }
        }
    }
    let mut out = BTreeSet::new();
    for triples in by_sum.values() {
        for (i, x) in triples.iter().enumerate() {
            for y in &triples[i..] {
                out.insert(canonical(&[x[0], x[1], x[2], y[0], y[1], y[2]]));
            }
        }
    }
    out
}

/// Tabulate all admissible classes with `|n_i| ≤ n`. The cutoff is raised
/// to `6n²/4` when that exceeds the grid's.
pub fn build_tensor(n: usize, grid: &RadialGrid) -> Result<BesselTensor> {
    if n > 48 {
        return Err(Error::Precondition(format!(
            "tensor bandwidth {n} exceeds the supported maximum 48"
        )));
    }
    let cutoff = RadialGrid::cutoff_for_orders(grid.cutoff, &[n as i64; 6]);
    let grid = if cutoff > grid.cutoff {
        let mut g = RadialGrid::new(cutoff, grid.tail);
        g.tail_order = grid.tail_order;
        g
    } else {
        grid.clone()
    };
    let classes = admissible_classes(n);
    let multisets: BTreeSet<[u16; 6]> = classes
        .iter()
        .map(|c| reduce(&c.map(|v| v as i32)).0)
        .collect();
    let multisets: Vec<[u16; 6]> = multisets.into_iter().collect();

    let table: Vec<Vec<f64>> = grid
        .nodes
        .par_iter()
        .map(|x| bessel_j_orders(n, *x))
        .collect::<Result<_>>()?;
    let values: Vec<(f64, f64)> = multisets
        .par_iter()
        .map(|abs| {
            let mut body = 0.0;
            for ((x, w), j) in grid.nodes.iter().zip(&grid.weights).zip(&table) {
                body += w * x * abs.iter().map(|k| j[*k as usize]).product::<f64>();
            }
            let (tail, err) = abs_tail(abs, &grid)?;
            Ok((body + tail, err + 1e-16 * body.abs()))
        })
        .collect::<Result<_>>()?;
    let lookup: HashMap<[u16; 6], (f64, f64)> =
        multisets.into_iter().zip(values).collect();

    let entries = classes
        .into_iter()
        .map(|c| {
            let (abs, sign) = reduce(&c.map(|v| v as i32));
            let (v, e) = lookup[&abs];
            (c, (sign * v, e))
        })
        .collect();
    let built_at = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .ok()
        .map(|d| d.as_secs());
    Ok(BesselTensor {
        n,
        cutoff: grid.cutoff,
        tail_order: grid.tail_order,
        built_at,
        entries,
    })
}
