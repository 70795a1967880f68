//! Scalar result records shared by the experiment commands.

use serde::Serialize;
use serde_json::{json, Map, Value};

/// Grid parameters a number was computed on.
#[derive(Clone, Debug, Default, Serialize)]
pub struct GridMetadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angles: Option<usize>,
}

impl GridMetadata {
    pub fn band(n: usize) -> Self {
        Self {
            bandwidth: Some(n),
            ..Self::default()
        }
    }

    pub fn with_cutoff(mut self, cutoff: f64) -> Self {
        self.cutoff = Some(cutoff);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Quantity {
    pub quantity: String,
    pub value: f64,
    pub error_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_value: Option<f64>,
    pub grid_metadata: GridMetadata,
}

impl Quantity {
    pub fn new(name: &str, value: f64, grid: GridMetadata) -> Self {
        Self {
            quantity: name.to_string(),
            value,
            error_estimate: None,
            oracle_value: None,
            grid_metadata: grid,
        }
    }

    pub fn error(mut self, e: f64) -> Self {
        self.error_estimate = Some(e);
        self
    }

    pub fn oracle(mut self, v: f64) -> Self {
        self.oracle_value = Some(v);
        self
    }

    /// `|value − oracle| / |oracle|`.
    pub fn oracle_rel(&self) -> Option<f64> {
        self.oracle_value.map(|o| (self.value - o).abs() / o.abs().max(f64::MIN_POSITIVE))
    }
}

/// Oracle comparison line of a `--verify` run.
#[derive(Clone, Debug, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub computed: f64,
    pub oracle: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleCheck {
    pub fn new(name: &str, computed: f64, oracle: f64, tolerance: f64) -> Self {
        let rel_error = (computed - oracle).abs() / oracle.abs().max(f64::MIN_POSITIVE);
        Self {
            name: name.to_string(),
            computed,
            oracle,
            rel_error,
            tolerance,
            pass: rel_error <= tolerance,
        }
    }

    /// Absolute comparison; `rel_error` then holds `|computed − oracle|`.
    pub fn absolute(name: &str, computed: f64, oracle: f64, tolerance: f64) -> Self {
        let err = (computed - oracle).abs();
        Self {
            name: name.to_string(),
            computed,
            oracle,
            rel_error: err,
            tolerance,
            pass: err <= tolerance,
        }
    }
}

/// Collect quantities into a JSON object keyed by name.
pub fn quantities_json(qs: &[Quantity]) -> Value {
    let mut m = Map::new();
    for q in qs {
        m.insert(q.quantity.clone(), json!(q));
    }
    Value::Object(m)
}
