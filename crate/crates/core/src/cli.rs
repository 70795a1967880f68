//! Experiment runner behind the `ts-lab` binary: configuration, dispatch,
//! result envelopes and their schema.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bessel::radial::DEFAULT_CUTOFF;
use crate::bessel::{build_tensor, cache, six_bessel_integral, BesselTensor, RadialGrid};
use crate::error::{Error, Result};
use crate::extension::{decay_check, default_grid, extend};
use crate::quintic::{auto_density, sup_bound_check};
use crate::regularity::smoothing::{smoothing_experiment, SmoothingConfig};
use crate::regularity::{regularity_profile, sharp_flat_split};
use crate::report::{GridMetadata, OracleCheck, Quantity};
use crate::solver::{ascend, normalize_lambda, picard_iterate, random_start, AscentConfig, PicardConfig, PicardState};
use crate::spectral::{inner_product, CircleFunction};
use crate::variational::{el_residual, quotient, ts_functional};
use crate::VERSION;

/// Largest bandwidth for which a command may build a tensor on its own.
pub const IMPLICIT_TENSOR_MAX: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    TensorBuild,
    Extend,
    Density,
    SupBound,
    Functional,
    ElResidual,
    Solve,
    Picard,
    Split,
    Smoothing,
    Constant,
    RegularityProfile,
}

impl Command {
    pub const ALL: [Command; 12] = [
        Command::TensorBuild,
        Command::Extend,
        Command::Density,
        Command::SupBound,
        Command::Functional,
        Command::ElResidual,
        Command::Solve,
        Command::Picard,
        Command::Split,
        Command::Smoothing,
        Command::Constant,
        Command::RegularityProfile,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::TensorBuild => "tensor-build",
            Command::Extend => "extend",
            Command::Density => "density",
            Command::SupBound => "sup-bound",
            Command::Functional => "functional",
            Command::ElResidual => "el-residual",
            Command::Solve => "solve",
            Command::Picard => "picard",
            Command::Split => "split",
            Command::Smoothing => "smoothing",
            Command::Constant => "constant",
            Command::RegularityProfile => "regularity-profile",
        }
    }

    fn default_bandwidth(self) -> usize {
        match self {
            Command::Constant | Command::ElResidual => 0,
            Command::TensorBuild | Command::Extend | Command::Functional => 4,
            Command::Solve | Command::Picard => 16,
            Command::Split | Command::Smoothing | Command::RegularityProfile => 64,
            Command::Density | Command::SupBound => 0,
        }
    }

    /// Keys every payload of this command must carry.
    pub fn schema(self) -> &'static [&'static str] {
        match self {
            Command::TensorBuild => &["n", "cutoff", "entries", "checksum", "max_error"],
            Command::Extend => &["bandwidth", "l6_norm", "decay"],
            Command::Density => &["order", "radii", "values", "singular_radii", "sup"],
            Command::SupBound => &["order", "sup", "sup_refined", "relative_change", "finite"],
            Command::Functional => &["functional", "quotient", "input"],
            Command::ElResidual => &["lambda_fit", "lambda_paper", "residual_l2", "quotient"],
            Command::Solve => &["quotient", "lambda", "residual", "converged", "f", "trace"],
            Command::Picard => &["cutoff", "ball_radius", "history", "converged", "distance_to_g"],
            Command::Split => &["eta", "cutoff", "sharp_lipschitz", "calh"],
            Command::Smoothing => &["gain", "gain_holds", "lipschitz", "lipschitz_change", "eta"],
            Command::Constant => &["constant", "t0", "conditional"],
            Command::RegularityProfile => &["bandwidth", "slope", "holder", "calh"],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown command '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Config(format!("unknown format '{s}' (json or csv)"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    /// Bandwidth `N`; each command has its own default.
    pub n: Option<usize>,
    /// Radial cutoff `P`.
    pub cutoff: Option<f64>,
    /// Density order for `density`, `sup-bound`.
    pub k: usize,
    pub eps: f64,
    pub eta: f64,
    pub s: f64,
    pub alpha: f64,
    pub seed: u64,
    /// Binary tensor cache (read by compute commands, written by
    /// `tensor-build`).
    pub tensor: Option<PathBuf>,
    /// JSON input function (`{"n": N, "coeffs": [[re, im], …]}`).
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub verify: bool,
    pub format: Format,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            n: None,
            cutoff: None,
            k: 5,
            eps: 0.05,
            eta: 0.1,
            s: 0.5,
            alpha: 0.5,
            seed: 0,
            tensor: None,
            input: None,
            out: None,
            verify: false,
            format: Format::Json,
        }
    }

    pub fn bandwidth(&self) -> usize {
        self.n.unwrap_or_else(|| self.command.default_bandwidth())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.bandwidth();
        if n > 77 {
            return Err(Error::Config(format!("--n {n} is above the supported 77")));
        }
        if let Some(p) = self.cutoff {
            if !(200.0..=9000.0).contains(&p) {
                return Err(Error::Config(format!("--cutoff {p} must lie in [200, 9000]")));
            }
        }
        if !(2..=5).contains(&self.k) {
            return Err(Error::Config(format!("--k {} must lie in 2..=5", self.k)));
        }
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(Error::Config(format!("--eps {} must lie in (0, 1]", self.eps)));
        }
        if !(self.eta > 0.0) {
            return Err(Error::Config(format!("--eta {} must be positive", self.eta)));
        }
        if !(0.0..=3.0).contains(&self.s) {
            return Err(Error::Config(format!("--s {} must lie in [0, 3]", self.s)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("--alpha {} must lie in (0, 1)", self.alpha)));
        }
        Ok(())
    }

    fn grid(&self) -> RadialGrid {
        RadialGrid::new(self.cutoff.unwrap_or(DEFAULT_CUTOFF), true)
    }

    fn read_input(&self) -> Result<Option<CircleFunction>> {
        match &self.input {
            Some(p) => {
                let text = std::fs::read_to_string(p)?;
                Ok(Some(CircleFunction::from_json(&serde_json::from_str(&text)?)?))
            }
            None => Ok(None),
        }
    }

    fn input_or(&self, default: impl FnOnce() -> CircleFunction) -> Result<CircleFunction> {
        Ok(self.read_input()?.unwrap_or_else(default))
    }

    /// Tensor from the cache when given, otherwise built in place up to
    /// `IMPLICIT_TENSOR_MAX`.
    fn tensor(&self, n: usize) -> Result<BesselTensor> {
        if let Some(p) = &self.tensor {
            if !p.exists() {
                return Err(Error::Config(format!("tensor cache {} does not exist", p.display())));
            }
            let t = cache::read_cache(p)?;
            if t.n < n {
                return Err(Error::TensorMismatch(format!("cache has N = {}, need {n}", t.n)));
            }
            return Ok(t);
        }
        if n > IMPLICIT_TENSOR_MAX {
            return Err(Error::Precondition(format!(
                "N = {n} needs an explicit tensor-build (implicit limit {IMPLICIT_TENSOR_MAX})"
            )));
        }
        build_tensor(n, &self.grid())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultEnvelope {
    pub config: ExperimentConfig,
    pub version: String,
    pub wall_clock_seconds: f64,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<OracleCheck>>,
}

impl ResultEnvelope {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// The envelope without its wall-clock field; identical across reruns
    /// of the same configuration.
    pub fn reproducible_bytes(&self) -> Vec<u8> {
        let mut v = self.to_json();
        if let Some(m) = v.as_object_mut() {
            m.remove("wall_clock_seconds");
        }
        serde_json::to_vec(&v).expect("serializable")
    }

    /// Whether every oracle comparison passed (true without `--verify`).
    pub fn verified(&self) -> bool {
        self.oracle.as_ref().map_or(true, |o| o.iter().all(|c| c.pass))
    }
}

/// Envelope plus an optional CSV rendering of the main table.
pub struct RunOutput {
    pub envelope: ResultEnvelope,
    pub csv: Option<String>,
}

const PROVENANCE: [&str; 4] = ["config", "version", "wall_clock_seconds", "payload"];

/// Check provenance fields and the per-command payload keys.
pub fn validate_envelope(v: &Value) -> Result<Command> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Schema("envelope is not an object".into()))?;
    for key in PROVENANCE {
        if !obj.contains_key(key) {
            return Err(Error::Schema(format!("envelope lacks '{key}'")));
        }
    }
    let config = &obj["config"];
    let command: Command = config
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Schema("config lacks 'command'".into()))?
        .parse()
        .map_err(|_| Error::Schema("config names an unknown command".into()))?;
    if !config.get("seed").is_some_and(Value::is_u64) {
        return Err(Error::Schema("config lacks 'seed'".into()));
    }
    if !obj["version"].is_string() || !obj["wall_clock_seconds"].is_number() {
        return Err(Error::Schema("version or wall clock malformed".into()));
    }
    let payload = obj["payload"]
        .as_object()
        .ok_or_else(|| Error::Schema("payload is not an object".into()))?;
    for key in command.schema() {
        if !payload.contains_key(*key) {
            return Err(Error::Schema(format!("{command} payload lacks '{key}'")));
        }
    }
    Ok(command)
}

/// Run one command.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let start = Instant::now();
    let (payload, oracle, csv) = dispatch(config)?;
    let envelope = ResultEnvelope {
        config: config.clone(),
        version: VERSION.to_string(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        payload,
        oracle: config.verify.then_some(oracle),
    };
    validate_envelope(&envelope.to_json())?;
    Ok(RunOutput { envelope, csv })
}

type Dispatched = (Value, Vec<OracleCheck>, Option<String>);

fn dispatch(c: &ExperimentConfig) -> Result<Dispatched> {
    let n = c.bandwidth();
    match c.command {
        Command::TensorBuild => tensor_build(c, n),
        Command::Extend => {
            let f = c.input_or(|| CircleFunction::constant(Complex64::new(1.0, 0.0), n))?;
            let field = extend(&f, &default_grid(f.bandwidth()))?;
            let l6 = field.l6_norm()?;
            let decay = decay_check(&field, 10.0);
            let mut oracle = Vec::new();
            if c.verify {
                let want = ((2.0 * PI).powi(2) * ts_functional(&f)?).powf(1.0 / 6.0);
                oracle.push(OracleCheck::new("l6_vs_functional", l6, want, 1e-6));
            }
            let payload = json!({
                "bandwidth": f.bandwidth(),
                "l6_norm": Quantity::new("l6_norm", l6, GridMetadata {
                    bandwidth: Some(f.bandwidth()),
                    cutoff: Some(field.tail.as_ref().map_or(0.0, |t| t.cutoff)),
                    nodes: Some(field.radii.len()),
                    angles: Some(field.angles),
                }),
                "decay": decay,
            });
            Ok((payload, oracle, Some(field.to_csv())))
        }
        Command::Density => {
            let k = c.k;
            let radii: Vec<f64> = (0..=(k * 64)).map(|j| j as f64 / 64.0).filter(|r| *r < k as f64).collect();
            let d = auto_density(k, &radii)?;
            let sup = d.sup();
            let mut csv = String::from("r,value\n");
            for (r, v) in d.radii.iter().zip(&d.values) {
                csv.push_str(&format!("{r:.17e},{}\n", v.map_or("flagged".to_string(), |v| format!("{v:.17e}"))));
            }
            let mut oracle = Vec::new();
            if c.verify {
                let d = d.clone().with_mass()?;
                oracle.push(OracleCheck::new("mass", d.mass.unwrap_or(f64::NAN), (2.0 * PI).powi(k as i32), 1e-4));
            }
            let payload = json!({
                "order": k,
                "radii": d.radii,
                "values": d.values,
                "singular_radii": d.singular_radii,
                "sup": sup,
            });
            Ok((payload, oracle, Some(csv)))
        }
        Command::SupBound => {
            let k = c.k.max(4);
            let r = sup_bound_check(k, k as f64 - 0.01)?;
            let mut oracle = Vec::new();
            if c.verify && k == 5 {
                let t0 = six_bessel_integral([0; 6])?.0;
                oracle.push(OracleCheck::new("sup_vs_lambda0", r.sup, (2.0 * PI).powi(4) * t0, 1e-5));
            }
            Ok((serde_json::to_value(&r)?, oracle, None))
        }
        Command::Functional => {
            let f = c.input_or(|| random_start(n, c.seed))?;
            let phi = ts_functional(&f)?;
            let q = quotient(&f)?;
            let mut oracle = Vec::new();
            if c.verify && f.bandwidth() <= IMPLICIT_TENSOR_MAX {
                let t = c.tensor(f.bandwidth())?;
                let ft = f.conj_reflect().with_bandwidth(t.n);
                let fw = f.with_bandwidth(t.n);
                let qt = crate::quintic::quintic_convolve([&fw, &fw, &fw, &ft, &ft], &t)?;
                oracle.push(OracleCheck::new("functional_tensor_path", phi, inner_product(&qt, &fw).re, 1e-6));
            }
            let payload = json!({
                "functional": Quantity::new("functional", phi, GridMetadata::band(f.bandwidth())),
                "quotient": Quantity::new("quotient", q, GridMetadata::band(f.bandwidth())),
                "input": f.to_json(),
            });
            Ok((payload, oracle, None))
        }
        Command::ElResidual => {
            let f = c.input_or(|| CircleFunction::constant(Complex64::new(1.0, 0.0), n))?;
            let r = el_residual(&f)?;
            log::info!("{}", r.summary());
            let mut oracle = Vec::new();
            if c.verify {
                oracle.push(OracleCheck::new("lambda_fit_vs_paper", r.lambda_fit, r.lambda_paper, 1e-6));
            }
            Ok((serde_json::to_value(&r)?, oracle, None))
        }
        Command::Solve => {
            let f0 = c.input_or(|| random_start(n, c.seed))?;
            let config = AscentConfig {
                bandwidth: n.max(f0.bandwidth()),
                ..AscentConfig::default()
            };
            let r = ascend(&f0, &config)?;
            let mut oracle = Vec::new();
            if c.verify {
                let q1 = quotient(&CircleFunction::constant(Complex64::new(1.0, 0.0), 0))?;
                oracle.push(OracleCheck::new("quotient_vs_constants", r.quotient, q1, 1e-4));
            }
            let payload = json!({
                "quotient": r.quotient,
                "lambda": r.lambda,
                "residual": r.residual,
                "converged": r.converged,
                "f": r.f.to_json(),
                "trace": r.trace,
            });
            Ok((payload, oracle, Some(r.trace_jsonl())))
        }
        Command::Picard => {
            let f = match c.read_input()? {
                Some(f) => f,
                None => {
                    let start = CircleFunction::constant(Complex64::new(1.0, 0.0), n)
                        .add(&CircleFunction::mode(1, n).scale(Complex64::new(0.3, 0.0)));
                    let r = ascend(&start, &AscentConfig { bandwidth: n, ..AscentConfig::default() })?;
                    if !r.converged {
                        return Err(Error::NotConverged("extremizer search for the Picard start".into()));
                    }
                    r.f
                }
            };
            let (f, _) = normalize_lambda(&f)?;
            let pc = PicardConfig {
                eps: c.eps,
                scale: c.s,
                ..PicardConfig::default()
            };
            let steps = pc.max_steps;
            let st = picard_iterate(PicardState::new(&f, pc)?, steps)?;
            let mut payload = serde_json::to_value(&st)?;
            let m = payload.as_object_mut().expect("object");
            m.insert("distance_to_g".into(), json!(st.distance_to_g()));
            m.insert("max_ratio_l2".into(), json!(st.max_ratio_l2()));
            m.insert("max_ratio_calh".into(), json!(st.max_ratio_calh()));
            let mut oracle = Vec::new();
            if c.verify {
                oracle.push(OracleCheck::absolute("fixed_point_distance_to_g", st.distance_to_g(), 0.0, 1e-6));
            }
            Ok((payload, oracle, None))
        }
        Command::Split => {
            let f = c.input_or(|| CircleFunction::square_wave(n))?;
            let (sharp, flat, r) = sharp_flat_split(&f, c.eta, c.s)?;
            let mut oracle = Vec::new();
            if c.verify {
                oracle.push(OracleCheck::new("sharp_plus_flat", sharp.add(&flat).norm(), f.norm(), 1e-12));
            }
            Ok((serde_json::to_value(&r)?, oracle, None))
        }
        Command::Smoothing => {
            let f = c.input_or(|| CircleFunction::square_wave(n))?;
            let tensor = match &c.tensor {
                Some(_) => Some(c.tensor(0)?),
                None => None,
            };
            let config = SmoothingConfig {
                split_scale: c.s,
                ..SmoothingConfig::default()
            };
            let r = smoothing_experiment(&f, tensor.as_ref(), &config)?;
            Ok((serde_json::to_value(&r)?, Vec::new(), None))
        }
        Command::Constant => {
            let (t0, t0_err) = six_bessel_integral([0; 6])?;
            // ⟨Q(1), 1⟩ = (2π)⁵ T₀ and ‖1‖² = 2π
            let from_t0 = ((2.0 * PI).powi(7) * t0).powf(1.0 / 6.0) / (2.0 * PI).sqrt();
            let mut oracle = Vec::new();
            let mut constant = Quantity::new("constant", from_t0, GridMetadata::band(0).with_cutoff(DEFAULT_CUTOFF))
                .error(from_t0 * t0_err / (6.0 * t0));
            if c.verify {
                let q = quotient(&CircleFunction::constant(Complex64::new(1.0, 0.0), 0))?;
                constant = constant.oracle(q);
                oracle.push(OracleCheck::new("constant_vs_extension", from_t0, q, 1e-6));
            }
            let payload = json!({
                "constant": constant,
                "t0": Quantity::new("t0", t0, GridMetadata::band(0)).error(t0_err),
                "conditional": true,
            });
            Ok((payload, oracle, None))
        }
        Command::RegularityProfile => {
            let f = c.input_or(|| CircleFunction::square_wave(n))?;
            let p = regularity_profile(&f, &[c.alpha], &[c.s])?;
            Ok((p.to_json(), Vec::new(), Some(p.spectrum_csv())))
        }
    }
}

fn tensor_build(c: &ExperimentConfig, n: usize) -> Result<Dispatched> {
    let t = build_tensor(n, &c.grid())?;
    let mut oracle = Vec::new();
    if let Some(p) = &c.out {
        if c.format == Format::Json {
            cache::cache_roundtrip(&t, p)?;
            oracle.push(OracleCheck::new("cache_roundtrip", 1.0, 1.0, 0.0));
        }
    }
    if c.verify {
        let t0 = six_bessel_integral([0; 6])?.0;
        oracle.push(OracleCheck::new("t0_entry", t.get(&[0; 6])?, t0, 1e-12));
    }
    let payload = json!({
        "n": t.n,
        "cutoff": t.cutoff,
        "entries": t.len(),
        "checksum": format!("{:#018x}", t.checksum()),
        "max_error": t.max_error(),
        "cache": c.out.as_ref().map(|p| p.display().to_string()),
    });
    Ok((payload, oracle, Some(cache::to_csv(&t))))
}
