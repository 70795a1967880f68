use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use tomas_stein::cli::{run, Command, ExperimentConfig, Format};
use tomas_stein::Error;

/// Batch runner for the Tomas-Stein experiments.
#[derive(Parser, Debug)]
#[command(name = "ts-lab", version)]
struct Args {
    /// tensor-build, extend, density, sup-bound, functional, el-residual,
    /// solve, picard, split, smoothing, constant or regularity-profile
    command: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    cutoff: Option<f64>,
    /// Density order for density and sup-bound.
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, default_value_t = 0.1)]
    eta: f64,
    #[arg(long, default_value_t = 0.5)]
    s: f64,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tensor: Option<PathBuf>,
    /// Input function as JSON.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    verify: bool,
    #[arg(long, default_value = "json")]
    format: String,
}

fn config(a: Args) -> Result<ExperimentConfig, Error> {
    let mut c = ExperimentConfig::new(a.command.parse::<Command>()?);
    c.n = a.n;
    c.cutoff = a.cutoff;
    c.k = a.k;
    c.eps = a.eps;
    c.eta = a.eta;
    c.s = a.s;
    c.alpha = a.alpha;
    c.seed = a.seed;
    c.tensor = a.tensor;
    c.input = a.input;
    c.out = a.out;
    c.verify = a.verify;
    c.format = a.format.parse()?;
    Ok(c)
}

fn main() -> ExitCode {
    env_logger::init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = config(args).and_then(|c| {
        let out = run(&c)?;
        let text = out.envelope.to_string_pretty();
        // tensor-build in json mode has already written the binary cache
        let writes_file = !(c.command == Command::TensorBuild && c.format == Format::Json);
        match (&c.out, c.format) {
            (Some(p), Format::Csv) => std::fs::write(p, out.csv.unwrap_or_default())?,
            (Some(p), Format::Json) if writes_file => std::fs::write(p, &text)?,
            _ => {}
        }
        // a closed pipe downstream is not an error of the run
        let _ = writeln!(std::io::stdout(), "{text}");
        Ok(out.envelope.verified())
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("oracle cross-check failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
