use thiserror::Error;

/// Errors raised by the numerical routines and the experiment runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid of {grid} points is too small for bandwidth {bandwidth} (need at least {needed})")]
    GridTooSmall {
        grid: usize,
        bandwidth: usize,
        needed: usize,
    },
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("inadmissible index tuple {0:?}: n1+n2+n3 must equal n4+n5+n6")]
    Inadmissible([i32; 6]),
    #[error("integrand does not decay fast enough for a convergent tail: {0}")]
    Divergent(String),
    #[error("extension field carries no tail data; the L6 norm needs it")]
    TailRequired,
    #[error("bandwidth overflow: {0}")]
    Bandwidth(String),
    #[error("tensor mismatch: {0}")]
    TensorMismatch(String),
    #[error("zero input function")]
    ZeroInput,
    #[error("ratio undefined: {0}")]
    UndefinedRatio(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("iteration diverged: {0}")]
    Diverged(String),
    #[error("solver did not converge: {0}")]
    NotConverged(String),
    #[error("checksum mismatch: stored {stored:#018x}, computed {computed:#018x}")]
    Checksum { stored: u64, computed: u64 },
    #[error("corrupt cache: {0}")]
    Corrupt(String),
    #[error("storage error: {0}")]
    Storage(#[from] std::io::Error),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Schema(_) | Error::Json(_) => 2,
            Error::Diverged(_)
            | Error::NotConverged(_)
            | Error::Checksum { .. }
            | Error::Corrupt(_)
            | Error::Divergent(_)
            | Error::Storage(_) => 3,
            _ => 4,
        }
    }
}
