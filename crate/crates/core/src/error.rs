use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in input point at coordinate {0}")]
    NonFinite(usize),

    #[error(
        "invalid precision schedule: gamma = {gamma} must lie in [{lower_bound}, 1) \
         (lower bound sqrt(1 - alpha/(d*beta)) with alpha = {alpha}, beta = {beta}, d = {dim}); \
         epsilon0 = {epsilon0} must be positive"
    )]
    Schedule {
        gamma: f64,
        epsilon0: f64,
        lower_bound: f64,
        alpha: f64,
        beta: f64,
        dim: usize,
    },

    #[error("no known minimizer for this objective; run `pcm oracle --config <file>` and set objective.minimizer_file")]
    MissingMinimizer,

    #[error("minimizer file {path} was computed for dataset hash {found}, expected {expected}")]
    MinimizerMismatch {
        path: PathBuf,
        expected: String,
        found: String,
    },

    #[error("oracle did not converge after {iterations} iterations (optimality measure {measure:e})")]
    OracleDiverged { iterations: usize, measure: f64 },

    #[error("malformed IDX data: {0}")]
    Idx(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
