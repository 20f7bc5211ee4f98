use std::path::PathBuf;

use thiserror::Error;

/// Failures of the statistical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("empty sample")]
    EmptySample,
    #[error("insufficient sample: need at least {need} values, got {got}")]
    InsufficientSample { need: usize, got: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate sample")]
    DegenerateSample,
    #[error("zero pooled spread")]
    ZeroPooledSpread,
    #[error("insufficient degrees of freedom")]
    InsufficientDof,
    #[error("degenerate groups")]
    DegenerateGroups,
}

/// Problems with a scenario configuration, surfaced before slot 0.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value {value:?} for `{key}`")]
    BadValue { line: usize, key: String, value: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Runtime failures inside the interface module or the defense pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DefenseError {
    #[error("insufficient history: lag {lag} needs {needed} retained slots, have {have}")]
    InsufficientHistory { lag: usize, needed: usize, have: usize },
    #[error("invalid slot range [{from}, {to})")]
    InvalidRange { from: u64, to: u64 },
    #[error("baseline not normal, use approximate detectors (K-S p = {p_value:.4})")]
    BaselineNotNormal { p_value: f64 },
    #[error("post-filter service rate insufficient: mu {mu} <= lagged long-window rate {lambda}")]
    ServiceRateInsufficient { mu: f64, lambda: f64 },
    #[error("restoration failed: no unfiltered sources left and occupancy {occupancy} > L1 {l1}")]
    RestorationFailed { occupancy: u64, l1: u64 },
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Top-level error for the harness and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Defense(#[from] DefenseError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("batch seeds must differ")]
    DuplicateSeeds,
    #[error("batch needs at least 2 runs, got {0}")]
    TooFewRuns(usize),
}

impl Error {
    /// Process exit code: 1 for configuration problems, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::DuplicateSeeds | Error::TooFewRuns(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
