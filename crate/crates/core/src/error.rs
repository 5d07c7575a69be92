use thiserror::Error;

/// Errors produced by the simulator, the solvers and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("degenerate transition matrix")]
    DegenerateTransitions,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("budget {budget} is below the minimum {min} required by {phase}")]
    Budget {
        phase: &'static str,
        budget: u64,
        min: u64,
    },

    #[error("intervention {intervention} is out of range for n = {n}")]
    InterventionOutOfRange { intervention: String, n: usize },

    #[error("objective evaluated to NaN")]
    NaN,

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("unknown algorithm `{0}`")]
    UnknownAlgo(String),

    #[error("run {run} failed: {source}")]
    RunFailed { run: usize, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
