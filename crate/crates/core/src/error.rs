use thiserror::Error;

/// Errors produced by sample ingestion, distribution evaluation and fitting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("need at least two usable observations with two distinct values, got {usable} usable value(s)")]
    EmptyInput { usable: usize },

    #[error("observation #{index} is {value}, but all observations must be strictly positive")]
    NonPositiveValue { index: usize, value: f64 },

    #[error("{0}")]
    Io(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("moment of order {order} is infinite for alpha = {alpha} (requires alpha > {})", order + 1)]
    MomentUndefined { order: u32, alpha: f64 },

    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("solver did not converge within {iterations} iterations")]
    MaxIterExceeded { iterations: usize },

    #[error("no observations above x_min = {x_min}")]
    NoTailData { x_min: f64 },

    #[error("stationarity condition has no solution with alpha > 1")]
    NoSolutionInRange,

    #[error("no admissible value of beta: {0}")]
    NoValidBeta(String),

    #[error("the log-likelihood of this family needs the raw observations, not only split statistics")]
    RawDataRequired,

    #[error("no valid fit: {0}")]
    NoValidFit(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
}

pub type Result<T> = std::result::Result<T, Error>;
