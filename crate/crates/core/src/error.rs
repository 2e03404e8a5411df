use thiserror::Error;

/// Errors raised by the laboratory's evaluators, solvers and diagnostics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero measure")]
    ZeroMeasure,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),

    #[error("empty one-sided neighborhood on the {side} side of the support gap")]
    EmptyNeighborhood { side: &'static str },

    #[error("fixed-point iteration did not converge after {iterations} iterations (last step {last_step:e})")]
    NoConvergence { iterations: usize, last_step: f64 },

    #[error("degenerate convexity: k = {0} (Oleinik bound unavailable)")]
    DegenerateConvexity(f64),

    #[error("flux is not convex on [{lo}, {hi}]: f'' reaches {min_second_derivative}")]
    NonConvexFlux {
        lo: f64,
        hi: f64,
        min_second_derivative: f64,
    },

    #[error("no crossing of level {level} at t = {time}")]
    NoCrossing { level: f64, time: f64 },

    #[error("profile is not monotone near the crossing at t = {time} ({crossings} crossings)")]
    NonMonotoneCrossing { time: f64, crossings: usize },

    #[error("non-finite value at t = {time}, x = {x}")]
    NonFinite { time: f64, x: f64 },

    #[error("maximum principle violated at t = {time}: value {value} outside [{lo}, {hi}]")]
    MaximumPrinciple { time: f64, value: f64, lo: f64, hi: f64 },

    #[error("boundary contamination at t = {time}: edge slope {slope:e}")]
    BoundaryContamination { time: f64, slope: f64 },

    #[error("time step {dt:e} violates the stability bound {bound:e}")]
    CflViolation { dt: f64, bound: f64 },

    #[error("background field returned {got} values for a grid of {expected} points")]
    GridMismatch { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("index {index} out of range 2..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Serialization(err.to_string())
    }
}
