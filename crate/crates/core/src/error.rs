use thiserror::Error;

/// Errors raised by the arithmetic, expansion and evaluation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("negative radicand {0}")]
    NegativeRadicand(i64),
    #[error("matrix determinant must be +1 or -1, got {0}")]
    BadDeterminant(String),
    #[error("pole: denominator of the fractional-linear action vanishes")]
    Pole,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("alpha must lie in [1/2, 1], got {0}")]
    AlphaOutOfRange(String),
    #[error("orbit hit zero")]
    OrbitTerminated,
    #[error("requested depth {requested} but only {available} digits are available")]
    Depth { requested: usize, available: usize },
    #[error("expansion is not periodic within the digit budget")]
    NotPeriodic,
    #[error("consistency failure: {0}")]
    Consistency(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("evaluation is not certified: {0}")]
    Uncertified(String),
    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
