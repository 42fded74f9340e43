use alloc::string::String;

use thiserror::Error;

use crate::metric::PointRef;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("non-finite floating point value")]
    NonFinite,
    #[error("cannot parse number `{0}`")]
    Parse(String),
    #[error("empty sum")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("point {0} does not belong to the space")]
    UnknownPoint(PointRef),
    #[error("points must be pairwise distinct")]
    CoincidentPoints,
    #[error("an enumeration window is required for a computable space")]
    MissingWindow,
    #[error("window {window} exceeds the exact-arithmetic capacity {max}")]
    CapacityExceeded { window: usize, max: usize },
    #[error("point index {index} exceeds the evaluation capacity {max}")]
    IndexCapacity { index: usize, max: usize },
    #[error("at least {needed} points are required, found {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("alpha must lie in [0, 1), got {0}")]
    AlphaOutOfRange(String),
    #[error("alpha = 0 leaves delta = eps / (4 alpha) undefined and the map does not collapse the window")]
    ZeroAlpha,
    #[error("{name} must be positive, got {value}")]
    NotPositive { name: &'static str, value: String },
    #[error("iteration index must be at least 1")]
    ZeroIndex,
    #[error("indices must be strictly increasing: {0} < {1} < {2} fails")]
    IndicesNotIncreasing(usize, usize, usize),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
}
