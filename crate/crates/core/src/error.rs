//! Shared error type for the whole toolkit.

use thiserror::Error;

/// Errors surfaced by objectives, constraints, solvers and oracles.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("structural violation: {0}")]
    StructuralViolation(String),
    #[error("point outside the objective domain")]
    OutOfDomain,
    #[error("matrix is numerically singular (|det| <= 1e-300)")]
    SingularMatrix,
    #[error("objective is not differentiable")]
    NonDifferentiable,
    #[error("coordinate index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("sign vector entry must be +1 or -1")]
    BadSignVector,
    #[error("shrunken-LMO cap has a negative entry")]
    NegativeCap,
    #[error("malformed LP input: {0}")]
    MalformedInput(String),
    #[error("Lipschitz constant required for the lipschitz step rule")]
    MissingLipschitz,
    #[error("objective is not monotone")]
    NotMonotone,
    #[error("objective is not DR-submodular")]
    NotDr,
    #[error("unsupported constraint: {0}")]
    BadConstraint(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("empty interval: lo > hi")]
    EmptyInterval,
    #[error("ground set too large for exhaustive enumeration (n = {n}, limit {limit})")]
    TooLarge { n: usize, limit: usize },
    #[error("explicit table model too large for the requested operation")]
    TooLargeForTable,
    #[error("grid oracle limited to n <= 4 (got n = {0})")]
    TooHighDimensional(usize),
    #[error("element {0} is already in the set")]
    ElementInSet(usize),
    #[error("set contains an element outside the ground set")]
    BadSet,
    #[error("solve report carries no non-stationarity gap")]
    MissingGap,
    #[error("graph parse error: {0}")]
    GraphParseError(String),
    #[error("negative edge weight in graph input")]
    NegativeWeight,
    #[error("shrunken iterate exceeded its growth cap")]
    GrowthCapExceeded,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
