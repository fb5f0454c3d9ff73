use thiserror::Error;

use crate::graph::Side;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex index {index} out of range for side {side} of size {len}")]
    IndexOutOfRange { side: Side, index: usize, len: usize },

    #[error("layout does not match graph: {0}")]
    LayoutMismatch(String),

    #[error("search budget of {budget} nodes exceeded (bounds so far: {lower}..={upper})")]
    BudgetExceeded {
        budget: u64,
        lower: usize,
        upper: usize,
    },

    #[error("algorithm invariant violated: {0}")]
    AlgorithmInvariantViolation(String),

    #[error("not an induced cycle: {0}")]
    NotInducedCycle(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown graph name `{0}`")]
    UnknownName(String),

    #[error("generator failed verification after {0} attempts")]
    RetryExhausted(usize),

    #[error("graph is not convex")]
    NotConvex,

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invariant(msg: impl Into<String>) -> Error {
    Error::AlgorithmInvariantViolation(msg.into())
}
