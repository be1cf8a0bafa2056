use thiserror::Error;

/// Errors raised by the algebraic and analytic routines.
///
/// Index tuples carried by the violation variants are 1-based, matching the
/// JSON schemas and the command line.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("structure constants are not antisymmetric at (i, j, k) = ({0}, {1}, {2})")]
    AntisymmetryViolation(usize, usize, usize),
    #[error("Jacobi identity fails at (i, j, k, l) = ({0}, {1}, {2}, {3})")]
    JacobiViolation(usize, usize, usize, usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands live over different Lie algebras")]
    AlgebraMismatch,
    #[error("unknown algebra {0:?}")]
    UnknownAlgebra(String),
    #[error("jet of order {available} cannot supply derivatives of order {needed}")]
    JetOrderExhausted { needed: usize, available: usize },
    #[error("a jet can only be evaluated at its base point")]
    JetNotEvaluable,
    #[error("incompatible group data: {0}")]
    GroupDataMismatch(String),
    #[error("representation basis cannot be normalized: {0}")]
    NonNormalizableBasis(String),
    #[error("second factor must be constant in fiber direction")]
    FiberConstantRequired,
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("word enumeration exceeds the budget of {0} distinct states")]
    WordBudgetExceeded(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("json error: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
