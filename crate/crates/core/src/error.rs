use thiserror::Error;

/// Errors raised by the permanent-bound machinery.
///
/// Indices carried by the variants (`step`, `row`, `col`, `index`) are
/// 1-based, matching [`IndexSet`](crate::IndexSet) and the step numbering of
/// the process.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension {n} exceeds the oracle limit of {max}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("permanent is zero")]
    ZeroPermanent,

    #[error("negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },

    #[error("input is neither non-negative nor a certified Gram matrix (negative entry at ({row}, {col}))")]
    NegativeInput { row: usize, col: usize },

    #[error("zero pivot at step {step}")]
    ZeroPivot { step: usize },

    #[error("majorant condition violated at ({row}, {col})")]
    ConditionViolated { row: usize, col: usize },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("invalid Gram matrix: {0}")]
    InvalidGram(String),
}

pub type Result<T> = std::result::Result<T, Error>;
