use thiserror::Error;

/// Errors produced by the mask algebra and the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not a dilation: eigenvalue modulus {modulus:.6} is not > 1")]
    NotExpanding { modulus: f64 },

    #[error("invalid digit set: {0}")]
    UserDigitsInvalid(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polynomial has non-integer frequencies (denominator {0})")]
    NonIntegerFrequencies(u64),

    #[error("expected {expected} polyphase components, got {found}")]
    WrongCount { expected: usize, found: usize },

    #[error("polynomial is not divisible by (1 - z_{axis})")]
    NotDivisible { axis: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("mask does not satisfy the zero condition of order 0")]
    NotInZ0,

    #[error("mask is not in the class Z^{required} (detected order {found})")]
    NotInClass { required: i64, found: i64 },

    #[error("zero-condition checkers disagree: definition gives {direct}, polyphase criterion gives {polyphase}")]
    MethodDisagreement { direct: i64, polyphase: i64 },

    #[error("decomposition identity violated: {0}")]
    InternalIdentityViolation(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("value is not rational")]
    NotRational,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
