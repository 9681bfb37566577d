use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("square root of a negative number")]
    NegativeInput,
    #[error("scalar lies outside the unit disk")]
    NotInDisk,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not a contraction")]
    NotContraction,
    #[error("matrix is not positive semidefinite")]
    NotPsd,
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("morphism {0} is not an epimorphism")]
    NotEpi(String),
    #[error("morphism {0} is not a monomorphism")]
    NotMono(String),
    #[error("legs do not form a cocone at index {index}")]
    NotCocone { index: u64 },
    #[error("naturality square {index} does not commute")]
    NotNatural { index: u64 },
    #[error("vectors are not an orthonormal system: {0}")]
    NotOrthonormalSystem(String),
    #[error("no limit detected within budget {budget}")]
    NoLimitWithinBudget { budget: u64 },
    #[error("no witness found within budget {budget}")]
    NoWitnessWithinBudget { budget: u64 },
    #[error("sequence is not monotone at index {index}")]
    NotMonotone { index: u64 },
    #[error("sequence is not bounded by the given element at index {index}")]
    NotBounded { index: u64 },
    #[error("incomparable elements encountered")]
    IncomparableEncountered,
    #[error("rational multiples of one collapse (1 + 1 = 1)")]
    DegenerateEmbedding,
    #[error("element {0} is outside the positive cone")]
    ConeViolation(String),
    #[error("input is self-adjoint")]
    SelfAdjointInput,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
