use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    #[error("position {0} is a left-to-right minimum, p_k is undefined")]
    LeftToRightMinimum(usize),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid rates: {0}")]
    InvalidRates(String),
    #[error("matrix over F_{p} is singular")]
    SingularMatrix { p: u32 },
    #[error("zero denominator in factor {factor} for state {state}")]
    ZeroDenominator { state: String, factor: usize },
    #[error("rates are not compatible with composition {0}")]
    NotCompatible(String),
    #[error("expected a one-dimensional eigenspace, found dimension {0}")]
    EigenspaceDimension(usize),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
