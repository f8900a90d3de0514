use thiserror::Error;

/// Errors raised when an operation's precondition is violated.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet or truncation mismatch: {0}")]
    Mismatch(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("expected counit value {expected}, found {found}")]
    Counit { expected: String, found: String },
    #[error("not homogeneous of degree {0}")]
    NotHomogeneous(usize),
    #[error("not a Lie element")]
    NotLie,
    #[error("not primitive: {0}")]
    NotPrimitive(String),
    #[error("expansion is not group-like")]
    NotGroupLike,
    #[error("singular degree-one part")]
    Singular,
    #[error("automorphism does not act trivially on the abelianization")]
    NotIaut,
    #[error("derivation has a degree-0 part")]
    DegreeZeroPart,
    #[error("automorphism is not the identity modulo the ideal cut at degree {0}")]
    NotInAutR(usize),
    #[error("derivation does not vanish on omega")]
    NotSymplectic,
    #[error("invalid free-group automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("filtration degree {found} is below the requested degree {requested}")]
    FiltrationTooLow { found: usize, requested: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("noncommutative quotient: determinant requires the ideal cut m = 2")]
    Noncommutative,
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("invalid pair partition: {0}")]
    InvalidPartition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
