use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("ill-defined homomorphism: {0}")]
    IllDefined(String),
    #[error("not a chain complex: {0}")]
    NotAComplex(String),
    #[error("truncation exceeded: level {needed} is beyond truncation {trunc}")]
    TruncationExceeded { needed: usize, trunc: usize },
    #[error("invalid injection: {0}")]
    InvalidWord(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("filtration precondition failed: {0}")]
    Filtration(String),
    #[error("incompatible tower: {0}")]
    IncompatibleTower(String),
    #[error("missing coefficient data: {0}")]
    MissingData(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("resource guard: {0}")]
    ResourceGuard(String),
}
