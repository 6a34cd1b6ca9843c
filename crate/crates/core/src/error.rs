use crate::class::ClassTag;

/// Errors raised by the estimators and application engines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("unsupported game class: {0:?}")]
    UnsupportedClass(ClassTag),

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("no valid root in [0,1] (real roots: {roots:?})")]
    NoValidRoot { roots: Vec<f64> },

    #[error("ambiguous root selection, candidates: {candidates:?}")]
    Ambiguous { candidates: Vec<f64> },

    #[error("cooperation and defection weights vanish at p = {at}")]
    DegenerateWeights { at: f64 },

    #[error("pair ({i}, {j}) is undefined: options must differ")]
    UndefinedPair { i: usize, j: usize },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
