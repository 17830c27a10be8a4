use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("singular operator: minimum eigenvalue {min_eigenvalue:e} is below {threshold:e}")]
    SingularOperator { min_eigenvalue: f64, threshold: f64 },

    #[error("not a frame: frame operator is singular (minimum eigenvalue {min_eigenvalue:e})")]
    NotAFrame { min_eigenvalue: f64 },

    #[error("frame `{frame}` is not Parseval: ||S - I|| = {deviation:e} exceeds {tol:e}")]
    NotParseval { frame: String, deviation: f64, tol: f64 },

    #[error("zero vector: the inequality only concerns nonzero vectors (module norm {norm:e})")]
    ZeroVector { norm: f64 },

    #[error("generation failed: {0}")]
    Environment(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn mismatch(what: impl Into<String>) -> Error {
    Error::ShapeMismatch(what.into())
}
