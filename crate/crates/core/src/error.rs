use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("free-group map needs an inverse witness")]
    MissingWitness,
    #[error("operation not supported for backend {0}")]
    UnsupportedBackend(String),
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("maps do not chain: {0}")]
    Mismatch(String),
    #[error("element does not belong to {0}")]
    WrongParent(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("arrows not composable: {0}")]
    NotComposable(String),
    #[error("invalid data: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
