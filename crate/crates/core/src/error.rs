use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph: {0}")]
    Structure(String),
    #[error("invalid curve graph: {0}")]
    Invalid(String),
    #[error("graph is not parity-normalized: {0}")]
    NotNormalized(String),
    #[error("invalid vertex order: {0}")]
    Order(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
