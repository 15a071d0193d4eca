use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension is undefined for an empty space")]
    EmptyDimension,

    #[error("invalid stratification: {0}")]
    InvalidStratification(String),

    #[error("stratifications live on different hosts")]
    HostMismatch,

    /// A peeling round selected no element, so the algorithm cannot make progress.
    #[error("no element qualifies for the stratum of dimension {dim}")]
    NoProgress { dim: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
