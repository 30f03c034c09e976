use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error(
        "unsupported order {0}: supported orders are 1-16, 18, 20, 21, 24, 27 and every squarefree n <= 255"
    )]
    UnsupportedOrder(u64),

    #[error("{0} is not squarefree")]
    NotSquarefree(u64),

    #[error("resource bound exceeded: {what} (limit {limit}, progress {progress})")]
    Resource {
        what: String,
        limit: u64,
        progress: u64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
