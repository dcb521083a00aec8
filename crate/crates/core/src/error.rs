use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("message is not in the codebook (support rank {rank} >= {limit})")]
    OutOfCodebook { rank: u128, limit: u128 },
    #[error("decode failure: {0}")]
    DecodeFailure(String),
    #[error("malformed matrix file: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
