use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Numeric(#[from] sympolar::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed record: {0}")]
    Parse(String),
}

impl BenchError {
    /// Process exit status: 2 for configuration errors, 3 for I/O, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) => 2,
            BenchError::Numeric(sympolar::Error::UnknownRetraction(_)) => 2,
            BenchError::Io(_) | BenchError::Csv(_) | BenchError::Json(_) => 3,
            BenchError::Numeric(_) | BenchError::Parse(_) => 1,
        }
    }
}

pub type BenchResult<T> = std::result::Result<T, BenchError>;
