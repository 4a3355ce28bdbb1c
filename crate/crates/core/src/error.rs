use thiserror::Error;

#[derive(Debug, Error)]
pub enum QtfaError {
    /// Malformed or out-of-range user input.
    #[error("input error: {0}")]
    Input(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    /// A signal or field does not decay enough on its truncated domain.
    #[error("truncation: {0}")]
    Truncation(String),
    #[error("signal is not unit-normalized (norm² = {0})")]
    NonUnitSignal(f64),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl QtfaError {
    /// Process exit code for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            QtfaError::Truncation(_) | QtfaError::Numerical(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, QtfaError>;
