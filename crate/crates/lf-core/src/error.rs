use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LfError {
    #[error("index out of range: {0}")]
    Index(String),
    #[error("invalid light field: {0}")]
    Invalid(String),
    #[error("invalid scene: {0}")]
    Scene(String),
    #[error("degenerate scene: {0}")]
    Degenerate(String),
    #[error("format error in {}: {msg}", file.display())]
    Format { file: PathBuf, msg: String },
    #[error("dimension mismatch in {}: expected {expected}, found {found}", file.display())]
    Dimension {
        file: PathBuf,
        expected: String,
        found: String,
    },
}

pub type Result<T> = std::result::Result<T, LfError>;

impl LfError {
    pub(crate) fn format(file: impl Into<PathBuf>, msg: impl ToString) -> Self {
        LfError::Format {
            file: file.into(),
            msg: msg.to_string(),
        }
    }
}
