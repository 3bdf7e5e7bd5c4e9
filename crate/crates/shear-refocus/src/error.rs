use lf_core::LfError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RefocusError {
    #[error("non-finite disparity {0}")]
    NonFinite(f64),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("format error in {path}: {msg}")]
    Format { path: String, msg: String },
    #[error(transparent)]
    Lf(#[from] LfError),
}

pub type Result<T> = std::result::Result<T, RefocusError>;
