use std::path::PathBuf;

use shear_refocus::RefocusError;

#[derive(Debug, thiserror::Error)]
pub enum SpectrumError {
    #[error("shape: {0}")]
    Shape(String),
    #[error("axis: {0}")]
    Axis(String),
    #[error("domain: {0}")]
    Domain(String),
    #[error("non-finite value in grid")]
    NonFinite,
    #[error("{}: {msg}", path.display())]
    Format { path: PathBuf, msg: String },
    #[error(transparent)]
    Refocus(#[from] RefocusError),
}

impl SpectrumError {
    pub(crate) fn format(path: &std::path::Path, msg: impl std::fmt::Display) -> Self {
        SpectrumError::Format {
            path: path.to_path_buf(),
            msg: msg.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, SpectrumError>;
