use lf_core::LfError;
use shear_refocus::RefocusError;
use spectrum::SpectrumError;

#[derive(Debug, thiserror::Error)]
pub enum ReconstructError {
    #[error("config: {0}")]
    Config(String),
    #[error("backend: {0}")]
    Backend(String),
    #[error("numerical: {0}")]
    Numerical(String),
    #[error(transparent)]
    Lf(#[from] LfError),
    #[error(transparent)]
    Refocus(#[from] RefocusError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

pub type Result<T> = std::result::Result<T, ReconstructError>;
