//! Dense EPI and light-field reconstruction: complete the aliased EFS,
//! invert it along f, back-project onto the wedge and invert in 2D.

pub mod complete;
pub mod error;
pub mod geometry;
pub mod multi;
pub mod parallax;
pub mod pipeline;
pub mod project;

pub use complete::{
    complete_efs, crossfade, dense_efs, external_grid_stem, ClassicalParams, Completer, CompletionBackend, RowId,
};
pub use error::{ReconstructError, Result};
pub use geometry::{TargetGeometry, WedgeMask};
pub use lf_core::Exec;
pub use multi::{multi_reference_reconstruct, reference_weights};
pub use parallax::{full_parallax_reconstruct, vertical_copy_baseline, PassOrder};
pub use pipeline::{
    nearest_copy, reconstruct_dense_epi, reconstruct_lightfield, DenseEpi, ReconstructOptions, Reconstruction,
    Reconstructor,
};
pub use project::{back_project, ifft_along_f};
