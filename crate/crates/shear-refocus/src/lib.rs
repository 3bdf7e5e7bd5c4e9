//! Spatial half of EFS construction: shearing EPIs, integrating them into
//! focal stacks, and deriving refocus ranges from scene depth.

pub mod config;
pub mod error;
pub mod io;
pub mod kernel;
pub mod range;
pub mod shear;
pub mod stack;

pub use config::ReconstructionConfig;
pub use error::{RefocusError, Result};
pub use kernel::{Boundary, Kernel, ShearOptions, ShiftPlan};
pub use range::refocus_range_from_depth;
pub use shear::{shear_epi, shear_epi_with, ShearedEpi};
pub use stack::{build_focal_stack, build_focal_stack_with, focal_stack_at, FocalStack};
