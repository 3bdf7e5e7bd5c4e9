//! Spectra of EPIs and focal stacks: FFTs on labelled grids, the two EFS
//! routes, symmetry and energy measures, and view-line detection.

pub mod energy;
pub mod error;
pub mod grid;
pub mod io;
pub mod lines;
pub mod route;
pub mod symmetry;

pub use energy::{energy_outside, spectral_energy_loss, EnergyLoss};
pub use error::{Result, SpectrumError};
pub use grid::{fft1_axis, fft2, ifft2, ifft2_complex, AxisKind, ComplexGrid, Variable};
pub use lines::{
    angular_histogram, cone_exterior_fraction, detect_view_lines, predicted_angle_deg,
    AngularHistogram, DetectedLine, LineCensus, LineOptions,
};
pub use route::{
    efs_from_hybrid, efs_of_stack, efs_slice_route, efs_slice_route_with, efs_spatial_route,
    hybrid_from_efs, SliceInterp, SliceOptions, SliceRoute,
};
pub use symmetry::{conjugate_symmetry_deviation, symmetrize};
