//! Light field container, EPI extraction, view downsampling, a layered
//! Lambertian scene generator, and the on-disk directory format.

pub mod epi;
pub mod error;
pub mod fft;
pub mod generator;
pub mod io;
pub mod lightfield;
pub mod par;
pub mod scene;

pub use epi::{extract_epi, extract_vertical_epi, Epi, EpiSource};
pub use error::{LfError, Result};
pub use generator::{synth_lightfield, synth_lightfield_4d, GeneratedField};
pub use io::{load_lightfield, save_lightfield, BitDepth};
pub use lightfield::{downsample_views, downsample_views_along, AngularAxis, LightField};
pub use par::Exec;
pub use scene::{Layer, LayerDisparity, LayerMask, SceneGeometry, TextureParams};
