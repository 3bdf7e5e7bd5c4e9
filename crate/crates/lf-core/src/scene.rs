use serde::{Deserialize, Serialize};

use crate::error::{LfError, Result};

/// Disparity of a layer in pixels per view step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LayerDisparity {
    Constant { d: f64 },
    /// A slanted plane: disparity varies linearly with the layer's own x
    /// coordinate, from `left` at x = 0 to `right` at x = width - 1.
    Linear { left: f64, right: f64 },
}

impl LayerDisparity {
    pub fn max_abs(&self) -> f64 {
        match *self {
            LayerDisparity::Constant { d } => d.abs(),
            LayerDisparity::Linear { left, right } => left.abs().max(right.abs()),
        }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            LayerDisparity::Constant { d } => d.is_finite(),
            LayerDisparity::Linear { left, right } => left.is_finite() && right.is_finite(),
        }
    }
}

/// Opacity of a layer, in the layer's own (unshifted) coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LayerMask {
    Opaque,
    HalfPlane { edge: f64, keep_left: bool },
}

impl LayerMask {
    pub fn covers(&self, xi: f64) -> bool {
        match *self {
            LayerMask::Opaque => true,
            LayerMask::HalfPlane { edge, keep_left } => (xi < edge) == keep_left,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub disparity: LayerDisparity,
    pub texture_seed: u64,
    pub mask: LayerMask,
}

impl Layer {
    pub fn constant(d: f64, texture_seed: u64) -> Self {
        Layer {
            disparity: LayerDisparity::Constant { d },
            texture_seed,
            mask: LayerMask::Opaque,
        }
    }

    /// A fronto-parallel layer at depth `z`, using d = kB/Z.
    pub fn at_depth(z: f64, kb: f64, texture_seed: u64) -> Result<Self> {
        if !(z > 0.0) {
            return Err(LfError::Scene(format!("depth {z} must be positive")));
        }
        Ok(Layer::constant(kb / z, texture_seed))
    }

    pub fn with_mask(mut self, mask: LayerMask) -> Self {
        self.mask = mask;
        self
    }
}

/// Band-limited noise parameters. `cutoff` is in cycles per pixel and is
/// applied separably along x and y.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TextureParams {
    pub cutoff: f64,
    pub mean: f64,
    pub std: f64,
}

impl Default for TextureParams {
    fn default() -> Self {
        TextureParams {
            cutoff: 0.125,
            mean: 0.5,
            std: 0.15,
        }
    }
}

fn default_one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneGeometry {
    pub z_min: f64,
    pub z_max: f64,
    #[serde(default = "default_one")]
    pub focal_length: f64,
    #[serde(default = "default_one")]
    pub baseline_step: f64,
    pub layers: Vec<Layer>,
    #[serde(default = "default_one")]
    pub s_factor: f64,
    #[serde(default)]
    pub texture: TextureParams,
    /// Textures repeat with the image width, so every view is an exact
    /// circular shift of the others.
    #[serde(default)]
    pub wrap_x: bool,
}

impl SceneGeometry {
    /// Geometry whose depth bounds are derived from the layers' disparities
    /// with k = B = 1.
    pub fn from_layers(layers: Vec<Layer>) -> Self {
        let ds: Vec<f64> = layers
            .iter()
            .flat_map(|l| match l.disparity {
                LayerDisparity::Constant { d } => vec![d],
                LayerDisparity::Linear { left, right } => vec![left, right],
            })
            .filter(|d| *d > 0.0)
            .collect();
        let far_depth = 1e9;
        let (z_min, z_max) = if ds.is_empty() {
            (far_depth, far_depth)
        } else {
            let dmax = ds.iter().cloned().fold(f64::MIN, f64::max);
            let dmin = ds.iter().cloned().fold(f64::MAX, f64::min);
            (1.0 / dmax, 1.0 / dmin)
        };
        SceneGeometry {
            z_min,
            z_max,
            focal_length: 1.0,
            baseline_step: 1.0,
            layers,
            s_factor: 1.0,
            texture: TextureParams::default(),
            wrap_x: false,
        }
    }

    pub fn single_layer(d: f64, texture_seed: u64) -> Self {
        Self::from_layers(vec![Layer::constant(d, texture_seed)])
    }

    pub fn kb(&self) -> f64 {
        self.focal_length * self.baseline_step
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z_min > 0.0 && self.z_min <= self.z_max && self.z_max.is_finite()) {
            return Err(LfError::Scene(format!(
                "depth bounds must satisfy 0 < z_min <= z_max, got {} and {}",
                self.z_min, self.z_max
            )));
        }
        if !(self.s_factor >= 1.0) {
            return Err(LfError::Scene(format!("s_factor {} < 1", self.s_factor)));
        }
        let t = &self.texture;
        if !(t.cutoff > 0.0 && t.cutoff <= 0.5 && t.std >= 0.0) {
            return Err(LfError::Scene(format!("bad texture parameters {t:?}")));
        }
        if let Some(l) = self.layers.iter().find(|l| !l.disparity.is_finite()) {
            return Err(LfError::Scene(format!("non-finite disparity in {l:?}")));
        }
        Ok(())
    }
}
