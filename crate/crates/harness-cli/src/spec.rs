//! JSON experiment descriptions.

use std::path::{Path, PathBuf};

use lf_core::{Layer, SceneGeometry, TextureParams};
use reconstruct::ClassicalParams;
use serde::{Deserialize, Serialize};
use shear_refocus::{Boundary, Kernel, ReconstructionConfig, ShearOptions};

fn one() -> usize {
    1
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSpec {
    pub layers: Vec<Layer>,
    #[serde(default)]
    pub wrap_x: bool,
    #[serde(default)]
    pub texture: Option<TextureParams>,
}

impl SceneSpec {
    pub fn geometry(&self) -> SceneGeometry {
        let mut g = SceneGeometry::from_layers(self.layers.clone());
        g.wrap_x = self.wrap_x;
        if let Some(t) = &self.texture {
            g.texture = t.clone();
        }
        g
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InputSpec {
    /// Dense generated field; it is also the ground truth.
    Generate {
        scene: SceneSpec,
        n_u: usize,
        #[serde(default = "one")]
        n_v: usize,
        height: usize,
        width: usize,
    },
    /// Dense field in the container format.
    Load { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconSpec {
    pub d_min: f64,
    pub d_max: f64,
    pub n_f: usize,
    /// Reference source view; the central one by default.
    #[serde(default)]
    pub u_ref: Option<usize>,
    #[serde(default)]
    pub kernel: Kernel,
    #[serde(default)]
    pub boundary: Boundary,
}

impl ReconSpec {
    /// Configuration for `n_source` views densified to `n_target`.
    pub fn config(&self, n_source: usize, n_target: usize) -> shear_refocus::Result<ReconstructionConfig> {
        let u_ref = self.u_ref.unwrap_or((n_source - 1) / 2);
        Ok(ReconstructionConfig::new(self.d_min, self.d_max, self.n_f, u_ref, n_target)?.with_shear(ShearOptions {
            kernel: self.kernel,
            boundary: self.boundary,
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BackendSpec {
    /// Ground truth drives completion.
    Oracle,
    Classical {
        #[serde(default)]
        params: ClassicalParams,
    },
    External {
        dir: PathBuf,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Refocus range scales about its midpoint.
    #[serde(default)]
    pub range_scales: Vec<f64>,
    #[serde(default)]
    pub n_f: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    pub input: InputSpec,
    /// Keep every `downsample`-th view along each angular axis.
    #[serde(default = "one")]
    pub downsample: usize,
    pub recon: ReconSpec,
    pub backend: BackendSpec,
    /// Source reference views to blend; empty uses `recon.u_ref`.
    #[serde(default)]
    pub refs: Vec<usize>,
    #[serde(default)]
    pub passthrough: bool,
    #[serde(default)]
    pub include_invalid: bool,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    pub output: PathBuf,
    #[serde(default = "yes")]
    pub previews: bool,
    /// Also write the reconstructed field in the container format.
    #[serde(default)]
    pub save_field: bool,
    #[serde(default)]
    pub sequential: bool,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        Self::from_json(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}
