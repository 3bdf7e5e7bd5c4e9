use ndarray::Array2;
use serde::{Deserialize, Serialize};
use shear_refocus::ReconstructionConfig;

use crate::error::{ReconstructError, Result};

/// Output views placed uniformly over the source span, in source-view units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetGeometry {
    pub n_source: usize,
    pub n_target: usize,
}

impl TargetGeometry {
    pub fn new(n_source: usize, n_target: usize) -> Result<Self> {
        if n_source < 2 || n_target < n_source {
            return Err(ReconstructError::Config(format!(
                "need 2 ≤ n_source ≤ n_target, got {n_source} and {n_target}"
            )));
        }
        Ok(TargetGeometry { n_source, n_target })
    }

    pub fn from_config(cfg: &ReconstructionConfig, n_source: usize) -> Result<Self> {
        Self::new(n_source, cfg.n_target)
    }

    /// Target spacing in source-view steps.
    pub fn spacing(&self) -> f64 {
        (self.n_source - 1) as f64 / (self.n_target - 1) as f64
    }

    pub fn position(&self, j: usize) -> f64 {
        if j + 1 == self.n_target {
            (self.n_source - 1) as f64
        } else {
            j as f64 * self.spacing()
        }
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n_target).map(|j| self.position(j)).collect()
    }

    /// Index of the source view at target `j`, if the two coincide.
    pub fn source_at(&self, j: usize) -> Option<usize> {
        let p = self.position(j);
        let r = p.round();
        ((p - r).abs() < 1e-9).then_some(r as usize)
    }

    /// Nearest source view to target `j`.
    pub fn nearest_source(&self, j: usize) -> usize {
        (self.position(j).round() as usize).min(self.n_source - 1)
    }
}

/// Bins of the dense EPI spectrum (ω_u centred over n_target rows, ω_x
/// centred over width columns) that the focal range can supply.
#[derive(Clone, Debug, PartialEq)]
pub struct WedgeMask {
    pub d_min: f64,
    pub d_max: f64,
    pub target: TargetGeometry,
    pub mask: Array2<bool>,
}

const EDGE: f64 = 1e-12;

impl WedgeMask {
    pub fn new(d_min: f64, d_max: f64, target: TargetGeometry, width: usize) -> Self {
        let nt = target.n_target;
        let delta = target.spacing();
        let raw = Array2::from_shape_fn((nt, width), |(a, b)| {
            let ku = a as f64 - (nt / 2) as f64;
            let kx = b as f64 - (width / 2) as f64;
            if kx == 0.0 {
                return ku == 0.0;
            }
            let f = focus_of(ku / nt as f64, kx / width as f64, delta);
            f >= d_min - EDGE && f <= d_max + EDGE
        });
        // Nyquist bins are their own mirror; keep them only if both sign
        // readings fall in the range, so the mask stays conjugate-symmetric.
        let mirror = |i: usize, n: usize| (2 * (n / 2) + n - i) % n;
        let mask = Array2::from_shape_fn((nt, width), |(a, b)| raw[[a, b]] && raw[[mirror(a, nt), mirror(b, width)]]);
        WedgeMask {
            d_min,
            d_max,
            target,
            mask,
        }
    }

    pub fn from_config(cfg: &ReconstructionConfig, n_source: usize, width: usize) -> Result<Self> {
        Ok(Self::new(cfg.d_min, cfg.d_max, TargetGeometry::from_config(cfg, n_source)?, width))
    }

    pub fn contains(&self, ku_index: usize, kx_index: usize) -> bool {
        self.mask[[ku_index, kx_index]]
    }
}

/// Focus parameter (disparity per source step) whose slice passes through
/// ν cycles per target step and ω_x cycles per pixel.
pub(crate) fn focus_of(nu: f64, wx: f64, delta: f64) -> f64 {
    -nu / (delta * wx)
}
