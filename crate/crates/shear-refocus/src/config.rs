use serde::{Deserialize, Serialize};

use crate::error::{RefocusError, Result};
use crate::kernel::ShearOptions;

/// Refocus and reconstruction parameters. Disparities are in pixels per
/// source view step; `delta_alpha` is the layer spacing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionConfig {
    pub d_min: f64,
    pub d_max: f64,
    pub n_f: usize,
    pub delta_alpha: f64,
    pub u_ref: usize,
    pub n_target: usize,
    #[serde(default)]
    pub shear: ShearOptions,
}

impl ReconstructionConfig {
    pub fn new(d_min: f64, d_max: f64, n_f: usize, u_ref: usize, n_target: usize) -> Result<Self> {
        if n_f < 2 {
            return Err(RefocusError::Config(format!("n_f must be at least 2, got {n_f}")));
        }
        let cfg = ReconstructionConfig {
            d_min,
            d_max,
            n_f,
            delta_alpha: (d_max - d_min) / (n_f - 1) as f64,
            u_ref,
            n_target,
            shear: ShearOptions::default(),
        };
        cfg.check()?;
        Ok(cfg)
    }

    pub fn with_shear(mut self, shear: ShearOptions) -> Self {
        self.shear = shear;
        self
    }

    /// Internal consistency, independent of any particular light field.
    pub fn check(&self) -> Result<()> {
        if !(self.d_min.is_finite() && self.d_max.is_finite() && self.d_min < self.d_max) {
            return Err(RefocusError::Config(format!(
                "need finite d_min < d_max, got [{}, {}]",
                self.d_min, self.d_max
            )));
        }
        if self.n_f < 2 {
            return Err(RefocusError::Config(format!("n_f must be at least 2, got {}", self.n_f)));
        }
        let expected = (self.d_max - self.d_min) / (self.n_f - 1) as f64;
        if (self.delta_alpha - expected).abs() > 1e-9 * expected.abs().max(1.0) {
            return Err(RefocusError::Config(format!(
                "delta_alpha {} does not match (d_max - d_min)/(n_f - 1) = {expected}",
                self.delta_alpha
            )));
        }
        Ok(())
    }

    /// Checks the configuration against a source EPI with `n_source` views.
    pub fn validate(&self, n_source: usize) -> Result<()> {
        self.check()?;
        if self.u_ref >= n_source {
            return Err(RefocusError::Config(format!(
                "u_ref {} outside {n_source} views",
                self.u_ref
            )));
        }
        if self.n_target < n_source {
            return Err(RefocusError::Config(format!(
                "n_target {} below source view count {n_source}",
                self.n_target
            )));
        }
        Ok(())
    }

    pub fn f_values(&self) -> Vec<f64> {
        (0..self.n_f)
            .map(|m| {
                if m + 1 == self.n_f {
                    self.d_max
                } else {
                    self.d_min + m as f64 * self.delta_alpha
                }
            })
            .collect()
    }

    /// Same layer count, range scaled by `factor` about its midpoint.
    pub fn scaled_range(&self, factor: f64) -> Result<Self> {
        let mid = 0.5 * (self.d_min + self.d_max);
        let half = 0.5 * (self.d_max - self.d_min) * factor;
        let mut cfg = Self::new(mid - half, mid + half, self.n_f, self.u_ref, self.n_target)?;
        cfg.shear = self.shear;
        Ok(cfg)
    }

    pub fn with_n_f(&self, n_f: usize) -> Result<Self> {
        let mut cfg = Self::new(self.d_min, self.d_max, n_f, self.u_ref, self.n_target)?;
        cfg.shear = self.shear;
        Ok(cfg)
    }

    pub fn with_u_ref(&self, u_ref: usize) -> Self {
        let mut cfg = self.clone();
        cfg.u_ref = u_ref;
        cfg
    }
}
