use lf_core::Epi;
use ndarray::{Array2, ArrayView2};

use crate::config::ReconstructionConfig;
use crate::error::{RefocusError, Result};
use crate::kernel::{ShearOptions, ShiftPlan};

/// Refocused stack F(f, x): one row per layer, ascending in f.
#[derive(Clone, Debug, PartialEq)]
pub struct FocalStack {
    pub data: Array2<f64>,
    pub f_values: Vec<f64>,
    pub u_ref: usize,
    /// Fraction of views that contributed an in-bounds sample.
    pub validity: Array2<f64>,
}

impl FocalStack {
    pub fn n_f(&self) -> usize {
        self.data.nrows()
    }

    pub fn width(&self) -> usize {
        self.data.ncols()
    }

    pub fn d_min(&self) -> f64 {
        self.f_values[0]
    }

    pub fn d_max(&self) -> f64 {
        *self.f_values.last().expect("non-empty stack")
    }

    pub fn delta_alpha(&self) -> f64 {
        (self.d_max() - self.d_min()) / (self.n_f() - 1) as f64
    }

    /// Columns where every view contributed at every layer.
    pub fn fully_valid_columns(&self) -> Vec<bool> {
        (0..self.width())
            .map(|x| self.validity.column(x).iter().all(|v| *v >= 1.0 - 1e-12))
            .collect()
    }
}

pub fn build_focal_stack(epi: &Epi, cfg: &ReconstructionConfig) -> Result<FocalStack> {
    build_focal_stack_with(epi, cfg, cfg.shear)
}

pub fn build_focal_stack_with(
    epi: &Epi,
    cfg: &ReconstructionConfig,
    opts: ShearOptions,
) -> Result<FocalStack> {
    cfg.check()?;
    if cfg.u_ref >= epi.n_views() {
        return Err(RefocusError::Config(format!(
            "u_ref {} outside {} views",
            cfg.u_ref,
            epi.n_views()
        )));
    }
    let positions: Vec<f64> = (0..epi.n_views()).map(|u| u as f64).collect();
    focal_stack_at(
        epi.data.view(),
        &positions,
        cfg.u_ref,
        cfg.u_ref as f64,
        &cfg.f_values(),
        opts,
    )
}

/// Focal stack of views placed at arbitrary angular `positions` (in view
/// steps), sheared about `ref_pos`. `u_ref` is only recorded.
pub fn focal_stack_at(
    views: ArrayView2<'_, f64>,
    positions: &[f64],
    u_ref: usize,
    ref_pos: f64,
    f_values: &[f64],
    opts: ShearOptions,
) -> Result<FocalStack> {
    let (n, w) = views.dim();
    if positions.len() != n {
        return Err(RefocusError::Config(format!(
            "{} positions for {n} views",
            positions.len()
        )));
    }
    if f_values.len() < 2 {
        return Err(RefocusError::Config("need at least two layers".into()));
    }
    let rows: Vec<Vec<f64>> = views.rows().into_iter().map(|r| r.to_vec()).collect();
    let mut data = Array2::<f64>::zeros((f_values.len(), w));
    let mut validity = Array2::<f64>::zeros((f_values.len(), w));
    let mut acc = vec![0.0; w];
    let mut cnt = vec![0.0; w];
    for (m, &f) in f_values.iter().enumerate() {
        acc.iter_mut().for_each(|v| *v = 0.0);
        cnt.iter_mut().for_each(|v| *v = 0.0);
        for (row, &p) in rows.iter().zip(positions) {
            ShiftPlan::new(f * (p - ref_pos), opts.kernel).accumulate(row, opts.boundary, &mut acc, &mut cnt);
        }
        if cnt.iter().all(|c| *c == 0.0) {
            return Err(RefocusError::Degenerate(format!(
                "layer f = {f} has no valid samples"
            )));
        }
        for x in 0..w {
            if cnt[x] > 0.0 {
                data[[m, x]] = acc[x] / cnt[x];
            }
            validity[[m, x]] = cnt[x] / n as f64;
        }
    }
    Ok(FocalStack {
        data,
        f_values: f_values.to_vec(),
        u_ref,
        validity,
    })
}
