use std::collections::BTreeMap;

use ndarray::{s, Array2, Array4, ArrayView2, Axis};

use crate::error::{LfError, Result};

/// Grayscale views on a regular (v, u) grid, stored as `(n_v, n_u, height, width)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LightField {
    data: Array4<f64>,
    pub baseline_step: f64,
    pub focal_length: f64,
    pub meta: BTreeMap<String, String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngularAxis {
    U,
    V,
}

impl LightField {
    pub fn new(data: Array4<f64>, baseline_step: f64, focal_length: f64) -> Result<Self> {
        let (n_v, n_u, h, w) = data.dim();
        if n_u < 2 {
            return Err(LfError::Invalid(format!("need at least 2 views along u, got {n_u}")));
        }
        if n_v < 1 || h == 0 || w == 0 {
            return Err(LfError::Invalid(format!("empty field {n_v}x{n_u}x{h}x{w}")));
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite() || **v < 0.0 || **v > 1.0) {
            return Err(LfError::Invalid(format!("intensity {bad} outside [0,1]")));
        }
        if !(baseline_step.is_finite() && focal_length.is_finite()) {
            return Err(LfError::Invalid("non-finite baseline or focal length".into()));
        }
        Ok(LightField {
            data,
            baseline_step,
            focal_length,
            meta: BTreeMap::new(),
        })
    }

    /// Builds a field from views listed in (v, u) order.
    pub fn from_views(
        n_v: usize,
        n_u: usize,
        views: &[Array2<f64>],
        baseline_step: f64,
        focal_length: f64,
    ) -> Result<Self> {
        if views.len() != n_v * n_u || views.is_empty() {
            return Err(LfError::Invalid(format!(
                "expected {} views, got {}",
                n_v * n_u,
                views.len()
            )));
        }
        let (h, w) = views[0].dim();
        let mut data = Array4::zeros((n_v, n_u, h, w));
        for (i, view) in views.iter().enumerate() {
            if view.dim() != (h, w) {
                return Err(LfError::Invalid(format!(
                    "view {i} is {:?}, expected {:?}",
                    view.dim(),
                    (h, w)
                )));
            }
            data.slice_mut(s![i / n_u, i % n_u, .., ..]).assign(view);
        }
        Self::new(data, baseline_step, focal_length)
    }

    pub fn n_u(&self) -> usize {
        self.data.dim().1
    }

    pub fn n_v(&self) -> usize {
        self.data.dim().0
    }

    pub fn height(&self) -> usize {
        self.data.dim().2
    }

    pub fn width(&self) -> usize {
        self.data.dim().3
    }

    pub fn view(&self, u: usize, v: usize) -> ArrayView2<'_, f64> {
        self.data.slice(s![v, u, .., ..])
    }

    pub fn data(&self) -> &Array4<f64> {
        &self.data
    }

    pub fn into_data(self) -> Array4<f64> {
        self.data
    }

    /// Swaps the roles of (u, x) and (v, y), so vertical-parallax passes can
    /// reuse the horizontal machinery.
    pub fn transposed(&self) -> LightField {
        let data = self.data.clone().permuted_axes([1, 0, 3, 2]);
        LightField {
            data: data.as_standard_layout().to_owned(),
            baseline_step: self.baseline_step,
            focal_length: self.focal_length,
            meta: self.meta.clone(),
        }
    }

    /// Keeps the listed views along `axis`, in the given order.
    pub fn select(&self, axis: AngularAxis, indices: &[usize]) -> Result<LightField> {
        let ax = match axis {
            AngularAxis::U => Axis(1),
            AngularAxis::V => Axis(0),
        };
        let n = self.data.len_of(ax);
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(LfError::Index(format!("view {bad} of {n}")));
        }
        let data = self.data.select(ax, indices);
        let mut lf = LightField::new(data, self.baseline_step, self.focal_length)?;
        lf.meta = self.meta.clone();
        Ok(lf)
    }
}

/// Keeps every `factor`-th view along u, starting at 0.
pub fn downsample_views(lf: &LightField, factor: usize, keep_last: bool) -> Result<LightField> {
    downsample_views_along(lf, factor, keep_last, AngularAxis::U)
}

pub fn downsample_views_along(
    lf: &LightField,
    factor: usize,
    keep_last: bool,
    axis: AngularAxis,
) -> Result<LightField> {
    if factor == 0 {
        return Err(LfError::Invalid("downsampling factor must be at least 1".into()));
    }
    let n = match axis {
        AngularAxis::U => lf.n_u(),
        AngularAxis::V => lf.n_v(),
    };
    let mut keep: Vec<usize> = (0..n).step_by(factor).collect();
    if keep_last && keep.last() != Some(&(n - 1)) {
        keep.push(n - 1);
    }
    if keep.len() < 2 {
        return Err(LfError::Invalid(format!(
            "factor {factor} leaves {} of {n} views",
            keep.len()
        )));
    }
    let mut out = lf.select(axis, &keep)?;
    out.baseline_step = lf.baseline_step * factor as f64;
    Ok(out)
}
