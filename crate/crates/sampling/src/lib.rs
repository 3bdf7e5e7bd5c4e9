//! Closed-form sampling analysis of focal stacks: apex angles, defocus
//! blur, per-view line slopes and focal-layer bounds.

use lf_core::SceneGeometry;
use serde::{Deserialize, Serialize};
use spectrum::{cone_exterior_fraction, ComplexGrid};

#[derive(Debug, thiserror::Error)]
pub enum SamplingError {
    #[error("domain: {0}")]
    Domain(String),
    #[error(transparent)]
    Spectrum(#[from] spectrum::SpectrumError),
}

pub type Result<T> = std::result::Result<T, SamplingError>;

fn need_views(n_u: usize) -> Result<()> {
    if n_u < 2 {
        return Err(SamplingError::Domain(format!("need at least 2 views, got {n_u}")));
    }
    Ok(())
}

/// Opening angle of the cone holding every view line: 2·atan(½(n_u−1)),
/// or 2·atan(½·Δα·(n_u−1)) when the layer spacing is given.
pub fn apex_angle(n_u: usize, delta_alpha: Option<f64>) -> Result<f64> {
    need_views(n_u)?;
    let scale = delta_alpha.unwrap_or(1.0);
    Ok(2.0 * (0.5 * scale * (n_u - 1) as f64).atan())
}

/// Blur diameter in pixels of a point refocused `alpha` away from its
/// disparity.
pub fn defocus_diameter(alpha: f64, n_u: usize) -> f64 {
    (alpha * (n_u as f64 - 1.0)).abs()
}

/// Refocusing `alpha` off focus leaves gaps between view samples.
pub fn is_aliased(alpha: f64) -> bool {
    alpha.abs() > 1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Slope {
    Finite(f64),
    /// The reference view's own line.
    Vertical,
}

/// Slope of view `u_i`'s line in the focal stack: 1/(u_i − u_ref), or
/// 1/(Δα(u_i − u_ref)) with a layer spacing.
pub fn aliasing_line_slope(u_i: f64, u_ref: f64, delta_alpha: Option<f64>) -> Slope {
    let s = u_i - u_ref;
    if s == 0.0 {
        return Slope::Vertical;
    }
    Slope::Finite(1.0 / (delta_alpha.unwrap_or(1.0) * s))
}

/// Largest layer spacing that keeps the stack free of aliasing.
pub fn max_delta_alpha(n_u: usize) -> Result<f64> {
    need_views(n_u)?;
    Ok(2.0 / (n_u - 1) as f64)
}

/// Layer count (d_max − d_min)/Δα for a given spacing.
pub fn layers_for_spacing(d_min: f64, d_max: f64, delta_alpha: f64) -> Result<f64> {
    if !(delta_alpha > 0.0) || !(d_max >= d_min) {
        return Err(SamplingError::Domain(format!(
            "need Δα > 0 and d_max ≥ d_min, got Δα = {delta_alpha}, [{d_min}, {d_max}]"
        )));
    }
    Ok((d_max - d_min) / delta_alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerBound {
    /// Real-valued bound before rounding.
    pub bound: f64,
    /// Rounded up; a zero-depth-range scene reports 1.
    pub n_f_min: usize,
}

/// Minimum focal-layer count S·kB(Z_max−Z_min)(n_u−1)/(2·Z_max·Z_min),
/// rounded up. `s` is the scene distribution factor (≥ 1).
pub fn min_focal_layers(z_min: f64, z_max: f64, kb: f64, n_u: usize, s: f64) -> Result<LayerBound> {
    need_views(n_u)?;
    if !(z_min > 0.0) || !(z_max >= z_min) || !z_max.is_finite() {
        return Err(SamplingError::Domain(format!(
            "need 0 < z_min ≤ z_max < ∞, got [{z_min}, {z_max}]"
        )));
    }
    if !(kb > 0.0) || !(s >= 1.0) {
        return Err(SamplingError::Domain(format!("need kB > 0 and S ≥ 1, got {kb}, {s}")));
    }
    let bound = s * kb * (z_max - z_min) * (n_u - 1) as f64 / (2.0 * z_max * z_min);
    Ok(LayerBound {
        bound,
        n_f_min: (bound.ceil() as usize).max(1),
    })
}

/// [`min_focal_layers`] with depth range and kB taken from a scene.
pub fn min_focal_layers_for(geom: &SceneGeometry, n_u: usize, s: f64) -> Result<LayerBound> {
    min_focal_layers(geom.z_min, geom.z_max, geom.kb(), n_u, s)
}

/// Layer count that keeps a disparity range at the unaliased spacing:
/// (d_max − d_min)(n_u − 1)/2.
pub fn layer_bound_for_range(d_min: f64, d_max: f64, n_u: usize) -> Result<f64> {
    layers_for_spacing(d_min, d_max, max_delta_alpha(n_u)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingReport {
    pub n_u: usize,
    pub u_ref: f64,
    pub apex_angle_continuous: f64,
    pub apex_angle_discrete: f64,
    pub delta_alpha: f64,
    /// Blur diameter of a point at the far end of the refocus range.
    pub defocus_diameter: f64,
    pub view_slopes: Vec<Slope>,
    pub delta_alpha_max: f64,
    /// (d_max − d_min)/Δα for the configured spacing.
    pub n_f: f64,
    pub n_f_min: LayerBound,
    pub cone_energy_fraction: Option<f64>,
}

pub struct ReportInput<'a> {
    pub geom: &'a SceneGeometry,
    pub n_u: usize,
    pub u_ref: f64,
    pub delta_alpha: f64,
    pub s: f64,
    /// When given, the share of its energy inside the unaliased cone is
    /// reported.
    pub efs: Option<&'a ComplexGrid>,
}

pub fn sampling_report(input: &ReportInput) -> Result<SamplingReport> {
    let ReportInput { geom, n_u, u_ref, delta_alpha, s, efs } = *input;
    let d_min = geom.kb() / geom.z_max;
    let d_max = geom.kb() / geom.z_min;
    let half = apex_angle(n_u, Some(max_delta_alpha(n_u)?))? / 2.0;
    let cone_energy_fraction = match efs {
        Some(g) => Some(1.0 - cone_exterior_fraction(g, half)?),
        None => None,
    };
    Ok(SamplingReport {
        n_u,
        u_ref,
        apex_angle_continuous: apex_angle(n_u, None)?,
        apex_angle_discrete: apex_angle(n_u, Some(delta_alpha))?,
        delta_alpha,
        defocus_diameter: defocus_diameter(d_max - d_min, n_u),
        view_slopes: (0..n_u)
            .map(|u| aliasing_line_slope(u as f64, u_ref, Some(delta_alpha)))
            .collect(),
        delta_alpha_max: max_delta_alpha(n_u)?,
        n_f: layers_for_spacing(d_min, d_max, delta_alpha)?,
        n_f_min: min_focal_layers_for(geom, n_u, s)?,
        cone_energy_fraction,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub z_min: f64,
    pub z_max: f64,
    pub bound: f64,
    pub n_f_min: usize,
}

/// Bound against Z_max for each Z_min, with Z_max stepping by `z_step`
/// from Z_min to `z_far`.
pub fn layer_bound_sweep(
    z_mins: &[f64],
    z_far: f64,
    z_step: f64,
    kb: f64,
    n_u: usize,
    s: f64,
) -> Result<Vec<SweepRow>> {
    if !(z_step > 0.0) {
        return Err(SamplingError::Domain(format!("z_step must be positive, got {z_step}")));
    }
    let mut rows = Vec::new();
    for &z_min in z_mins {
        let n = ((z_far - z_min) / z_step + 1e-9).floor().max(0.0) as usize;
        for i in 0..=n {
            let z_max = z_min + i as f64 * z_step;
            let b = min_focal_layers(z_min, z_max, kb, n_u, s)?;
            rows.push(SweepRow {
                z_min,
                z_max,
                bound: b.bound,
                n_f_min: b.n_f_min,
            });
        }
    }
    Ok(rows)
}
