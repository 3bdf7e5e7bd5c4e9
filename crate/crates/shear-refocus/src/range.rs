use lf_core::SceneGeometry;

use crate::error::{RefocusError, Result};

/// Disparity bounds from depth bounds via d = kB/Z:
/// d_max = kB/Z_min, d_min = kB/Z_max.
pub fn refocus_range_from_depth(geom: &SceneGeometry, k: f64, b: f64) -> Result<(f64, f64)> {
    let kb = k * b;
    if !(kb > 0.0 && kb.is_finite()) {
        return Err(RefocusError::Domain(format!("kB must be positive, got {kb}")));
    }
    if !(geom.z_min > 0.0) {
        return Err(RefocusError::Domain(format!("Z_min must be positive, got {}", geom.z_min)));
    }
    if !(geom.z_max >= geom.z_min) {
        return Err(RefocusError::Domain(format!(
            "Z_max {} below Z_min {}",
            geom.z_max, geom.z_min
        )));
    }
    Ok((kb / geom.z_max, kb / geom.z_min))
}
