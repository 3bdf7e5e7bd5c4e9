use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use spectrum::{hybrid_from_efs, symmetrize, AxisKind, ComplexGrid, Variable};

use crate::error::{ReconstructError, Result};
use crate::geometry::{focus_of, WedgeMask};

/// 𝓕(f, ω_x) from an EFS: inverse transform along ω_f only.
pub fn ifft_along_f(efs: &ComplexGrid) -> Result<ComplexGrid> {
    Ok(hybrid_from_efs(efs)?)
}

/// Spectrum of the dense EPI (ω_u over target rows, ω_x), filled from the
/// hybrid 𝓕(f, ω_x) on the wedge and zero elsewhere. `f_values` must be
/// the evenly spaced layers of the hybrid rows; `u_ref` is in source steps.
pub fn back_project(hybrid: &ComplexGrid, f_values: &[f64], wedge: &WedgeMask, u_ref: f64) -> Result<ComplexGrid> {
    if hybrid.axes != [AxisKind::Domain(Variable::F), AxisKind::Frequency(Variable::X)] {
        return Err(ReconstructError::Config(format!("expected a hybrid grid, got {:?}", hybrid.axes)));
    }
    let (nf, w) = hybrid.data.dim();
    if nf != f_values.len() || nf < 2 {
        return Err(ReconstructError::Config(format!("{} layers for {nf} hybrid rows", f_values.len())));
    }
    if wedge.mask.ncols() != w {
        return Err(ReconstructError::Config(format!(
            "wedge width {} for hybrid width {w}",
            wedge.mask.ncols()
        )));
    }
    let nt = wedge.target.n_target;
    let delta = wedge.target.spacing();
    let (d_min, d_max) = (f_values[0], f_values[nf - 1]);
    let step = (d_max - d_min) / (nf - 1) as f64;
    let h = &hybrid.data;
    let mut out = Array2::<Complex64>::zeros((nt, w));
    for b in 0..w {
        let kx = b as isize - (w / 2) as isize;
        if kx == 0 {
            let mean = h.column(b).iter().sum::<Complex64>() / nf as f64;
            out[[nt / 2, b]] = mean * nt as f64;
            continue;
        }
        let wx = kx as f64 / w as f64;
        for a in 0..nt {
            if !wedge.mask[[a, b]] {
                continue;
            }
            let nu = (a as f64 - (nt / 2) as f64) / nt as f64;
            let f = focus_of(nu, wx, delta).clamp(d_min, d_max);
            let pos = (f - d_min) / step;
            let m0 = (pos.floor() as usize).min(nf - 2);
            let t = pos - m0 as f64;
            let v = h[[m0, b]] * (1.0 - t) + h[[m0 + 1, b]] * t;
            out[[a, b]] = v * Complex64::from_polar(nt as f64, 2.0 * PI * wx * f * u_ref);
        }
    }
    let grid = ComplexGrid::new(out, [AxisKind::Frequency(Variable::U), AxisKind::Frequency(Variable::X)])?;
    Ok(symmetrize(&grid))
}
