use std::f64::consts::PI;

use lf_core::fft::{centred_freq, fft2_inplace, shift_axis};
use lf_core::Epi;
use ndarray::{Array2, Axis};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use shear_refocus::{FocalStack, ReconstructionConfig};

use crate::error::{Result, SpectrumError};
use crate::grid::{fft1_axis, fft2, AxisKind, ComplexGrid, Variable};

/// EFS(ω_f, ω_x) as the 2D transform of the focal stack.
pub fn efs_spatial_route(fs: &FocalStack) -> Result<ComplexGrid> {
    efs_of_stack(&fs.data)
}

pub fn efs_of_stack(stack: &Array2<f64>) -> Result<ComplexGrid> {
    fft2(stack, [Variable::F, Variable::X])
}

/// 𝓕(f, ω_x): the inverse transform of an EFS along ω_f.
pub fn hybrid_from_efs(efs: &ComplexGrid) -> Result<ComplexGrid> {
    if efs.axes != [AxisKind::Frequency(Variable::F), AxisKind::Frequency(Variable::X)] {
        return Err(SpectrumError::Axis(format!("expected an EFS grid, got {:?}", efs.axes)));
    }
    fft1_axis(efs, 0)
}

/// EFS from a hybrid slice.
pub fn efs_from_hybrid(hybrid: &ComplexGrid) -> Result<ComplexGrid> {
    if hybrid.axes != [AxisKind::Domain(Variable::F), AxisKind::Frequency(Variable::X)] {
        return Err(SpectrumError::Axis(format!("expected a hybrid grid, got {:?}", hybrid.axes)));
    }
    fft1_axis(hybrid, 0)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SliceInterp {
    #[default]
    Linear,
    Nearest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SliceOptions {
    pub interp: SliceInterp,
    /// Zero-padding factor along u before the 2D transform.
    pub pad: usize,
}

impl Default for SliceOptions {
    fn default() -> Self {
        SliceOptions {
            interp: SliceInterp::Linear,
            pad: 8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SliceRoute {
    pub hybrid: ComplexGrid,
    pub efs: ComplexGrid,
}

pub fn efs_slice_route(epi: &Epi, cfg: &ReconstructionConfig) -> Result<SliceRoute> {
    efs_slice_route_with(epi, cfg, SliceOptions::default())
}

/// Samples the EPI spectrum along ω_u = −f·ω_x for every layer, then
/// transforms along f.
pub fn efs_slice_route_with(
    epi: &Epi,
    cfg: &ReconstructionConfig,
    opts: SliceOptions,
) -> Result<SliceRoute> {
    cfg.validate(epi.n_views())?;
    if opts.pad == 0 {
        return Err(SpectrumError::Domain("padding factor must be at least 1".into()));
    }
    let (n, w) = epi.data.dim();
    let m = opts.pad * n;
    let mut padded = Array2::<Complex64>::zeros((m, w));
    for ((u, x), v) in epi.data.indexed_iter() {
        padded[[u, x]] = Complex64::new(*v, 0.0);
    }
    fft2_inplace(&mut padded, false);
    let spec = shift_axis(&shift_axis(&padded, Axis(0), true), Axis(1), true);

    let f_values = cfg.f_values();
    let u_ref = cfg.u_ref as f64;
    let centre = (m / 2) as f64;
    let mut hybrid = Array2::<Complex64>::zeros((f_values.len(), w));
    for b in 0..w {
        let wx = centred_freq(b, w);
        for (row, &f) in f_values.iter().enumerate() {
            let pos = -f * wx * m as f64 + centre;
            let val = match opts.interp {
                SliceInterp::Linear => {
                    let i0 = pos.floor();
                    if i0 < 0.0 || i0 as usize + 1 >= m {
                        // The last bin itself is still inside.
                        if pos == (m - 1) as f64 {
                            spec[[m - 1, b]]
                        } else {
                            continue;
                        }
                    } else {
                        let i = i0 as usize;
                        let t = pos - i0;
                        spec[[i, b]] * (1.0 - t) + spec[[i + 1, b]] * t
                    }
                }
                SliceInterp::Nearest => {
                    let i = pos.round();
                    if i < 0.0 || i as usize >= m {
                        continue;
                    }
                    spec[[i as usize, b]]
                }
            };
            let phase = Complex64::from_polar(1.0 / n as f64, -2.0 * PI * wx * f * u_ref);
            hybrid[[row, b]] = val * phase;
        }
    }
    let hybrid = ComplexGrid::new(
        hybrid,
        [AxisKind::Domain(Variable::F), AxisKind::Frequency(Variable::X)],
    )?;
    let efs = efs_from_hybrid(&hybrid)?;
    Ok(SliceRoute { hybrid, efs })
}
