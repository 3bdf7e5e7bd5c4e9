use lf_core::LightField;
use ndarray::{s, Array3, Array4};
use shear_refocus::ReconstructionConfig;

use crate::complete::CompletionBackend;
use crate::error::{ReconstructError, Result};
use crate::pipeline::{reconstruct_lightfield, ReconstructOptions, Reconstruction};

const FLOOR: f64 = 1e-6;

/// Hat-function weights over sorted reference positions, clamped to the
/// outermost reference beyond the ends, plus a small floor.
pub fn reference_weights(refs: &[f64], p: f64) -> Vec<f64> {
    let n = refs.len();
    let mut w = vec![FLOOR; n];
    if p <= refs[0] {
        w[0] += 1.0;
    } else if p >= refs[n - 1] {
        w[n - 1] += 1.0;
    } else {
        let i = refs.windows(2).position(|r| p >= r[0] && p <= r[1]).expect("p inside the span");
        let t = (p - refs[i]) / (refs[i + 1] - refs[i]);
        w[i] += 1.0 - t;
        w[i + 1] += t;
    }
    w
}

/// Runs the pipeline once per reference view and blends the results per
/// output view, masking out references that are invalid at a pixel.
pub fn multi_reference_reconstruct(
    lf: &LightField,
    cfg: &ReconstructionConfig,
    refs: &[usize],
    backend: &CompletionBackend,
    opts: ReconstructOptions,
) -> Result<Reconstruction> {
    let mut refs = refs.to_vec();
    refs.sort_unstable();
    refs.dedup();
    if refs.is_empty() {
        return Err(ReconstructError::Config("no reference views".into()));
    }
    if let Some(bad) = refs.iter().find(|r| **r >= lf.n_u()) {
        return Err(ReconstructError::Config(format!("reference {bad} outside {} views", lf.n_u())));
    }
    let parts: Vec<Reconstruction> = refs
        .iter()
        .map(|&r| reconstruct_lightfield(lf, &cfg.with_u_ref(r), backend, opts))
        .collect::<Result<_>>()?;
    if parts.len() == 1 {
        return Ok(parts.into_iter().next().expect("one part"));
    }
    let target = parts[0].target;
    let (n_v, nt, h, w) = parts[0].field.data().dim();
    let pos: Vec<f64> = refs.iter().map(|r| *r as f64).collect();
    let mut data = Array4::<f64>::zeros((n_v, nt, h, w));
    let mut valid = Array3::from_elem((n_v, h, w), false);
    for v in 0..n_v {
        for y in 0..h {
            for x in 0..w {
                valid[[v, y, x]] = parts.iter().any(|p| p.valid[[v, y, x]]);
            }
        }
    }
    for j in 0..nt {
        let weights = reference_weights(&pos, target.position(j));
        let plain: f64 = weights.iter().sum();
        for v in 0..n_v {
            for y in 0..h {
                for x in 0..w {
                    let (mut num, mut den, mut fallback) = (0.0, 0.0, 0.0);
                    for (p, wt) in parts.iter().zip(&weights) {
                        let val = p.field.data()[[v, j, y, x]];
                        fallback += wt * val;
                        if p.valid[[v, y, x]] {
                            num += wt * val;
                            den += wt;
                        }
                    }
                    data[[v, j, y, x]] = if den > 0.0 { num / den } else { fallback / plain };
                }
            }
        }
    }
    if opts.passthrough {
        for j in 0..nt {
            if let Some(u) = target.source_at(j) {
                for v in 0..n_v {
                    data.slice_mut(s![v, j, .., ..]).assign(&lf.view(u, v));
                }
            }
        }
    }
    let mut field = LightField::new(data.mapv(|p| p.clamp(0.0, 1.0)), parts[0].field.baseline_step, lf.focal_length)?;
    field.meta = lf.meta.clone();
    Ok(Reconstruction {
        field,
        valid,
        target,
        imag_residue: parts.iter().map(|p| p.imag_residue).fold(0.0, f64::max),
        efs_symmetry: parts.iter().map(|p| p.efs_symmetry).fold(0.0, f64::max),
    })
}
