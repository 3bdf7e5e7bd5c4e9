use std::sync::Arc;

use lf_core::{AngularAxis, LightField};
use ndarray::{s, Array3, Array4, Axis};
use shear_refocus::ReconstructionConfig;

use crate::complete::CompletionBackend;
use crate::error::{ReconstructError, Result};
use crate::geometry::TargetGeometry;
use crate::pipeline::{reconstruct_lightfield, ReconstructOptions, Reconstruction};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PassOrder {
    #[default]
    HorizontalFirst,
    VerticalFirst,
}

/// Target indices that coincide with every source view.
fn source_rows(target: TargetGeometry) -> Result<Vec<usize>> {
    let mut idx = vec![None; target.n_source];
    for j in 0..target.n_target {
        if let Some(u) = target.source_at(j) {
            idx[u] = Some(j);
        }
    }
    idx.into_iter()
        .enumerate()
        .map(|(u, j)| {
            j.ok_or_else(|| {
                ReconstructError::Config(format!(
                    "source view {u} does not land on a target view ({} -> {})",
                    target.n_source, target.n_target
                ))
            })
        })
        .collect()
}

/// Backend for one pass. Oracle fields are cut down to the rows the pass
/// sees; external grids live in `pass1/` and `pass2/` subdirectories.
fn pass_backend(backend: &CompletionBackend, oracle_rows: Option<&[usize]>, transpose: bool, pass: u8) -> Result<CompletionBackend> {
    Ok(match backend {
        CompletionBackend::Oracle(dense) => {
            let mut f = if transpose { dense.transposed() } else { (**dense).clone() };
            if let Some(rows) = oracle_rows {
                f = f.select(AngularAxis::V, rows)?;
            }
            CompletionBackend::Oracle(Arc::new(f))
        }
        CompletionBackend::Classical(p) => CompletionBackend::Classical(*p),
        CompletionBackend::External(dir) => CompletionBackend::External(dir.join(format!("pass{pass}"))),
    })
}

fn and_over(valid: &Array3<bool>) -> ndarray::Array2<bool> {
    let (_, h, w) = valid.dim();
    ndarray::Array2::from_shape_fn((h, w), |(y, x)| valid.slice(s![.., y, x]).iter().all(|b| *b))
}

fn check_grid(lf: &LightField) -> Result<()> {
    if lf.n_v() < 2 {
        return Err(ReconstructError::Config(
            "full parallax needs at least 2 view rows; use the single-row pipeline for N_v = 1".into(),
        ));
    }
    Ok(())
}

fn horizontal_then_vertical(
    lf: &LightField,
    cfg_h: &ReconstructionConfig,
    cfg_v: &ReconstructionConfig,
    backend: &CompletionBackend,
    opts: ReconstructOptions,
) -> Result<Reconstruction> {
    check_grid(lf)?;
    let tv = TargetGeometry::from_config(cfg_v, lf.n_v())?;
    let rows = source_rows(tv)?;
    let first = reconstruct_lightfield(lf, cfg_h, &pass_backend(backend, Some(&rows), false, 1)?, opts)?;
    // Rows finished by the first pass are kept; the second pass only fills
    // the view rows between them.
    let second = reconstruct_lightfield(
        &first.field.transposed(),
        cfg_v,
        &pass_backend(backend, None, true, 2)?,
        ReconstructOptions {
            passthrough: true,
            ..opts
        },
    )?;
    let field = second.field.transposed();
    let valid_h = and_over(&first.valid);
    let valid_v = and_over(&second.valid).reversed_axes();
    let mask = &valid_h & &valid_v;
    let valid = Array3::from_shape_fn((field.n_v(), field.height(), field.width()), |(_, y, x)| mask[[y, x]]);
    Ok(Reconstruction {
        field,
        valid,
        target: first.target,
        imag_residue: first.imag_residue.max(second.imag_residue),
        efs_symmetry: first.efs_symmetry.max(second.efs_symmetry),
    })
}

fn transpose_valid(r: Reconstruction) -> Reconstruction {
    let field = r.field.transposed();
    let mask = and_over(&r.valid).reversed_axes();
    let valid = Array3::from_shape_fn((field.n_v(), field.height(), field.width()), |(_, y, x)| mask[[y, x]]);
    Reconstruction { field, valid, ..r }
}

/// Densifies a (v, u) grid: one pass along each angular axis, the second
/// running on EPIs of the first pass's output. An oracle backend must hold
/// the dense 4D field.
pub fn full_parallax_reconstruct(
    lf: &LightField,
    cfg_h: &ReconstructionConfig,
    cfg_v: &ReconstructionConfig,
    backend: &CompletionBackend,
    order: PassOrder,
    opts: ReconstructOptions,
) -> Result<Reconstruction> {
    check_grid(lf)?;
    match order {
        PassOrder::HorizontalFirst => horizontal_then_vertical(lf, cfg_h, cfg_v, backend, opts),
        PassOrder::VerticalFirst => {
            let backend = match backend {
                CompletionBackend::Oracle(d) => CompletionBackend::Oracle(Arc::new(d.transposed())),
                b => b.clone(),
            };
            let r = horizontal_then_vertical(&lf.transposed(), cfg_v, cfg_h, &backend, opts)?;
            Ok(transpose_valid(r))
        }
    }
}

/// Horizontal pass on every source view row, then each missing view row
/// copied from the nearest reconstructed row.
pub fn vertical_copy_baseline(
    lf: &LightField,
    cfg_h: &ReconstructionConfig,
    n_target_v: usize,
    backend: &CompletionBackend,
    opts: ReconstructOptions,
) -> Result<Reconstruction> {
    check_grid(lf)?;
    let tv = TargetGeometry::new(lf.n_v(), n_target_v)?;
    let rows = source_rows(tv)?;
    let first = reconstruct_lightfield(lf, cfg_h, &pass_backend(backend, Some(&rows), false, 1)?, opts)?;
    let (_, nu, h, w) = first.field.data().dim();
    let mut data = Array4::<f64>::zeros((n_target_v, nu, h, w));
    for j in 0..n_target_v {
        let v = tv.nearest_source(j);
        data.index_axis_mut(Axis(0), j).assign(&first.field.data().index_axis(Axis(0), v));
    }
    let mut field = LightField::new(data, first.field.baseline_step, first.field.focal_length)?;
    field.meta = lf.meta.clone();
    let mask = and_over(&first.valid);
    let valid = Array3::from_shape_fn((n_target_v, h, w), |(_, y, x)| mask[[y, x]]);
    Ok(Reconstruction { field, valid, ..first })
}
