use lf_core::{extract_epi, Epi, EpiSource, Exec, LightField};
use ndarray::{s, Array2, Array3, Array4};
use shear_refocus::{build_focal_stack, ReconstructionConfig};
use spectrum::{conjugate_symmetry_deviation, efs_spatial_route, ifft2_complex, ComplexGrid};

use crate::complete::{CompletionBackend, Completer, RowId};
use crate::error::{ReconstructError, Result};
use crate::geometry::{TargetGeometry, WedgeMask};
use crate::project::{back_project, ifft_along_f};

/// One reconstructed EPI with `n_target` rows.
#[derive(Clone, Debug)]
pub struct DenseEpi {
    pub epi: Epi,
    /// Columns fed by every source view at every layer.
    pub valid_columns: Vec<bool>,
    /// Largest |imaginary| over largest |real| of the inverse transform.
    pub imag_residue: f64,
    /// Mean conjugate-symmetry deviation of the completed EFS over its
    /// largest magnitude.
    pub efs_symmetry: f64,
}

/// Completion plus the fixed wedge for one configuration and EPI shape.
pub struct Reconstructor {
    completer: Completer,
    wedge: WedgeMask,
    cfg: ReconstructionConfig,
}

impl Reconstructor {
    pub fn new(backend: CompletionBackend, cfg: &ReconstructionConfig, n_source: usize, width: usize) -> Result<Self> {
        let completer = Completer::new(backend, cfg, n_source, width)?;
        let wedge = WedgeMask::new(cfg.d_min, cfg.d_max, completer.target(), width);
        Ok(Reconstructor {
            completer,
            wedge,
            cfg: cfg.clone(),
        })
    }

    pub fn target(&self) -> TargetGeometry {
        self.completer.target()
    }

    pub fn wedge(&self) -> &WedgeMask {
        &self.wedge
    }

    pub fn completer(&self) -> &Completer {
        &self.completer
    }

    /// Aliased EFS of a source EPI.
    pub fn aliased_efs(&self, epi: &Epi) -> Result<(ComplexGrid, Vec<bool>)> {
        let fs = build_focal_stack(epi, &self.cfg)?;
        Ok((efs_spatial_route(&fs)?, fs.fully_valid_columns()))
    }

    pub fn reconstruct(&self, epi: &Epi) -> Result<DenseEpi> {
        if epi.n_views() != self.target().n_source {
            return Err(ReconstructError::Config(format!(
                "EPI has {} views, reconstructor expects {}",
                epi.n_views(),
                self.target().n_source
            )));
        }
        let row = match epi.source {
            EpiSource::Row { y, v } => RowId { y, v },
            _ => RowId::default(),
        };
        let (aliased, valid_columns) = self.aliased_efs(epi)?;
        let completed = self.completer.complete(&aliased, row)?;
        let peak = completed.max_magnitude();
        let efs_symmetry = if peak > 0.0 {
            conjugate_symmetry_deviation(&completed) / peak
        } else {
            0.0
        };
        let hybrid = ifft_along_f(&completed)?;
        let spec = back_project(&hybrid, &self.cfg.f_values(), &self.wedge, self.cfg.u_ref as f64)?;
        let out = ifft2_complex(&spec)?;
        let re_max = out.iter().fold(0.0f64, |m, v| m.max(v.re.abs()));
        let im_max = out.iter().fold(0.0f64, |m, v| m.max(v.im.abs()));
        let imag_residue = if re_max > 0.0 { im_max / re_max } else { im_max };
        let data = out.mapv(|v| v.re);
        let target = self.target();
        let u_ref = ((self.cfg.u_ref as f64 / target.spacing()).round() as usize).min(target.n_target - 1);
        let mut dense = Epi::new(data, u_ref)?;
        dense.source = epi.source;
        Ok(DenseEpi {
            epi: dense,
            valid_columns,
            imag_residue,
            efs_symmetry,
        })
    }
}

/// Single-EPI pipeline: focal stack, aliased EFS, completion, inverse along
/// f, wedge back-projection and inverse 2D transform.
pub fn reconstruct_dense_epi(epi: &Epi, cfg: &ReconstructionConfig, backend: &CompletionBackend) -> Result<DenseEpi> {
    Reconstructor::new(backend.clone(), cfg, epi.n_views(), epi.width())?.reconstruct(epi)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReconstructOptions {
    pub exec: Exec,
    /// Copy source views over the target views that coincide with them.
    pub passthrough: bool,
}

/// A dense field with per-pixel validity shared by all views of a row.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub field: LightField,
    /// Indexed (v, y, x).
    pub valid: Array3<bool>,
    pub target: TargetGeometry,
    pub imag_residue: f64,
    pub efs_symmetry: f64,
}

impl Reconstruction {
    /// Validity of one output view.
    pub fn valid_view(&self, v: usize) -> Array2<bool> {
        self.valid.index_axis(ndarray::Axis(0), v).to_owned()
    }
}

/// Runs the EPI pipeline on every image row of every view row. Output
/// intensities are clipped to [0, 1].
pub fn reconstruct_lightfield(
    lf: &LightField,
    cfg: &ReconstructionConfig,
    backend: &CompletionBackend,
    opts: ReconstructOptions,
) -> Result<Reconstruction> {
    let rec = Reconstructor::new(backend.clone(), cfg, lf.n_u(), lf.width())?;
    let (n_v, h, w) = (lf.n_v(), lf.height(), lf.width());
    let rows = opts.exec.try_map(n_v * h, |i| {
        let epi = extract_epi(lf, i % h, i / h, cfg.u_ref)?;
        rec.reconstruct(&epi)
    })?;
    let target = rec.target();
    let nt = target.n_target;
    let mut data = Array4::<f64>::zeros((n_v, nt, h, w));
    let mut valid = Array3::from_elem((n_v, h, w), false);
    let (mut imag_residue, mut efs_symmetry) = (0.0f64, 0.0f64);
    for (i, r) in rows.iter().enumerate() {
        let (v, y) = (i / h, i % h);
        data.slice_mut(s![v, .., y, ..]).assign(&r.epi.data.mapv(|p| p.clamp(0.0, 1.0)));
        for (x, ok) in r.valid_columns.iter().enumerate() {
            valid[[v, y, x]] = *ok;
        }
        imag_residue = imag_residue.max(r.imag_residue);
        efs_symmetry = efs_symmetry.max(r.efs_symmetry);
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
    let mut field = LightField::new(data, lf.baseline_step * target.spacing(), lf.focal_length)?;
    field.meta = lf.meta.clone();
    Ok(Reconstruction {
        field,
        valid,
        target,
        imag_residue,
        efs_symmetry,
    })
}

/// Each target view copied from the nearest source view.
pub fn nearest_copy(lf: &LightField, target: TargetGeometry) -> Result<LightField> {
    if target.n_source != lf.n_u() {
        return Err(ReconstructError::Config(format!(
            "target expects {} source views, field has {}",
            target.n_source,
            lf.n_u()
        )));
    }
    let idx: Vec<usize> = (0..target.n_target).map(|j| target.nearest_source(j)).collect();
    let mut out = lf.select(lf_core::AngularAxis::U, &idx)?;
    out.baseline_step = lf.baseline_step * target.spacing();
    Ok(out)
}
