//! generate/load → downsample → reconstruct → evaluate → write.

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use lf_core::{
    downsample_views_along, extract_epi, load_lightfield, save_lightfield, synth_lightfield_4d, AngularAxis, BitDepth,
    Exec, LightField,
};
use ndarray::{Array3, Axis};
use reconstruct::{
    full_parallax_reconstruct, multi_reference_reconstruct, reconstruct_lightfield, CompletionBackend, PassOrder,
    ReconstructOptions, Reconstruction, TargetGeometry, WedgeMask,
};
use shear_refocus::ReconstructionConfig;
use spectrum::{energy_outside, fft2, Variable};

use crate::preview::{error_image, save_png, save_validity};
use crate::report::{evaluate, write_sweep_csv, MetricsReport, SweepRow, ViewMetrics};
use crate::spec::{BackendSpec, ExperimentSpec, InputSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Spec,
    Input,
    Downsample,
    Reconstruct,
    Evaluate,
    Write,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Spec => "spec",
            Stage::Input => "input",
            Stage::Downsample => "downsample",
            Stage::Reconstruct => "reconstruct",
            Stage::Evaluate => "evaluate",
            Stage::Write => "write",
        };
        f.write_str(s)
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{stage} stage: {message}")]
pub struct ExperimentError {
    pub stage: Stage,
    pub message: String,
}

trait Tag<T> {
    fn at(self, stage: Stage) -> Result<T, ExperimentError>;
}

impl<T, E: fmt::Display> Tag<T> for std::result::Result<T, E> {
    fn at(self, stage: Stage) -> Result<T, ExperimentError> {
        self.map_err(|e| ExperimentError {
            stage,
            message: e.to_string(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub metrics: MetricsReport,
    pub sweep: Vec<SweepRow>,
    /// Files written, in order.
    pub files: Vec<PathBuf>,
}

/// Dense input, the sparse field handed to the pipeline and the matching
/// ground truth on the target grid.
pub struct Prepared {
    pub sparse: LightField,
    pub truth: LightField,
    pub cfg: ReconstructionConfig,
}

/// Every `factor`-th view along u (and along v for 4D fields), with the
/// dense views that the target grid lands on as ground truth.
pub fn prepare(dense: &LightField, factor: usize, spec: &crate::spec::ReconSpec) -> Result<Prepared, ExperimentError> {
    let mut sparse = downsample_views_along(dense, factor, false, AngularAxis::U).at(Stage::Downsample)?;
    if dense.n_v() > 1 {
        sparse = downsample_views_along(&sparse, factor, false, AngularAxis::V).at(Stage::Downsample)?;
    }
    let nt = (sparse.n_u() - 1) * factor + 1;
    let ntv = (sparse.n_v() - 1) * factor + 1;
    let mut truth = dense.select(AngularAxis::U, &(0..nt).collect::<Vec<_>>()).at(Stage::Downsample)?;
    truth = truth.select(AngularAxis::V, &(0..ntv).collect::<Vec<_>>()).at(Stage::Downsample)?;
    truth.baseline_step = dense.baseline_step;
    let cfg = spec.config(sparse.n_u(), nt).at(Stage::Spec)?;
    cfg.validate(sparse.n_u()).at(Stage::Spec)?;
    Ok(Prepared { sparse, truth, cfg })
}

pub fn backend_for(spec: &BackendSpec, truth: &LightField) -> CompletionBackend {
    match spec {
        BackendSpec::Oracle => CompletionBackend::Oracle(Arc::new(truth.clone())),
        BackendSpec::Classical { params } => CompletionBackend::Classical(*params),
        BackendSpec::External { dir } => CompletionBackend::External(dir.clone()),
    }
}

/// Single-row, multi-reference or full-parallax reconstruction, picked by
/// the field's shape and the reference list.
pub fn run_pipeline(
    sparse: &LightField,
    cfg: &ReconstructionConfig,
    refs: &[usize],
    backend: &CompletionBackend,
    opts: ReconstructOptions,
) -> reconstruct::Result<Reconstruction> {
    if sparse.n_v() > 1 {
        let cfg_v = ReconstructionConfig::new(
            cfg.d_min,
            cfg.d_max,
            cfg.n_f,
            (sparse.n_v() - 1) / 2,
            (sparse.n_v() - 1) * (cfg.n_target - 1) / (sparse.n_u() - 1) + 1,
        )?
        .with_shear(cfg.shear);
        return full_parallax_reconstruct(sparse, cfg, &cfg_v, backend, PassOrder::HorizontalFirst, opts);
    }
    match refs {
        [] => reconstruct_lightfield(sparse, cfg, backend, opts),
        [r] => reconstruct_lightfield(sparse, &cfg.with_u_ref(*r), backend, opts),
        _ => multi_reference_reconstruct(sparse, cfg, refs, backend, opts),
    }
}

/// Mean fraction of ground-truth EPI spectral energy outside the wedge,
/// over every image row of every view row.
pub fn wedge_loss(truth: &LightField, cfg: &ReconstructionConfig, n_source: usize, exec: Exec) -> reconstruct::Result<f64> {
    let wedge = WedgeMask::new(cfg.d_min, cfg.d_max, TargetGeometry::new(n_source, truth.n_u())?, truth.width());
    let (h, n_v) = (truth.height(), truth.n_v());
    let losses = exec.try_map(h * n_v, |i| -> reconstruct::Result<f64> {
        let epi = extract_epi(truth, i % h, i / h, 0)?;
        let spec = fft2(&epi.data, [Variable::U, Variable::X])?;
        Ok(energy_outside(&spec, wedge.mask.view())?.loss)
    })?;
    Ok(losses.iter().sum::<f64>() / losses.len() as f64)
}

fn and_masks(masks: &[&Array3<bool>]) -> Array3<bool> {
    let mut out = masks[0].clone();
    for m in &masks[1..] {
        out.zip_mut_with(m, |a, b| *a = *a && *b);
    }
    out
}

fn mean(views: &[ViewMetrics]) -> (f64, f64) {
    let n = views.len() as f64;
    (
        views.iter().map(|m| m.psnr).sum::<f64>() / n,
        views.iter().map(|m| m.ssim).sum::<f64>() / n,
    )
}

fn sweep_configs(spec: &ExperimentSpec, base: &ReconstructionConfig) -> Result<Vec<(String, ReconstructionConfig)>, ExperimentError> {
    let Some(sw) = &spec.sweep else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for s in &sw.range_scales {
        out.push((format!("range x{s:.2}"), base.scaled_range(*s).at(Stage::Spec)?));
    }
    for n in &sw.n_f {
        out.push((format!("n_f {n}"), base.with_n_f(*n).at(Stage::Spec)?));
    }
    Ok(out)
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput, ExperimentError> {
    if spec.downsample == 0 {
        return Err(ExperimentError {
            stage: Stage::Spec,
            message: "downsample factor must be at least 1".into(),
        });
    }
    let dense = match &spec.input {
        InputSpec::Generate {
            scene,
            n_u,
            n_v,
            height,
            width,
        } => synth_lightfield_4d(&scene.geometry(), *n_u, *n_v, *height, *width, spec.seed).at(Stage::Input)?.field,
        InputSpec::Load { path } => load_lightfield(path).at(Stage::Input)?,
    };
    let Prepared { sparse, truth, cfg } = prepare(&dense, spec.downsample, &spec.recon)?;
    let exec = if spec.sequential { Exec::Sequential } else { Exec::default() };
    let opts = ReconstructOptions {
        exec,
        passthrough: spec.passthrough,
    };
    let backend = backend_for(&spec.backend, &truth);
    let rec = run_pipeline(&sparse, &cfg, &spec.refs, &backend, opts).at(Stage::Reconstruct)?;

    let mask = (!spec.include_invalid).then_some(&rec.valid);
    let per_view = evaluate(&truth, &rec.field, mask).at(Stage::Evaluate)?;
    let loss = wedge_loss(&truth, &cfg, sparse.n_u(), exec).at(Stage::Evaluate)?;
    let metrics = MetricsReport::new(per_view, Some(rec.efs_symmetry), Some(loss));

    let variants = sweep_configs(spec, &cfg)?;
    let mut runs = Vec::new();
    for (label, c) in &variants {
        let r = if *c == cfg {
            rec.clone()
        } else {
            run_pipeline(&sparse, c, &spec.refs, &backend, opts).at(Stage::Reconstruct)?
        };
        runs.push((label.clone(), c.clone(), r));
    }
    // Variants are scored on the pixels every variant reconstructs.
    let common = if spec.include_invalid || runs.is_empty() {
        None
    } else {
        Some(and_masks(&runs.iter().map(|(_, _, r)| &r.valid).collect::<Vec<_>>()))
    };
    let mut sweep = Vec::new();
    let mut sweep_views = Vec::new();
    for (label, c, r) in &runs {
        let views = evaluate(&truth, &r.field, common.as_ref()).at(Stage::Evaluate)?;
        let (mean_psnr, mean_ssim) = mean(&views);
        sweep.push(SweepRow {
            variant: label.clone(),
            d_min: c.d_min,
            d_max: c.d_max,
            n_f: c.n_f,
            mean_psnr,
            mean_ssim,
        });
        sweep_views.push((label.clone(), views));
    }

    let dir = &spec.output;
    std::fs::create_dir_all(dir).at(Stage::Write)?;
    let mut files = Vec::new();
    let path = dir.join("metrics.json");
    metrics.write_json(&path).at(Stage::Write)?;
    files.push(path);
    let path = dir.join("per_view.csv");
    metrics.write_csv(&path).at(Stage::Write)?;
    files.push(path);
    if !sweep.is_empty() {
        let path = dir.join("sweep.csv");
        write_sweep_csv(&sweep, &path).at(Stage::Write)?;
        files.push(path);
        let path = dir.join("sweep_views.csv");
        write_sweep_views(&sweep_views, &path).at(Stage::Write)?;
        files.push(path);
    }
    if spec.previews {
        files.extend(write_previews(&truth, &rec, dir).at(Stage::Write)?);
    }
    if spec.save_field {
        let path = dir.join("field");
        save_lightfield(&rec.field, &path, BitDepth::Sixteen).at(Stage::Write)?;
        save_validity(&rec.valid, &path).at(Stage::Write)?;
        let mut saved: Vec<PathBuf> = std::fs::read_dir(&path)
            .at(Stage::Write)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()
            .at(Stage::Write)?;
        saved.sort();
        files.extend(saved);
    }
    Ok(ExperimentOutput { metrics, sweep, files })
}

fn write_sweep_views(rows: &[(String, Vec<ViewMetrics>)], path: &std::path::Path) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["variant", "u", "psnr", "ssim"])?;
    for (label, views) in rows {
        for m in views {
            w.write_record([label.clone(), m.u.to_string(), m.psnr.to_string(), m.ssim.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Central view, its ground truth and error, the central EPI and the
/// validity mask.
fn write_previews(truth: &LightField, rec: &Reconstruction, dir: &std::path::Path) -> image::ImageResult<Vec<PathBuf>> {
    let (u, v) = (rec.field.n_u() / 2, rec.field.n_v() / 2);
    let y = rec.field.height() / 2;
    let epi = rec.field.data().index_axis(Axis(0), v).index_axis(Axis(1), y).to_owned();
    let valid = rec.valid.index_axis(Axis(0), v).mapv(|b| if b { 1.0 } else { 0.0 });
    let items = [
        ("preview_view.png", rec.field.view(u, v).to_owned()),
        ("preview_truth.png", truth.view(u, v).to_owned()),
        ("preview_error.png", error_image(rec.field.view(u, v), truth.view(u, v), 8.0)),
        ("preview_epi.png", epi),
        ("preview_valid.png", valid),
    ];
    let mut out = Vec::new();
    for (name, img) in items {
        let path = dir.join(name);
        save_png(img.view(), &path)?;
        out.push(path);
    }
    Ok(out)
}
