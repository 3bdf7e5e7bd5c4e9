//! Report types, per-view evaluation and schema checks.

use std::path::Path;

use lf_core::LightField;
use ndarray::Array3;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::metrics::{psnr_masked, ssim_masked, MetricError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViewMetrics {
    pub u: usize,
    /// Only written for fields with more than one view row.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<usize>,
    pub psnr: f64,
    pub ssim: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub schema_version: u32,
    pub per_view: Vec<ViewMetrics>,
    pub mean_psnr: f64,
    pub mean_ssim: f64,
    /// Worst conjugate-symmetry deviation of a completed EFS, relative to
    /// its peak. Null when no reconstruction ran.
    pub efs_symmetry: Option<f64>,
    /// Mean share of ground-truth EPI spectral energy outside the wedge.
    pub wedge_loss: Option<f64>,
}

impl MetricsReport {
    pub fn new(per_view: Vec<ViewMetrics>, efs_symmetry: Option<f64>, wedge_loss: Option<f64>) -> Self {
        let n = per_view.len().max(1) as f64;
        MetricsReport {
            schema_version: SCHEMA_VERSION,
            mean_psnr: per_view.iter().map(|m| m.psnr).sum::<f64>() / n,
            mean_ssim: per_view.iter().map(|m| m.ssim).sum::<f64>() / n,
            per_view,
            efs_symmetry,
            wedge_loss,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write_json(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }

    /// One row per view: u[,v],psnr,ssim.
    pub fn write_csv(&self, path: &Path) -> csv::Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let with_v = self.per_view.iter().any(|m| m.v.is_some());
        if with_v {
            w.write_record(["v", "u", "psnr", "ssim"])?;
        } else {
            w.write_record(["u", "psnr", "ssim"])?;
        }
        for m in &self.per_view {
            let mut rec = Vec::new();
            if with_v {
                rec.push(m.v.unwrap_or(0).to_string());
            }
            rec.extend([m.u.to_string(), m.psnr.to_string(), m.ssim.to_string()]);
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// One configuration of a parameter sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub variant: String,
    pub d_min: f64,
    pub d_max: f64,
    pub n_f: usize,
    pub mean_psnr: f64,
    pub mean_ssim: f64,
}

pub fn write_sweep_csv(rows: &[SweepRow], path: &Path) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// PSNR and SSIM of every view of `test` against `truth`, restricted to
/// `valid` (indexed v, y, x) when given.
pub fn evaluate(truth: &LightField, test: &LightField, valid: Option<&Array3<bool>>) -> Result<Vec<ViewMetrics>, MetricError> {
    let dims = |f: &LightField| (f.n_v() * f.n_u(), f.height() * f.width());
    if truth.data().dim() != test.data().dim() {
        return Err(MetricError::Dims(dims(truth), dims(test)));
    }
    let mut out = Vec::with_capacity(truth.n_v() * truth.n_u());
    for v in 0..truth.n_v() {
        let mask = valid.map(|m| m.index_axis(ndarray::Axis(0), v));
        for u in 0..truth.n_u() {
            let (a, b) = (truth.view(u, v), test.view(u, v));
            out.push(ViewMetrics {
                u,
                v: (truth.n_v() > 1).then_some(v),
                psnr: psnr_masked(a, b, mask)?,
                ssim: ssim_masked(a, b, mask)?,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, thiserror::Error)]
#[error("metrics report: {0}")]
pub struct SchemaError(pub String);

fn number(v: &Value, what: &str) -> Result<f64, SchemaError> {
    v.as_f64().ok_or_else(|| SchemaError(format!("{what} must be a number, got {v}")))
}

fn nullable_number(obj: &serde_json::Map<String, Value>, key: &str) -> Result<(), SchemaError> {
    match obj.get(key) {
        None => Err(SchemaError(format!("missing {key}"))),
        Some(Value::Null) => Ok(()),
        Some(v) => number(v, key).map(|_| ()),
    }
}

/// Checks a parsed metrics report against schema version 1.
pub fn validate_metrics(doc: &Value) -> Result<(), SchemaError> {
    let obj = doc.as_object().ok_or_else(|| SchemaError("top level must be an object".into()))?;
    match obj.get("schema_version").and_then(Value::as_u64) {
        Some(1) => {}
        other => return Err(SchemaError(format!("schema_version must be 1, got {other:?}"))),
    }
    let views = obj
        .get("per_view")
        .and_then(Value::as_array)
        .ok_or_else(|| SchemaError("per_view must be an array".into()))?;
    for (i, entry) in views.iter().enumerate() {
        let e = entry.as_object().ok_or_else(|| SchemaError(format!("per_view[{i}] must be an object")))?;
        for key in ["u", "psnr", "ssim"] {
            if !e.contains_key(key) {
                return Err(SchemaError(format!("per_view[{i}] missing {key}")));
            }
        }
        if e["u"].as_u64().is_none() {
            return Err(SchemaError(format!("per_view[{i}].u must be a non-negative integer")));
        }
        if let Some(v) = e.get("v") {
            if v.as_u64().is_none() {
                return Err(SchemaError(format!("per_view[{i}].v must be a non-negative integer")));
            }
        }
        number(&e["psnr"], "psnr")?;
        let s = number(&e["ssim"], "ssim")?;
        if !(-1.0..=1.0).contains(&s) {
            return Err(SchemaError(format!("per_view[{i}].ssim {s} outside [-1, 1]")));
        }
    }
    for key in ["mean_psnr", "mean_ssim"] {
        number(obj.get(key).ok_or_else(|| SchemaError(format!("missing {key}")))?, key)?;
    }
    nullable_number(obj, "efs_symmetry")?;
    nullable_number(obj, "wedge_loss")?;
    Ok(())
}
