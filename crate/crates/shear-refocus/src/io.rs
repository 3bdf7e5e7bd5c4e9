//! Focal stacks on disk: raw little-endian f32 layers plus a JSON header.

use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{RefocusError, Result};
use crate::stack::FocalStack;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StackHeader {
    pub n_f: usize,
    pub width: usize,
    pub d_min: f64,
    pub d_max: f64,
    pub u_ref: usize,
}

fn err(path: &Path, e: impl ToString) -> RefocusError {
    RefocusError::Format {
        path: path.display().to_string(),
        msg: e.to_string(),
    }
}

fn paths(stem: &Path) -> (PathBuf, PathBuf) {
    (stem.with_extension("f32"), stem.with_extension("json"))
}

pub fn save_focal_stack(fs_: &FocalStack, stem: &Path) -> Result<()> {
    let (raw, head) = paths(stem);
    let header = StackHeader {
        n_f: fs_.n_f(),
        width: fs_.width(),
        d_min: fs_.d_min(),
        d_max: fs_.d_max(),
        u_ref: fs_.u_ref,
    };
    let bytes: Vec<u8> = fs_.data.iter().flat_map(|v| (*v as f32).to_le_bytes()).collect();
    fs::write(&raw, bytes).map_err(|e| err(&raw, e))?;
    let text = serde_json::to_string_pretty(&header).map_err(|e| err(&head, e))?;
    fs::write(&head, text).map_err(|e| err(&head, e))
}

/// Reads a stack back; validity is not stored and comes back as all ones.
pub fn load_focal_stack(stem: &Path) -> Result<FocalStack> {
    let (raw, head) = paths(stem);
    let text = fs::read_to_string(&head).map_err(|e| err(&head, e))?;
    let h: StackHeader = serde_json::from_str(&text).map_err(|e| err(&head, e))?;
    if h.n_f < 2 {
        return Err(err(&head, "n_f below 2"));
    }
    let bytes = fs::read(&raw).map_err(|e| err(&raw, e))?;
    if bytes.len() != h.n_f * h.width * 4 {
        return Err(err(&raw, format!("expected {} bytes, found {}", h.n_f * h.width * 4, bytes.len())));
    }
    let vals: Vec<f64> = bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
        .collect();
    let data = Array2::from_shape_vec((h.n_f, h.width), vals).map_err(|e| err(&raw, e))?;
    let step = (h.d_max - h.d_min) / (h.n_f - 1) as f64;
    let f_values = (0..h.n_f).map(|m| h.d_min + m as f64 * step).collect();
    Ok(FocalStack {
        data,
        f_values,
        u_ref: h.u_ref,
        validity: Array2::ones((h.n_f, h.width)),
    })
}
