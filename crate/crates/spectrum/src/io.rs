//! Grid files: `<stem>.json` header plus `<stem>.bin` holding interleaved
//! real/imaginary f64 little-endian values in row-major order.

use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectrumError};
use crate::grid::{AxisKind, ComplexGrid};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridHeader {
    pub rows: usize,
    pub cols: usize,
    pub axis0: String,
    pub axis1: String,
    pub dc_centered: bool,
}

fn paths(stem: &Path) -> (PathBuf, PathBuf) {
    (stem.with_extension("json"), stem.with_extension("bin"))
}

pub fn save_grid(grid: &ComplexGrid, stem: &Path) -> Result<()> {
    let (hp, bp) = paths(stem);
    let header = GridHeader {
        rows: grid.rows(),
        cols: grid.cols(),
        axis0: grid.axes[0].label().into(),
        axis1: grid.axes[1].label().into(),
        dc_centered: true,
    };
    let text = serde_json::to_string_pretty(&header).map_err(|e| SpectrumError::format(&hp, e))?;
    fs::write(&hp, text).map_err(|e| SpectrumError::format(&hp, e))?;
    let mut bytes = Vec::with_capacity(grid.data.len() * 16);
    for v in grid.data.iter() {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        bytes.extend_from_slice(&v.im.to_le_bytes());
    }
    fs::write(&bp, bytes).map_err(|e| SpectrumError::format(&bp, e))
}

pub fn load_grid(stem: &Path) -> Result<ComplexGrid> {
    let (hp, bp) = paths(stem);
    let text = fs::read_to_string(&hp).map_err(|e| SpectrumError::format(&hp, e))?;
    let h: GridHeader = serde_json::from_str(&text).map_err(|e| SpectrumError::format(&hp, e))?;
    if !h.dc_centered {
        return Err(SpectrumError::format(&hp, "only DC-centred grids are supported"));
    }
    let axis = |s: &str| AxisKind::from_label(s).ok_or_else(|| SpectrumError::format(&hp, format!("unknown axis {s}")));
    let axes = [axis(&h.axis0)?, axis(&h.axis1)?];
    let bytes = fs::read(&bp).map_err(|e| SpectrumError::format(&bp, e))?;
    if bytes.len() != h.rows * h.cols * 16 {
        return Err(SpectrumError::format(
            &bp,
            format!("expected {} bytes, found {}", h.rows * h.cols * 16, bytes.len()),
        ));
    }
    let vals: Vec<Complex64> = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect();
    let data = Array2::from_shape_vec((h.rows, h.cols), vals).map_err(|e| SpectrumError::format(&bp, e))?;
    ComplexGrid::new(data, axes)
}
