//! Directory container: `meta.json` plus one grayscale PNG per view named
//! `view_{v:04}_{u:04}.png`. Disparity maps are raw little-endian f32 files
//! with a `{height, width}` JSON sidecar.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageBuffer, Luma};
use ndarray::{Array2, Array4};
use serde::{Deserialize, Serialize};

use crate::error::{LfError, Result};
use crate::lightfield::LightField;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn bits(self) -> u8 {
        match self {
            BitDepth::Eight => 8,
            BitDepth::Sixteen => 16,
        }
    }

    fn max_code(self) -> f64 {
        match self {
            BitDepth::Eight => 255.0,
            BitDepth::Sixteen => 65535.0,
        }
    }

    pub fn quantize(self, v: f64) -> f64 {
        let m = self.max_code();
        (v.clamp(0.0, 1.0) * m).round() / m
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LightFieldMeta {
    pub schema_version: u32,
    pub n_u: usize,
    pub n_v: usize,
    pub height: usize,
    pub width: usize,
    pub baseline_step: f64,
    pub focal_length: f64,
    pub bit_depth: u8,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tags: BTreeMap<String, String>,
}

pub fn view_file_name(u: usize, v: usize) -> String {
    format!("view_{v:04}_{u:04}.png")
}

/// The field as it reads back after a save at `depth`.
pub fn quantized(lf: &LightField, depth: BitDepth) -> LightField {
    let data = lf.data().mapv(|v| depth.quantize(v));
    let mut q = LightField::new(data, lf.baseline_step, lf.focal_length)
        .expect("quantized data stays in range");
    q.meta = lf.meta.clone();
    q
}

pub fn save_lightfield(lf: &LightField, dir: &Path, depth: BitDepth) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| LfError::format(dir, e))?;
    let meta = LightFieldMeta {
        schema_version: SCHEMA_VERSION,
        n_u: lf.n_u(),
        n_v: lf.n_v(),
        height: lf.height(),
        width: lf.width(),
        baseline_step: lf.baseline_step,
        focal_length: lf.focal_length,
        bit_depth: depth.bits(),
        tags: lf.meta.clone(),
    };
    let meta_path = dir.join("meta.json");
    let text = serde_json::to_string_pretty(&meta).map_err(|e| LfError::format(&meta_path, e))?;
    fs::write(&meta_path, text).map_err(|e| LfError::format(&meta_path, e))?;

    let (h, w) = (lf.height() as u32, lf.width() as u32);
    for v in 0..lf.n_v() {
        for u in 0..lf.n_u() {
            let path = dir.join(view_file_name(u, v));
            let view = lf.view(u, v);
            let res = match depth {
                BitDepth::Eight => ImageBuffer::<Luma<u8>, Vec<u8>>::from_fn(w, h, |x, y| {
                    Luma([(view[[y as usize, x as usize]].clamp(0.0, 1.0) * 255.0).round() as u8])
                })
                .save(&path),
                BitDepth::Sixteen => ImageBuffer::<Luma<u16>, Vec<u16>>::from_fn(w, h, |x, y| {
                    Luma([(view[[y as usize, x as usize]].clamp(0.0, 1.0) * 65535.0).round() as u16])
                })
                .save(&path),
            };
            res.map_err(|e| LfError::format(&path, e))?;
        }
    }
    Ok(())
}

/// Decodes an image to luminance in [0,1]; colour uses BT.601 weights.
pub fn image_to_luma(img: &DynamicImage) -> Array2<f64> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    match img {
        DynamicImage::ImageLuma8(b) => {
            Array2::from_shape_fn((h, w), |(y, x)| b.get_pixel(x as u32, y as u32)[0] as f64 / 255.0)
        }
        DynamicImage::ImageLuma16(b) => Array2::from_shape_fn((h, w), |(y, x)| {
            b.get_pixel(x as u32, y as u32)[0] as f64 / 65535.0
        }),
        other => {
            let rgb = other.to_rgb32f();
            Array2::from_shape_fn((h, w), |(y, x)| {
                let p = rgb.get_pixel(x as u32, y as u32);
                (0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64).clamp(0.0, 1.0)
            })
        }
    }
}

pub fn read_meta(dir: &Path) -> Result<LightFieldMeta> {
    let meta_path = dir.join("meta.json");
    let text = fs::read_to_string(&meta_path).map_err(|e| LfError::format(&meta_path, e))?;
    let meta: LightFieldMeta =
        serde_json::from_str(&text).map_err(|e| LfError::format(&meta_path, e))?;
    if meta.schema_version != SCHEMA_VERSION {
        return Err(LfError::format(
            &meta_path,
            format!("unsupported schema_version {}", meta.schema_version),
        ));
    }
    if meta.bit_depth != 8 && meta.bit_depth != 16 {
        return Err(LfError::format(&meta_path, format!("bit_depth {}", meta.bit_depth)));
    }
    Ok(meta)
}

pub fn load_lightfield(dir: &Path) -> Result<LightField> {
    let meta = read_meta(dir)?;
    let mut data = Array4::<f64>::zeros((meta.n_v, meta.n_u, meta.height, meta.width));
    for v in 0..meta.n_v {
        for u in 0..meta.n_u {
            let path = dir.join(view_file_name(u, v));
            if !path.exists() {
                return Err(LfError::format(&path, "missing view file"));
            }
            let img = image::open(&path).map_err(|e| LfError::format(&path, e))?;
            let luma = image_to_luma(&img);
            if luma.dim() != (meta.height, meta.width) {
                return Err(LfError::Dimension {
                    file: path,
                    expected: format!("{}x{}", meta.width, meta.height),
                    found: format!("{}x{}", luma.ncols(), luma.nrows()),
                });
            }
            data.slice_mut(ndarray::s![v, u, .., ..]).assign(&luma);
        }
    }
    let mut lf = LightField::new(data, meta.baseline_step, meta.focal_length)
        .map_err(|e| LfError::format(dir, e))?;
    lf.meta = meta.tags;
    Ok(lf)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct RasterHeader {
    height: usize,
    width: usize,
}

fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// Writes `map` as row-major little-endian f32 at `path` plus a JSON sidecar.
pub fn write_disparity_map(path: &Path, map: &Array2<f64>) -> Result<()> {
    let bytes: Vec<u8> = map.iter().flat_map(|v| (*v as f32).to_le_bytes()).collect();
    fs::write(path, bytes).map_err(|e| LfError::format(path, e))?;
    let header = RasterHeader {
        height: map.nrows(),
        width: map.ncols(),
    };
    let side = sidecar(path);
    let text = serde_json::to_string(&header).map_err(|e| LfError::format(&side, e))?;
    fs::write(&side, text).map_err(|e| LfError::format(&side, e))
}

pub fn read_disparity_map(path: &Path) -> Result<Array2<f64>> {
    let side = sidecar(path);
    let text = fs::read_to_string(&side).map_err(|e| LfError::format(&side, e))?;
    let header: RasterHeader = serde_json::from_str(&text).map_err(|e| LfError::format(&side, e))?;
    let bytes = fs::read(path).map_err(|e| LfError::format(path, e))?;
    if bytes.len() != header.height * header.width * 4 {
        return Err(LfError::Dimension {
            file: path.to_path_buf(),
            expected: format!("{} bytes", header.height * header.width * 4),
            found: format!("{} bytes", bytes.len()),
        });
    }
    let vals: Vec<f64> = bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
        .collect();
    Array2::from_shape_vec((header.height, header.width), vals).map_err(|e| LfError::format(path, e))
}

pub fn disparity_file_name(u: usize, v: usize) -> String {
    format!("disp_{v:04}_{u:04}.f32")
}
