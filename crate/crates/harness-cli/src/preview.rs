//! 8-bit PNG previews and validity masks.

use std::path::Path;

use image::GrayImage;
use ndarray::{Array2, Array3, ArrayView2};

pub fn to_gray(img: ArrayView2<f64>) -> GrayImage {
    let (h, w) = img.dim();
    GrayImage::from_fn(w as u32, h as u32, |x, y| {
        image::Luma([(img[[y as usize, x as usize]].clamp(0.0, 1.0) * 255.0).round() as u8])
    })
}

pub fn save_png(img: ArrayView2<f64>, path: &Path) -> image::ImageResult<()> {
    to_gray(img).save(path)
}

/// |a − b| scaled by `gain`.
pub fn error_image(a: ArrayView2<f64>, b: ArrayView2<f64>, gain: f64) -> Array2<f64> {
    let mut d = &a - &b;
    d.mapv_inplace(|v| (v.abs() * gain).min(1.0));
    d
}

pub fn mask_file_name(v: usize) -> String {
    format!("valid_{v:04}.png")
}

/// One mask image per view row, white where valid.
pub fn save_validity(valid: &Array3<bool>, dir: &Path) -> image::ImageResult<()> {
    for (v, m) in valid.outer_iter().enumerate() {
        save_png(m.mapv(|b| if b { 1.0 } else { 0.0 }).view(), &dir.join(mask_file_name(v)))?;
    }
    Ok(())
}

/// Masks written by [`save_validity`], or `None` when the directory has
/// none.
pub fn load_validity(dir: &Path, n_v: usize, h: usize, w: usize) -> anyhow::Result<Option<Array3<bool>>> {
    if !dir.join(mask_file_name(0)).exists() {
        return Ok(None);
    }
    let mut out = Array3::from_elem((n_v, h, w), false);
    for v in 0..n_v {
        let path = dir.join(mask_file_name(v));
        let img = image::open(&path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?.to_luma8();
        if (img.height() as usize, img.width() as usize) != (h, w) {
            anyhow::bail!("{}: mask is {}x{}, field is {h}x{w}", path.display(), img.height(), img.width());
        }
        for (x, y, p) in img.enumerate_pixels() {
            out[[v, y as usize, x as usize]] = p.0[0] >= 128;
        }
    }
    Ok(Some(out))
}
