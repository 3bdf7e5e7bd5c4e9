//! PSNR and SSIM on intensity images with peak 1.

use ndarray::{Array2, ArrayView2};

/// Reported PSNR for identical images.
pub const PSNR_CAP: f64 = 99.0;

const WINDOW: usize = 11;
const SIGMA: f64 = 1.5;
const C1: f64 = 0.01 * 0.01;
const C2: f64 = 0.03 * 0.03;

#[derive(Debug, thiserror::Error)]
pub enum MetricError {
    #[error("dimension mismatch: {0:?} vs {1:?}")]
    Dims((usize, usize), (usize, usize)),
    #[error("image {0:?} is smaller than the {WINDOW}x{WINDOW} window")]
    TooSmall((usize, usize)),
    #[error("mask selects no pixels")]
    EmptyMask,
}

pub type Result<T> = std::result::Result<T, MetricError>;

fn same_dims(a: &ArrayView2<f64>, b: &ArrayView2<f64>) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(MetricError::Dims(a.dim(), b.dim()));
    }
    Ok(())
}

fn psnr_from_mse(mse: f64) -> f64 {
    if mse <= 0.0 {
        return PSNR_CAP;
    }
    (10.0 * (1.0 / mse).log10()).min(PSNR_CAP)
}

pub fn psnr(a: ArrayView2<f64>, b: ArrayView2<f64>) -> Result<f64> {
    psnr_masked(a, b, None)
}

/// PSNR over the pixels where `mask` is set, or all pixels without one.
pub fn psnr_masked(a: ArrayView2<f64>, b: ArrayView2<f64>, mask: Option<ArrayView2<bool>>) -> Result<f64> {
    same_dims(&a, &b)?;
    if let Some(m) = &mask {
        if m.dim() != a.dim() {
            return Err(MetricError::Dims(a.dim(), m.dim()));
        }
    }
    let (mut sum, mut n) = (0.0, 0usize);
    for ((idx, x), y) in a.indexed_iter().zip(b.iter()) {
        if mask.as_ref().map_or(true, |m| m[idx]) {
            sum += (x - y) * (x - y);
            n += 1;
        }
    }
    if n == 0 {
        return Err(MetricError::EmptyMask);
    }
    Ok(psnr_from_mse(sum / n as f64))
}

fn gaussian_taps() -> [f64; WINDOW] {
    let c = (WINDOW / 2) as f64;
    let mut t = [0.0; WINDOW];
    for (i, v) in t.iter_mut().enumerate() {
        let d = i as f64 - c;
        *v = (-d * d / (2.0 * SIGMA * SIGMA)).exp();
    }
    let s: f64 = t.iter().sum();
    t.map(|v| v / s)
}

/// Separable Gaussian filter keeping only windows that fit in the image.
fn filter_valid(img: &Array2<f64>, taps: &[f64; WINDOW]) -> Array2<f64> {
    let (h, w) = img.dim();
    let (oh, ow) = (h + 1 - WINDOW, w + 1 - WINDOW);
    let mut rows = Array2::<f64>::zeros((h, ow));
    for y in 0..h {
        for x in 0..ow {
            rows[[y, x]] = taps.iter().enumerate().map(|(k, t)| t * img[[y, x + k]]).sum();
        }
    }
    let mut out = Array2::<f64>::zeros((oh, ow));
    for y in 0..oh {
        for x in 0..ow {
            out[[y, x]] = taps.iter().enumerate().map(|(k, t)| t * rows[[y + k, x]]).sum();
        }
    }
    out
}

/// Local SSIM for every 11x11 window inside the image; entry (y, x) is the
/// window centred on pixel (y + 5, x + 5).
pub fn ssim_map(a: ArrayView2<f64>, b: ArrayView2<f64>) -> Result<Array2<f64>> {
    same_dims(&a, &b)?;
    let (h, w) = a.dim();
    if h < WINDOW || w < WINDOW {
        return Err(MetricError::TooSmall((h, w)));
    }
    let taps = gaussian_taps();
    let (a, b) = (a.to_owned(), b.to_owned());
    let mu_a = filter_valid(&a, &taps);
    let mu_b = filter_valid(&b, &taps);
    let aa = filter_valid(&(&a * &a), &taps);
    let bb = filter_valid(&(&b * &b), &taps);
    let ab = filter_valid(&(&a * &b), &taps);
    let mut out = Array2::zeros(mu_a.dim());
    for ((idx, o), (ma, mb)) in out.indexed_iter_mut().zip(mu_a.iter().zip(mu_b.iter())) {
        let va = aa[idx] - ma * ma;
        let vb = bb[idx] - mb * mb;
        let cov = ab[idx] - ma * mb;
        *o = ((2.0 * ma * mb + C1) * (2.0 * cov + C2)) / ((ma * ma + mb * mb + C1) * (va + vb + C2));
    }
    Ok(out)
}

pub fn ssim(a: ArrayView2<f64>, b: ArrayView2<f64>) -> Result<f64> {
    ssim_masked(a, b, None)
}

/// Mean local SSIM over windows whose centre pixel is in `mask`.
pub fn ssim_masked(a: ArrayView2<f64>, b: ArrayView2<f64>, mask: Option<ArrayView2<bool>>) -> Result<f64> {
    let map = ssim_map(a, b)?;
    if let Some(m) = &mask {
        if m.dim() != a.dim() {
            return Err(MetricError::Dims(a.dim(), m.dim()));
        }
    }
    let c = WINDOW / 2;
    let (mut sum, mut n) = (0.0, 0usize);
    for ((y, x), v) in map.indexed_iter() {
        if mask.as_ref().map_or(true, |m| m[[y + c, x + c]]) {
            sum += v;
            n += 1;
        }
    }
    if n == 0 {
        return Err(MetricError::EmptyMask);
    }
    Ok(sum / n as f64)
}
