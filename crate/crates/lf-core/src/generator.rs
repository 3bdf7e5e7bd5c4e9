//! Layered Lambertian scenes with exact ground-truth disparity.
//!
//! Each layer is a band-limited noise texture. View (u, v) sees the layer
//! point at texture coordinate xi at x = xi + d·(u - u_c) and
//! y = eta + d·(v - v_c), with (u_c, v_c) the centre of the view grid.
//! Textures are oversampled 4x by zero-padding their spectrum, so the
//! sub-pixel resampling done here is close to exact band-limited shifting.

use ndarray::{Array2, Array4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{LfError, Result};
use crate::fft::fft2_inplace;
use crate::lightfield::LightField;
use crate::par::Exec;
use crate::scene::{LayerDisparity, LayerMask, SceneGeometry, TextureParams};

const UPSAMPLE: usize = 4;

#[derive(Clone, Debug)]
pub struct GeneratedField {
    pub field: LightField,
    /// Per-view disparity maps in (v, u) order, pixels per view step.
    pub disparity: Vec<Array2<f64>>,
}

impl GeneratedField {
    pub fn disparity_map(&self, u: usize, v: usize) -> &Array2<f64> {
        &self.disparity[v * self.field.n_u() + u]
    }
}

/// Horizontal-parallax-only field with `n_views` views along u.
pub fn synth_lightfield(
    geom: &SceneGeometry,
    n_views: usize,
    h: usize,
    w: usize,
    seed: u64,
) -> Result<GeneratedField> {
    synth(geom, n_views, 1, h, w, seed, Exec::default())
}

/// Full-parallax field on an `n_v x n_u` view grid.
pub fn synth_lightfield_4d(
    geom: &SceneGeometry,
    n_u: usize,
    n_v: usize,
    h: usize,
    w: usize,
    seed: u64,
) -> Result<GeneratedField> {
    synth(geom, n_u, n_v, h, w, seed, Exec::default())
}

struct Canvas {
    fine: Array2<f64>,
    ux: usize,
    uy: usize,
    mx: f64,
    my: f64,
    wrap_x: bool,
}

impl Canvas {
    fn sample(&self, y: f64, xi: f64) -> f64 {
        let (fh, fw) = self.fine.dim();
        let fx = (xi + self.mx) * self.ux as f64;
        let fy = ((y + self.my) * self.uy as f64).clamp(0.0, (fh - 1) as f64);
        let y0 = (fy.floor() as usize).min(fh - 1);
        let y1 = (y0 + 1).min(fh - 1);
        let ty = fy - y0 as f64;
        let (x0, x1, tx) = if self.wrap_x {
            let fx = fx.rem_euclid(fw as f64);
            let x0 = (fx.floor() as usize) % fw;
            (x0, (x0 + 1) % fw, fx - fx.floor())
        } else {
            let fx = fx.clamp(0.0, (fw - 1) as f64);
            let x0 = (fx.floor() as usize).min(fw - 1);
            (x0, (x0 + 1).min(fw - 1), fx - x0 as f64)
        };
        let f = &self.fine;
        let top = f[[y0, x0]] * (1.0 - tx) + f[[y0, x1]] * tx;
        let bottom = f[[y1, x0]] * (1.0 - tx) + f[[y1, x1]] * tx;
        top * (1.0 - ty) + bottom * ty
    }
}

fn mix_seed(seed: u64, layer_seed: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ layer_seed.rotate_left(29) ^ 0xD1B5_4A32_D192_ED03
}

fn signed_bin(i: usize, n: usize) -> isize {
    if i <= n / 2 {
        i as isize
    } else {
        i as isize - n as isize
    }
}

/// Where coarse bin `i` lands on the `up`-times finer axis. An even-length
/// Nyquist bin is split between +n/2 and -n/2 so the result stays real.
fn fine_targets(i: usize, n: usize, up: usize) -> Vec<(usize, f64)> {
    let nf = (n * up) as isize;
    let k = signed_bin(i, n);
    if up > 1 && n % 2 == 0 && i == n / 2 {
        vec![(k as usize, 0.5), ((nf - k) as usize, 0.5)]
    } else {
        vec![(k.rem_euclid(nf) as usize, 1.0)]
    }
}

fn band_limited_texture(
    params: &TextureParams,
    seed: u64,
    hc: usize,
    wc: usize,
    uy: usize,
    ux: usize,
) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spec = Array2::from_shape_fn((hc, wc), |_| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), 0.0)
    });
    fft2_inplace(&mut spec, false);
    let (fh, fw) = (hc * uy, wc * ux);
    let mut fine = Array2::<Complex64>::zeros((fh, fw));
    for i in 0..hc {
        if (signed_bin(i, hc) as f64 / hc as f64).abs() > params.cutoff {
            continue;
        }
        let ty = fine_targets(i, hc, uy);
        for j in 0..wc {
            if (signed_bin(j, wc) as f64 / wc as f64).abs() > params.cutoff {
                continue;
            }
            for &(fi, wy) in &ty {
                for &(fj, wx) in &fine_targets(j, wc, ux) {
                    fine[[fi, fj]] += spec[[i, j]] * (wy * wx);
                }
            }
        }
    }
    fft2_inplace(&mut fine, true);
    let scale = (ux * uy) as f64;
    let fine = fine.mapv(|c| c.re * scale);

    let coarse: Vec<f64> = (0..hc)
        .flat_map(|i| (0..wc).map(move |j| (i, j)))
        .map(|(i, j)| fine[[i * uy, j * ux]])
        .collect();
    let n = coarse.len() as f64;
    let mu = coarse.iter().sum::<f64>() / n;
    let sigma = (coarse.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / n).sqrt();
    let gain = if sigma > 0.0 { params.std / sigma } else { 0.0 };
    fine.mapv(|v| (params.mean + gain * (v - mu)).clamp(0.0, 1.0))
}

/// Returns (xi, d) for the layer point seen at image column `x` from a view
/// offset `s_u` steps from the centre.
fn layer_coord(disp: &LayerDisparity, x: f64, s_u: f64, w: usize) -> (f64, f64) {
    match *disp {
        LayerDisparity::Constant { d } => (x - d * s_u, d),
        LayerDisparity::Linear { left, right } => {
            let b = (right - left) / (w.max(2) - 1) as f64;
            let xi = (x - left * s_u) / (1.0 + b * s_u);
            (xi, left + b * xi)
        }
    }
}

fn synth(
    geom: &SceneGeometry,
    n_u: usize,
    n_v: usize,
    h: usize,
    w: usize,
    seed: u64,
    exec: Exec,
) -> Result<GeneratedField> {
    geom.validate()?;
    if n_u < 2 {
        return Err(LfError::Scene(format!("need at least 2 views, got {n_u}")));
    }
    if h == 0 || w == 0 {
        return Err(LfError::Scene("empty image size".into()));
    }
    if !geom.layers.iter().any(|l| l.mask == LayerMask::Opaque) {
        return Err(LfError::Scene("at least one layer must be fully opaque".into()));
    }
    let c_u = (n_u - 1) as f64 / 2.0;
    let c_v = (n_v - 1) as f64 / 2.0;
    for layer in &geom.layers {
        let dmax = layer.disparity.max_abs();
        if dmax * (n_u - 1) as f64 >= w as f64 || (n_v > 1 && dmax * (n_v - 1) as f64 >= h as f64) {
            return Err(LfError::Degenerate(format!(
                "layer disparity {dmax} over {} views leaves the {w}x{h} frame",
                n_u.max(n_v)
            )));
        }
        if let LayerDisparity::Linear { left, right } = layer.disparity {
            let b = (right - left) / (w.max(2) - 1) as f64;
            if b.abs() * c_u >= 1.0 {
                return Err(LfError::Scene(format!("slant {b} folds the layer over itself")));
            }
        }
    }

    let canvases: Vec<Canvas> = geom
        .layers
        .iter()
        .map(|layer| {
            let dmax = layer.disparity.max_abs();
            let mx = if geom.wrap_x { 0 } else { (dmax * c_u).ceil() as usize + 3 };
            let my = if n_v > 1 { (dmax * c_v).ceil() as usize + 3 } else { 0 };
            let uy = if n_v > 1 { UPSAMPLE } else { 1 };
            let fine = band_limited_texture(
                &geom.texture,
                mix_seed(seed, layer.texture_seed),
                h + 2 * my,
                w + 2 * mx,
                uy,
                UPSAMPLE,
            );
            Canvas {
                fine,
                ux: UPSAMPLE,
                uy,
                mx: mx as f64,
                my: my as f64,
                wrap_x: geom.wrap_x,
            }
        })
        .collect();

    let rendered = exec.map(n_u * n_v, |idx| {
        let (v, u) = (idx / n_u, idx % n_u);
        let s_u = u as f64 - c_u;
        let s_v = v as f64 - c_v;
        let mut img = Array2::<f64>::zeros((h, w));
        let mut disp = Array2::<f64>::zeros((h, w));
        for y in 0..h {
            for x in 0..w {
                let mut best: Option<(f64, f64)> = None;
                for (layer, canvas) in geom.layers.iter().zip(&canvases) {
                    let (xi, d) = layer_coord(&layer.disparity, x as f64, s_u, w);
                    if !layer.mask.covers(xi) {
                        continue;
                    }
                    if best.is_some_and(|(bd, _)| d <= bd) {
                        continue;
                    }
                    let eta = y as f64 - d * s_v;
                    best = Some((d, canvas.sample(eta, xi)));
                }
                let (d, value) = best.expect("an opaque layer covers every pixel");
                img[[y, x]] = value;
                disp[[y, x]] = d;
            }
        }
        (img, disp)
    });

    let mut data = Array4::<f64>::zeros((n_v, n_u, h, w));
    let mut disparity = Vec::with_capacity(n_u * n_v);
    for (idx, (img, disp)) in rendered.into_iter().enumerate() {
        data.slice_mut(ndarray::s![idx / n_u, idx % n_u, .., ..]).assign(&img);
        disparity.push(disp);
    }
    let mut field = LightField::new(data, geom.baseline_step, geom.focal_length)?;
    field.meta.insert("generator".into(), "layered".into());
    field.meta.insert("seed".into(), seed.to_string());
    Ok(GeneratedField { field, disparity })
}
