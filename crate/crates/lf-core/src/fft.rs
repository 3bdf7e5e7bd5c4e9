//! Thin wrappers over rustfft for 2D arrays.
//!
//! Forward transforms use the e^{-j2π·} kernel without scaling; inverse
//! transforms carry the 1/N factor of each transformed axis.

use std::cell::RefCell;
use std::sync::Arc;

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// In-place 1D transform of a slice.
pub fn fft_slice(buf: &mut [Complex64], inverse: bool) {
    let n = buf.len();
    if n == 0 {
        return;
    }
    plan(n, inverse).process(buf);
    if inverse {
        let s = 1.0 / n as f64;
        buf.iter_mut().for_each(|v| *v *= s);
    }
}

/// In-place transform of every lane along `axis`.
pub fn fft_axis(data: &mut Array2<Complex64>, axis: Axis, inverse: bool) {
    let n = data.len_of(axis);
    if n == 0 {
        return;
    }
    let fft = plan(n, inverse);
    let scale = if inverse { 1.0 / n as f64 } else { 1.0 };
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for mut lane in data.lanes_mut(axis) {
        for (b, v) in buf.iter_mut().zip(lane.iter()) {
            *b = *v;
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        for (v, b) in lane.iter_mut().zip(buf.iter()) {
            *v = *b * scale;
        }
    }
}

pub fn fft2_inplace(data: &mut Array2<Complex64>, inverse: bool) {
    fft_axis(data, Axis(1), inverse);
    fft_axis(data, Axis(0), inverse);
}

pub fn to_complex(real: &Array2<f64>) -> Array2<Complex64> {
    real.mapv(|v| Complex64::new(v, 0.0))
}

/// Moves the zero-frequency sample of `axis` from index 0 to index n/2
/// (`centre = true`) or back (`centre = false`).
pub fn shift_axis(data: &Array2<Complex64>, axis: Axis, centre: bool) -> Array2<Complex64> {
    let n = data.len_of(axis);
    let half = n / 2;
    let mut out = data.clone();
    for i in 0..n {
        let src = if centre { (i + n - half) % n } else { (i + half) % n };
        out.index_axis_mut(axis, i).assign(&data.index_axis(axis, src));
    }
    out
}

/// Signed frequency in cycles per sample of centred index `i` on an axis of length `n`.
pub fn centred_freq(i: usize, n: usize) -> f64 {
    (i as f64 - (n / 2) as f64) / n as f64
}

/// Centred index of the frequency mirrored through DC, modulo `n`.
pub fn mirror_index(i: usize, n: usize) -> usize {
    let c = n / 2;
    (2 * c + n - i) % n
}
