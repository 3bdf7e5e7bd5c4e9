//! Sub-pixel row resampling shared by shearing, focal stacks and the
//! focal-stack operator used in completion.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    #[default]
    Linear,
    /// Keys cubic convolution, a = -0.5.
    Cubic,
}

/// What a sample outside the row reads. `ZeroFill` marks it invalid;
/// `Periodic` wraps around and is always valid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    ZeroFill,
    Periodic,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShearOptions {
    #[serde(default)]
    pub kernel: Kernel,
    #[serde(default)]
    pub boundary: Boundary,
}

const SNAP: f64 = 1e-9;

fn keys(t: f64) -> f64 {
    let a = -0.5;
    let t = t.abs();
    if t <= 1.0 {
        (a + 2.0) * t * t * t - (a + 3.0) * t * t + 1.0
    } else if t < 2.0 {
        a * t * t * t - 5.0 * a * t * t + 8.0 * a * t - 4.0 * a
    } else {
        0.0
    }
}

/// Taps for reading `row[x + offset]`: sample `x` reads `row[x + k]` with
/// weight `w` for each `(k, w)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftPlan {
    pub offset: f64,
    base: isize,
    frac: f64,
    kernel: Kernel,
}

impl ShiftPlan {
    pub fn new(offset: f64, kernel: Kernel) -> Self {
        let r = offset.round();
        let offset = if (offset - r).abs() < SNAP { r } else { offset };
        let base = offset.floor();
        ShiftPlan {
            offset,
            base: base as isize,
            frac: offset - base,
            kernel,
        }
    }

    pub fn taps(&self) -> impl Iterator<Item = (isize, f64)> + '_ {
        let t = self.frac;
        let (first, n) = match self.kernel {
            Kernel::Linear => (0isize, 2usize),
            Kernel::Cubic => (-1, 4),
        };
        (0..n as isize).map(move |i| {
            let k = first + i;
            let w = match self.kernel {
                Kernel::Linear => {
                    if k == 0 {
                        1.0 - t
                    } else {
                        t
                    }
                }
                Kernel::Cubic => keys(t - k as f64),
            };
            (self.base + k, w)
        })
    }

    /// Half-open range of output samples whose read position lies inside
    /// a row of length `w` (all of them for `Periodic`).
    pub fn valid_range(&self, w: usize, boundary: Boundary) -> (usize, usize) {
        match boundary {
            Boundary::Periodic => (0, w),
            Boundary::ZeroFill => {
                let lo = (-self.offset).ceil().max(0.0);
                let hi = ((w as f64 - 1.0 - self.offset).floor() + 1.0).min(w as f64);
                if hi <= lo {
                    (0, 0)
                } else {
                    (lo as usize, hi as usize)
                }
            }
        }
    }

    #[inline]
    fn index(&self, x: usize, k: isize, w: usize, boundary: Boundary) -> usize {
        let i = x as isize + k;
        match boundary {
            Boundary::Periodic => i.rem_euclid(w as isize) as usize,
            Boundary::ZeroFill => i.clamp(0, w as isize - 1) as usize,
        }
    }

    /// Adds the shifted row into `acc` and bumps `count` wherever the read
    /// is valid.
    pub fn accumulate(&self, row: &[f64], boundary: Boundary, acc: &mut [f64], count: &mut [f64]) {
        let w = row.len();
        let (lo, hi) = self.valid_range(w, boundary);
        if self.kernel == Kernel::Linear && boundary == Boundary::ZeroFill {
            let t = self.frac;
            for x in lo..hi {
                let k = (x as isize + self.base) as usize;
                let a = row[k];
                let b = if k + 1 < w { row[k + 1] } else { a };
                acc[x] += a + t * (b - a);
                count[x] += 1.0;
            }
            return;
        }
        let taps: Vec<(isize, f64)> = self.taps().collect();
        for x in lo..hi {
            let mut v = 0.0;
            for &(k, wt) in &taps {
                v += wt * row[self.index(x, k, w, boundary)];
            }
            acc[x] += v;
            count[x] += 1.0;
        }
    }

    /// Adjoint of [`ShiftPlan::accumulate`] with per-sample weights: adds
    /// `weight[x] * r[x]` back onto the taps that sample `x` read.
    pub fn scatter(&self, r: &[f64], weight: &[f64], boundary: Boundary, out: &mut [f64]) {
        let w = out.len();
        let (lo, hi) = self.valid_range(w, boundary);
        let taps: Vec<(isize, f64)> = self.taps().collect();
        for x in lo..hi {
            let g = r[x] * weight[x];
            if g == 0.0 {
                continue;
            }
            for &(k, wt) in &taps {
                out[self.index(x, k, w, boundary)] += wt * g;
            }
        }
    }

    /// Weighted forward read: `out[x] += weight[x] * row[x + offset]`.
    pub fn gather(&self, row: &[f64], weight: &[f64], boundary: Boundary, out: &mut [f64]) {
        let w = row.len();
        let (lo, hi) = self.valid_range(w, boundary);
        let taps: Vec<(isize, f64)> = self.taps().collect();
        for x in lo..hi {
            if weight[x] == 0.0 {
                continue;
            }
            let mut v = 0.0;
            for &(k, wt) in &taps {
                v += wt * row[self.index(x, k, w, boundary)];
            }
            out[x] += weight[x] * v;
        }
    }
}
