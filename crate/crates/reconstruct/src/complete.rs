use std::f64::consts::PI;
use std::path::PathBuf;
use std::sync::Arc;

use lf_core::fft::fft_slice;
use lf_core::LightField;
use nalgebra::DMatrix;
use ndarray::{s, Array2, ArrayView2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use shear_refocus::{focal_stack_at, Boundary, ReconstructionConfig, ShiftPlan};
use spectrum::{efs_spatial_route, ifft2, io::load_grid, symmetrize, ComplexGrid};

use crate::error::{ReconstructError, Result};
use crate::geometry::TargetGeometry;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassicalParams {
    /// Weight of the adjacent-view smoothness term.
    pub lambda: f64,
    pub iterations: usize,
}

impl Default for ClassicalParams {
    fn default() -> Self {
        ClassicalParams {
            lambda: 0.03,
            iterations: 60,
        }
    }
}

#[derive(Clone, Debug)]
pub enum CompletionBackend {
    /// Ground-truth dense field with `n_target` views along u.
    Oracle(Arc<LightField>),
    Classical(ClassicalParams),
    /// Directory of precomputed grids named by [`external_grid_stem`].
    External(PathBuf),
}

impl CompletionBackend {
    pub fn name(&self) -> &'static str {
        match self {
            CompletionBackend::Oracle(_) => "oracle",
            CompletionBackend::Classical(_) => "classical",
            CompletionBackend::External(_) => "external",
        }
    }
}

/// The EPI an aliased EFS came from: image row `y` of view row `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct RowId {
    pub y: usize,
    pub v: usize,
}

pub fn external_grid_stem(dir: &std::path::Path, row: RowId) -> PathBuf {
    dir.join(format!("efs_v{:04}_y{:04}", row.v, row.y))
}

/// EFS of `views` placed at `positions` (source steps), sheared about the
/// configured reference.
pub fn dense_efs(views: ArrayView2<'_, f64>, positions: &[f64], cfg: &ReconstructionConfig) -> Result<ComplexGrid> {
    let fs = focal_stack_at(views, positions, cfg.u_ref, cfg.u_ref as f64, &cfg.f_values(), cfg.shear)?;
    Ok(symmetrize(&efs_spatial_route(&fs)?))
}

/// A backend bound to one configuration and EPI shape, shareable across rows.
pub struct Completer {
    backend: CompletionBackend,
    cfg: ReconstructionConfig,
    target: TargetGeometry,
    width: usize,
    classical: Option<ClassicalSolver>,
}

impl Completer {
    pub fn new(backend: CompletionBackend, cfg: &ReconstructionConfig, n_source: usize, width: usize) -> Result<Self> {
        cfg.validate(n_source)?;
        let target = TargetGeometry::from_config(cfg, n_source)?;
        let classical = match &backend {
            CompletionBackend::Oracle(lf) => {
                if lf.n_u() != cfg.n_target || lf.width() != width {
                    return Err(ReconstructError::Backend(format!(
                        "oracle field has {} views of width {}, expected {} of width {width}",
                        lf.n_u(),
                        lf.width(),
                        cfg.n_target
                    )));
                }
                None
            }
            CompletionBackend::Classical(p) => Some(ClassicalSolver::new(cfg, n_source, width, *p)?),
            CompletionBackend::External(dir) => {
                if !dir.is_dir() {
                    return Err(ReconstructError::Backend(format!("{} is not a directory", dir.display())));
                }
                None
            }
        };
        Ok(Completer {
            backend,
            cfg: cfg.clone(),
            target,
            width,
            classical,
        })
    }

    pub fn backend(&self) -> &CompletionBackend {
        &self.backend
    }

    pub fn target(&self) -> TargetGeometry {
        self.target
    }

    pub fn complete(&self, aliased: &ComplexGrid, row: RowId) -> Result<ComplexGrid> {
        let dims = (self.cfg.n_f, self.width);
        if aliased.data.dim() != dims {
            return Err(ReconstructError::Config(format!(
                "aliased EFS is {:?}, expected {dims:?}",
                aliased.data.dim()
            )));
        }
        let positions = self.target.positions();
        match &self.backend {
            CompletionBackend::Oracle(lf) => {
                if row.y >= lf.height() || row.v >= lf.n_v() {
                    return Err(ReconstructError::Backend(format!("oracle has no row {row:?}")));
                }
                let views = lf.data().slice(s![row.v, .., row.y, ..]);
                dense_efs(views, &positions, &self.cfg)
            }
            CompletionBackend::Classical(_) => {
                let solver = self.classical.as_ref().expect("prepared with the backend");
                let stack = ifft2(aliased)?;
                let profiles = solver.solve(&stack);
                let dense = crossfade(&profiles, &positions);
                dense_efs(dense.view(), &positions, &self.cfg)
            }
            CompletionBackend::External(dir) => {
                let g = load_grid(&external_grid_stem(dir, row))?;
                if g.data.dim() != dims || g.axes != aliased.axes {
                    return Err(ReconstructError::Backend(format!(
                        "external grid for {row:?} is {:?} {:?}, expected {dims:?} {:?}",
                        g.data.dim(),
                        g.axes,
                        aliased.axes
                    )));
                }
                Ok(symmetrize(&g))
            }
        }
    }
}

/// One-shot completion; prefer [`Completer`] when completing many rows.
pub fn complete_efs(
    aliased: &ComplexGrid,
    cfg: &ReconstructionConfig,
    n_source: usize,
    backend: &CompletionBackend,
    row: RowId,
) -> Result<ComplexGrid> {
    Completer::new(backend.clone(), cfg, n_source, aliased.cols())?.complete(aliased, row)
}

/// Linear blend of the two source rows around each position.
pub fn crossfade(rows: &Array2<f64>, positions: &[f64]) -> Array2<f64> {
    let (n, w) = rows.dim();
    let mut out = Array2::zeros((positions.len(), w));
    for (t, &p) in positions.iter().enumerate() {
        let j0 = (p.floor().max(0.0) as usize).min(n - 2);
        let a = p - j0 as f64;
        let (r0, r1) = (rows.row(j0), rows.row(j0 + 1));
        for x in 0..w {
            out[[t, x]] = r0[x] * (1.0 - a) + r1[x] * a;
        }
    }
    out
}

struct Tap {
    base: isize,
    weights: [f64; 4],
    n: usize,
    lo: usize,
    hi: usize,
}

impl Tap {
    /// Sub-range of `lo..hi` whose taps all fall inside a row of length `w`.
    fn interior(&self, w: usize) -> (usize, usize) {
        let first = (-self.base).max(0) as usize;
        let last = (w as isize - self.base - self.n as isize + 1).max(0) as usize;
        let a = self.lo.max(first).min(self.hi);
        let b = self.hi.min(last).max(a);
        (a, b)
    }

    #[inline]
    fn read(&self, row: &[f64], x: usize) -> f64 {
        let w = row.len() as isize;
        let mut v = 0.0;
        for k in 0..self.n {
            let i = (x as isize + self.base + k as isize).clamp(0, w - 1) as usize;
            v += self.weights[k] * row[i];
        }
        v
    }
}

/// Least-squares recovery of per-view rows from a focal stack, by
/// preconditioned CG on the normal equations of the focal-stack operator.
struct ClassicalSolver {
    n_u: usize,
    n_f: usize,
    w: usize,
    lambda: f64,
    iterations: usize,
    periodic: bool,
    taps: Vec<Tap>,
    weight: Array2<f64>,
    precond: Vec<DMatrix<Complex64>>,
}

const RIDGE: f64 = 1e-9;

impl ClassicalSolver {
    fn new(cfg: &ReconstructionConfig, n_u: usize, w: usize, p: ClassicalParams) -> Result<Self> {
        if !(p.lambda >= 0.0 && p.lambda.is_finite()) || p.iterations == 0 {
            return Err(ReconstructError::Config(format!("bad classical parameters {p:?}")));
        }
        let f_values = cfg.f_values();
        let n_f = f_values.len();
        let boundary = cfg.shear.boundary;
        let mut taps = Vec::with_capacity(n_f * n_u);
        let mut weight = Array2::zeros((n_f, w));
        for (m, &f) in f_values.iter().enumerate() {
            let mut count = vec![0.0; w];
            for j in 0..n_u {
                let plan = ShiftPlan::new(f * (j as f64 - cfg.u_ref as f64), cfg.shear.kernel);
                let (lo, hi) = plan.valid_range(w, boundary);
                count[lo..hi].iter_mut().for_each(|c| *c += 1.0);
                let mut weights = [0.0; 4];
                let mut base = 0;
                let mut n = 0;
                for (i, (k, wt)) in plan.taps().enumerate() {
                    if i == 0 {
                        base = k;
                    }
                    weights[i] = wt;
                    n += 1;
                }
                taps.push(Tap { base, weights, n, lo, hi });
            }
            for x in 0..w {
                if count[x] > 0.0 {
                    weight[[m, x]] = 1.0 / count[x];
                }
            }
        }
        let precond = preconditioner(&taps, n_u, n_f, w, p.lambda)?;
        Ok(ClassicalSolver {
            n_u,
            n_f,
            w,
            lambda: p.lambda,
            iterations: p.iterations,
            periodic: boundary == Boundary::Periodic,
            taps,
            weight,
            precond,
        })
    }

    #[inline]
    fn index(&self, x: isize) -> usize {
        let w = self.w as isize;
        if self.periodic {
            x.rem_euclid(w) as usize
        } else {
            x.clamp(0, w - 1) as usize
        }
    }

    fn forward(&self, e: &[f64], out: &mut [f64]) {
        let (w, n_u) = (self.w, self.n_u);
        out.iter_mut().for_each(|v| *v = 0.0);
        for m in 0..self.n_f {
            let acc = &mut out[m * w..(m + 1) * w];
            let wt = self.weight.row(m);
            for j in 0..n_u {
                let tap = &self.taps[m * n_u + j];
                let row = &e[j * w..(j + 1) * w];
                if self.periodic {
                    for x in tap.lo..tap.hi {
                        let mut v = 0.0;
                        for k in 0..tap.n {
                            v += tap.weights[k] * row[self.index(x as isize + tap.base + k as isize)];
                        }
                        acc[x] += wt[x] * v;
                    }
                } else {
                    let (a, b) = tap.interior(w);
                    for x in (tap.lo..a).chain(b..tap.hi) {
                        acc[x] += wt[x] * tap.read(row, x);
                    }
                    let tw = &tap.weights[..tap.n];
                    for x in a..b {
                        let start = (x as isize + tap.base) as usize;
                        let v: f64 = tw.iter().zip(&row[start..start + tap.n]).map(|(p, q)| p * q).sum();
                        acc[x] += wt[x] * v;
                    }
                }
            }
        }
    }

    fn adjoint(&self, r: &[f64], out: &mut [f64]) {
        let (w, n_u) = (self.w, self.n_u);
        out.iter_mut().for_each(|v| *v = 0.0);
        for m in 0..self.n_f {
            let rm = &r[m * w..(m + 1) * w];
            let wt = self.weight.row(m);
            for j in 0..n_u {
                let tap = &self.taps[m * n_u + j];
                let row = &mut out[j * w..(j + 1) * w];
                let (a, b) = if self.periodic { (tap.lo, tap.lo) } else { tap.interior(w) };
                for x in (tap.lo..a).chain(b..tap.hi) {
                    let g = rm[x] * wt[x];
                    for k in 0..tap.n {
                        row[self.index(x as isize + tap.base + k as isize)] += tap.weights[k] * g;
                    }
                }
                let tw = &tap.weights[..tap.n];
                for x in a..b {
                    let g = rm[x] * wt[x];
                    let start = (x as isize + tap.base) as usize;
                    for (o, p) in row[start..start + tap.n].iter_mut().zip(tw) {
                        *o += p * g;
                    }
                }
            }
        }
    }

    fn normal(&self, e: &[f64], tmp: &mut [f64], out: &mut [f64]) {
        self.forward(e, tmp);
        self.adjoint(tmp, out);
        let (w, n) = (self.w, self.n_u);
        for j in 0..n {
            for x in 0..w {
                let c = e[j * w + x];
                let mut d = 0.0;
                if j > 0 {
                    d += c - e[(j - 1) * w + x];
                }
                if j + 1 < n {
                    d += c - e[(j + 1) * w + x];
                }
                out[j * w + x] += self.lambda * d + RIDGE * c;
            }
        }
    }

    fn apply_precond(&self, r: &[f64], out: &mut [f64]) {
        let (w, n) = (self.w, self.n_u);
        let mut spec: Vec<Vec<Complex64>> = (0..n)
            .map(|j| {
                let mut b: Vec<Complex64> = r[j * w..(j + 1) * w].iter().map(|v| Complex64::new(*v, 0.0)).collect();
                fft_slice(&mut b, false);
                b
            })
            .collect();
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..w {
            let m = &self.precond[k];
            for i in 0..n {
                col[i] = (0..n).map(|j| m[(i, j)] * spec[j][k]).sum();
            }
            for i in 0..n {
                spec[i][k] = col[i];
            }
        }
        for (j, mut b) in spec.into_iter().enumerate() {
            fft_slice(&mut b, true);
            for x in 0..w {
                out[j * w + x] = b[x].re;
            }
        }
    }

    /// Per-view rows (n_u × w) whose focal stack best matches `stack`.
    fn solve(&self, stack: &Array2<f64>) -> Array2<f64> {
        let len = self.n_u * self.w;
        let f: Vec<f64> = stack.iter().cloned().collect();
        let mut tmp = vec![0.0; self.n_f * self.w];
        let mut b = vec![0.0; len];
        self.adjoint(&f, &mut b);
        let mut e = vec![0.0; len];
        let mut r = b;
        let mut z = vec![0.0; len];
        self.apply_precond(&r, &mut z);
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        let mut ap = vec![0.0; len];
        for _ in 0..self.iterations {
            if rz == 0.0 {
                break;
            }
            self.normal(&p, &mut tmp, &mut ap);
            let pap = dot(&p, &ap);
            if pap <= 0.0 {
                break;
            }
            let alpha = rz / pap;
            for i in 0..len {
                e[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            self.apply_precond(&r, &mut z);
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            for i in 0..len {
                p[i] = z[i] + beta * p[i];
            }
            rz = rz_next;
        }
        Array2::from_shape_vec((self.n_u, self.w), e).expect("n_u × w buffer")
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Per-frequency inverses of the translation-invariant normal matrix, in
/// natural FFT order.
fn preconditioner(
    taps: &[Tap],
    n_u: usize,
    n_f: usize,
    w: usize,
    lambda: f64,
) -> Result<Vec<DMatrix<Complex64>>> {
    let mut dtd = DMatrix::<Complex64>::zeros(n_u, n_u);
    for i in 0..n_u.saturating_sub(1) {
        dtd[(i, i)] += 1.0;
        dtd[(i + 1, i + 1)] += 1.0;
        dtd[(i, i + 1)] -= 1.0;
        dtd[(i + 1, i)] -= 1.0;
    }
    (0..w)
        .map(|k| {
            let freq = if k <= (w - 1) / 2 { k as f64 } else { k as f64 - w as f64 } / w as f64;
            let v = DMatrix::<Complex64>::from_fn(n_f, n_u, |m, j| {
                let tap = &taps[m * n_u + j];
                let s: Complex64 = (0..tap.n)
                    .map(|i| Complex64::from_polar(tap.weights[i], 2.0 * PI * freq * (tap.base + i as isize) as f64))
                    .sum();
                s / n_u as f64
            });
            let mut a = v.adjoint() * &v + &dtd * Complex64::new(lambda, 0.0);
            for i in 0..n_u {
                a[(i, i)] += RIDGE;
            }
            a.try_inverse()
                .ok_or_else(|| ReconstructError::Numerical(format!("singular preconditioner at bin {k}")))
        })
        .collect()
}

