use lf_core::fft::{fft_axis, mirror_index, shift_axis, to_complex};
use ndarray::{Array2, Axis};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectrumError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    /// Focus parameter (layer index).
    F,
    /// Angular view coordinate.
    U,
    /// Spatial pixel coordinate.
    X,
}

/// What an axis of a [`ComplexGrid`] holds. Frequency axes are stored
/// DC-centred (zero frequency at index n/2); domain axes start at index 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxisKind {
    Domain(Variable),
    Frequency(Variable),
}

impl AxisKind {
    pub fn is_frequency(self) -> bool {
        matches!(self, AxisKind::Frequency(_))
    }

    pub fn variable(self) -> Variable {
        match self {
            AxisKind::Domain(v) | AxisKind::Frequency(v) => v,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AxisKind::Domain(Variable::F) => "f",
            AxisKind::Domain(Variable::U) => "u",
            AxisKind::Domain(Variable::X) => "x",
            AxisKind::Frequency(Variable::F) => "omega_f",
            AxisKind::Frequency(Variable::U) => "omega_u",
            AxisKind::Frequency(Variable::X) => "omega_x",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Some(match s {
            "f" => AxisKind::Domain(Variable::F),
            "u" => AxisKind::Domain(Variable::U),
            "x" => AxisKind::Domain(Variable::X),
            "omega_f" => AxisKind::Frequency(Variable::F),
            "omega_u" => AxisKind::Frequency(Variable::U),
            "omega_x" => AxisKind::Frequency(Variable::X),
            _ => return None,
        })
    }

    /// Index of the sample at the negated coordinate.
    pub fn mirror(self, i: usize, n: usize) -> usize {
        if self.is_frequency() {
            mirror_index(i, n)
        } else {
            (n - i) % n
        }
    }

    fn transformed(self) -> Self {
        match self {
            AxisKind::Domain(v) => AxisKind::Frequency(v),
            AxisKind::Frequency(v) => AxisKind::Domain(v),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexGrid {
    pub data: Array2<Complex64>,
    pub axes: [AxisKind; 2],
}

impl ComplexGrid {
    pub fn new(data: Array2<Complex64>, axes: [AxisKind; 2]) -> Result<Self> {
        if data.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(SpectrumError::NonFinite);
        }
        Ok(ComplexGrid { data, axes })
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn energy(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn power(&self) -> Array2<f64> {
        self.data.mapv(|v| v.norm_sqr())
    }

    /// ‖self − other‖ / ‖other‖.
    pub fn relative_l2(&self, other: &ComplexGrid) -> Result<f64> {
        same_shape(self, other)?;
        let den = other.energy();
        if den == 0.0 {
            return Err(SpectrumError::Domain("reference grid has zero energy".into()));
        }
        let num: f64 = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((num / den).sqrt())
    }

    /// Index of the centred zero-frequency bin, or 0 for domain axes.
    pub fn origin(&self, axis: usize) -> usize {
        if self.axes[axis].is_frequency() {
            self.data.len_of(Axis(axis)) / 2
        } else {
            0
        }
    }
}

pub(crate) fn same_shape(a: &ComplexGrid, b: &ComplexGrid) -> Result<()> {
    if a.data.dim() != b.data.dim() {
        return Err(SpectrumError::Shape(format!(
            "{:?} vs {:?}",
            a.data.dim(),
            b.data.dim()
        )));
    }
    Ok(())
}

fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows < 2 || cols < 2 {
        return Err(SpectrumError::Shape(format!("grid {rows}x{cols} is below 2x2")));
    }
    Ok(())
}

/// 2D forward transform of a real grid whose axes hold `vars`.
pub fn fft2(real: &Array2<f64>, vars: [Variable; 2]) -> Result<ComplexGrid> {
    check_dims(real.nrows(), real.ncols())?;
    let grid = ComplexGrid::new(to_complex(real), [AxisKind::Domain(vars[0]), AxisKind::Domain(vars[1])])?;
    let g = fft1_axis(&grid, 1)?;
    fft1_axis(&g, 0)
}

/// Complex result of the 2D inverse transform.
pub fn ifft2_complex(grid: &ComplexGrid) -> Result<Array2<Complex64>> {
    check_dims(grid.rows(), grid.cols())?;
    if grid.axes.iter().any(|a| !a.is_frequency()) {
        return Err(SpectrumError::Axis("ifft2 needs two frequency axes".into()));
    }
    Ok(fft1_axis(&fft1_axis(grid, 0)?, 1)?.data)
}

/// Real part of the 2D inverse transform.
pub fn ifft2(grid: &ComplexGrid) -> Result<Array2<f64>> {
    Ok(ifft2_complex(grid)?.mapv(|v| v.re))
}

/// Transforms along `axis`: forward for a domain axis, inverse for a
/// frequency axis. Centring follows the axis kind.
pub fn fft1_axis(grid: &ComplexGrid, axis: usize) -> Result<ComplexGrid> {
    if axis > 1 {
        return Err(SpectrumError::Axis(format!("axis {axis}")));
    }
    let kind = grid.axes[axis];
    let ax = Axis(axis);
    let data = if kind.is_frequency() {
        let mut d = shift_axis(&grid.data, ax, false);
        fft_axis(&mut d, ax, true);
        d
    } else {
        let mut d = grid.data.clone();
        fft_axis(&mut d, ax, false);
        shift_axis(&d, ax, true)
    };
    let mut axes = grid.axes;
    axes[axis] = kind.transformed();
    Ok(ComplexGrid { data, axes })
}
