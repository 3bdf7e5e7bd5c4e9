use ndarray::{s, Array2};

use crate::error::{LfError, Result};
use crate::lightfield::LightField;

/// Where an EPI was cut from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpiSource {
    /// Fixed image row `y` of view row `v`; rows of the EPI run over u.
    Row { y: usize, v: usize },
    /// Fixed image column `x` of view column `u`; rows of the EPI run over v.
    Column { x: usize, u: usize },
    Synthetic,
}

/// An epipolar plane image E(u, x): one row per view.
#[derive(Clone, Debug, PartialEq)]
pub struct Epi {
    pub data: Array2<f64>,
    pub u_ref: usize,
    pub source: EpiSource,
}

impl Epi {
    pub fn new(data: Array2<f64>, u_ref: usize) -> Result<Self> {
        let n = data.nrows();
        if u_ref >= n {
            return Err(LfError::Index(format!("u_ref {u_ref} with {n} views")));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(LfError::Invalid("non-finite EPI sample".into()));
        }
        Ok(Epi {
            data,
            u_ref,
            source: EpiSource::Synthetic,
        })
    }

    pub fn n_views(&self) -> usize {
        self.data.nrows()
    }

    pub fn width(&self) -> usize {
        self.data.ncols()
    }
}

pub fn extract_epi(lf: &LightField, fixed_row: usize, fixed_v: usize, u_ref: usize) -> Result<Epi> {
    if fixed_row >= lf.height() {
        return Err(LfError::Index(format!("row {fixed_row} of {}", lf.height())));
    }
    if fixed_v >= lf.n_v() {
        return Err(LfError::Index(format!("v {fixed_v} of {}", lf.n_v())));
    }
    let data = lf.data().slice(s![fixed_v, .., fixed_row, ..]).to_owned();
    let mut epi = Epi::new(data, u_ref)?;
    epi.source = EpiSource::Row {
        y: fixed_row,
        v: fixed_v,
    };
    Ok(epi)
}

/// The transposed cut: fixes image column `fixed_col` and view column
/// `fixed_u`, giving an `n_v x height` EPI.
pub fn extract_vertical_epi(
    lf: &LightField,
    fixed_col: usize,
    fixed_u: usize,
    v_ref: usize,
) -> Result<Epi> {
    if fixed_col >= lf.width() {
        return Err(LfError::Index(format!("column {fixed_col} of {}", lf.width())));
    }
    if fixed_u >= lf.n_u() {
        return Err(LfError::Index(format!("u {fixed_u} of {}", lf.n_u())));
    }
    let data = lf.data().slice(s![.., fixed_u, .., fixed_col]).to_owned();
    let mut epi = Epi::new(data, v_ref)?;
    epi.source = EpiSource::Column {
        x: fixed_col,
        u: fixed_u,
    };
    Ok(epi)
}
