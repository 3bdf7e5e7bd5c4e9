use ndarray::ArrayView2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectrumError};
use crate::grid::{same_shape, ComplexGrid};

/// Fraction of reference energy missing from a test spectrum, with and
/// without the DC bin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyLoss {
    pub loss: f64,
    pub loss_ac: f64,
}

fn dc_of(g: &ComplexGrid) -> (usize, usize) {
    (g.origin(0), g.origin(1))
}

/// 1 − Σ|test|² over bins where both grids are nonzero, over Σ|reference|².
pub fn spectral_energy_loss(reference: &ComplexGrid, test: &ComplexGrid) -> Result<EnergyLoss> {
    same_shape(reference, test)?;
    let dc = dc_of(reference);
    let zero = Complex64::new(0.0, 0.0);
    let (mut kept, mut kept_ac, mut total, mut total_ac) = (0.0, 0.0, 0.0, 0.0);
    for ((idx, r), t) in reference.data.indexed_iter().zip(test.data.iter()) {
        let e = r.norm_sqr();
        let k = if *t != zero && *r != zero { t.norm_sqr() } else { 0.0 };
        total += e;
        kept += k;
        if idx != dc {
            total_ac += e;
            kept_ac += k;
        }
    }
    finish(kept, kept_ac, total, total_ac)
}

/// Share of reference energy on bins where `keep` is false.
pub fn energy_outside(reference: &ComplexGrid, keep: ArrayView2<bool>) -> Result<EnergyLoss> {
    if keep.dim() != reference.data.dim() {
        return Err(SpectrumError::Shape(format!(
            "mask {:?} vs grid {:?}",
            keep.dim(),
            reference.data.dim()
        )));
    }
    let dc = dc_of(reference);
    let (mut kept, mut kept_ac, mut total, mut total_ac) = (0.0, 0.0, 0.0, 0.0);
    for ((idx, r), k) in reference.data.indexed_iter().zip(keep.iter()) {
        let e = r.norm_sqr();
        total += e;
        if *k {
            kept += e;
        }
        if idx != dc {
            total_ac += e;
            if *k {
                kept_ac += e;
            }
        }
    }
    finish(kept, kept_ac, total, total_ac)
}

fn finish(kept: f64, kept_ac: f64, total: f64, total_ac: f64) -> Result<EnergyLoss> {
    if total == 0.0 {
        return Err(SpectrumError::Domain("reference spectrum has zero energy".into()));
    }
    let loss_ac = if total_ac > 0.0 { 1.0 - kept_ac / total_ac } else { 0.0 };
    Ok(EnergyLoss {
        loss: 1.0 - kept / total,
        loss_ac,
    })
}
