use lf_core::Epi;
use ndarray::Array2;

use crate::error::{RefocusError, Result};
use crate::kernel::{ShearOptions, ShiftPlan};

#[derive(Clone, Debug, PartialEq)]
pub struct ShearedEpi {
    pub epi: Epi,
    /// 1 where the sample was read from inside the source row, else 0.
    pub validity: Array2<f64>,
}

/// E_d(u, x) = E(u, x + d(u - u_ref)) with the default kernel and zero fill.
pub fn shear_epi(epi: &Epi, d: f64) -> Result<ShearedEpi> {
    shear_epi_with(epi, d, ShearOptions::default())
}

pub fn shear_epi_with(epi: &Epi, d: f64, opts: ShearOptions) -> Result<ShearedEpi> {
    if !d.is_finite() {
        return Err(RefocusError::NonFinite(d));
    }
    let (n, w) = epi.data.dim();
    let mut data = Array2::<f64>::zeros((n, w));
    let mut validity = Array2::<f64>::zeros((n, w));
    for u in 0..n {
        let plan = ShiftPlan::new(d * (u as f64 - epi.u_ref as f64), opts.kernel);
        let row = epi.data.row(u).to_vec();
        let mut acc = vec![0.0; w];
        let mut cnt = vec![0.0; w];
        plan.accumulate(&row, opts.boundary, &mut acc, &mut cnt);
        data.row_mut(u).assign(&ndarray::Array1::from(acc));
        validity.row_mut(u).assign(&ndarray::Array1::from(cnt));
    }
    let mut out = Epi::new(data, epi.u_ref)?;
    out.source = epi.source;
    Ok(ShearedEpi { epi: out, validity })
}
