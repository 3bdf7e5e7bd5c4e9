use ndarray::Array2;

use crate::grid::ComplexGrid;

/// Mean of |g(ω) − conj(g(−ω))| over all bins.
pub fn conjugate_symmetry_deviation(g: &ComplexGrid) -> f64 {
    let (r, c) = g.data.dim();
    let mut total = 0.0;
    for i in 0..r {
        let mi = g.axes[0].mirror(i, r);
        for j in 0..c {
            let mj = g.axes[1].mirror(j, c);
            total += (g.data[[i, j]] - g.data[[mi, mj]].conj()).norm();
        }
    }
    total / (r * c) as f64
}

/// ½(g(ω) + conj(g(−ω))).
pub fn symmetrize(g: &ComplexGrid) -> ComplexGrid {
    let (r, c) = g.data.dim();
    let data = Array2::from_shape_fn((r, c), |(i, j)| {
        let m = g.data[[g.axes[0].mirror(i, r), g.axes[1].mirror(j, c)]];
        (g.data[[i, j]] + m.conj()) * 0.5
    });
    ComplexGrid { data, axes: g.axes }
}
