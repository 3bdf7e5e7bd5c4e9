//! Orientation analysis of an EFS in the normalized plane
//! (ω_f in cycles per layer, ω_x in cycles per pixel).
//!
//! View `u` leaves a ridge along ω_f = Δα (u − u_ref) ω_x, i.e. at angle
//! atan(Δα (u − u_ref)) from the ω_x axis.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectrumError};
use crate::grid::{AxisKind, ComplexGrid, Variable};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineOptions {
    pub n_bins: usize,
    /// Radius in bins around DC that is skipped.
    pub dc_radius: f64,
    /// Peaks below this share of the histogram maximum are ignored.
    pub peak_fraction: f64,
    pub tolerance_deg: f64,
}

impl Default for LineOptions {
    fn default() -> Self {
        LineOptions {
            n_bins: 1024,
            dc_radius: 3.0,
            peak_fraction: 0.05,
            tolerance_deg: 1.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngularHistogram {
    pub angles_deg: Vec<f64>,
    pub energy: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectedLine {
    pub angle_deg: f64,
    pub energy: f64,
    pub view: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineCensus {
    pub lines: Vec<DetectedLine>,
    pub predicted_deg: Vec<f64>,
    pub matched: usize,
    /// One detected line per view and nothing else.
    pub complete: bool,
}

impl LineCensus {
    pub fn angles(&self) -> Vec<f64> {
        self.lines.iter().map(|l| l.angle_deg).collect()
    }
}

fn check_efs(efs: &ComplexGrid) -> Result<()> {
    if efs.axes != [AxisKind::Frequency(Variable::F), AxisKind::Frequency(Variable::X)] {
        return Err(SpectrumError::Axis(format!("expected an EFS grid, got {:?}", efs.axes)));
    }
    Ok(())
}

/// Predicted ridge angle in degrees for a view offset `s = u − u_ref`.
pub fn predicted_angle_deg(delta_alpha: f64, s: f64) -> f64 {
    (delta_alpha * s).atan().to_degrees()
}

/// Ray sums of |EFS|² through DC over [−90°, 90°), inside the disk
/// inscribed in the normalized frequency square. Samples are bilinear in
/// the power grid and weighted by radius²: one factor is the polar area
/// element, the other a ramp toward the outer region where neighbouring
/// view lines are resolved. The ω_x = 0 column and a small disk around DC
/// are left out.
pub fn angular_histogram(efs: &ComplexGrid, opts: &LineOptions) -> Result<AngularHistogram> {
    check_efs(efs)?;
    let (nf, w) = efs.data.dim();
    let mut power = efs.power();
    power.column_mut(w / 2).fill(0.0);
    let (cf, cx) = ((nf / 2) as f64, (w / 2) as f64);
    let steps = 2 * nf.max(w);
    let dr = 0.5 / steps as f64;
    let mut angles = Vec::with_capacity(opts.n_bins);
    let mut energy = Vec::with_capacity(opts.n_bins);
    for i in 0..opts.n_bins {
        let th = -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * i as f64 / opts.n_bins as f64;
        let (s, c) = th.sin_cos();
        let mut sum = 0.0;
        for k in -(steps as i64)..=(steps as i64) {
            let r = k as f64 * dr;
            let (df, dx) = (nf as f64 * r * s, w as f64 * r * c);
            let radius = df.hypot(dx);
            if radius < opts.dc_radius {
                continue;
            }
            let (kf, kx) = (df + cf, dx + cx);
            if kf < 0.0 || kx < 0.0 || kf > (nf - 1) as f64 || kx > (w - 1) as f64 {
                continue;
            }
            let f0 = (kf.floor() as usize).min(nf - 2);
            let x0 = (kx.floor() as usize).min(w - 2);
            let (a, b) = (kf - f0 as f64, kx - x0 as f64);
            let p = power[[f0, x0]] * (1.0 - a) * (1.0 - b)
                + power[[f0 + 1, x0]] * a * (1.0 - b)
                + power[[f0, x0 + 1]] * (1.0 - a) * b
                + power[[f0 + 1, x0 + 1]] * a * b;
            sum += p * radius * radius;
        }
        angles.push(th.to_degrees());
        energy.push(sum);
    }
    Ok(AngularHistogram { angles_deg: angles, energy })
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(180.0);
    d.min(180.0 - d)
}

/// Finds histogram peaks and pairs them with the predicted per-view
/// angles for views `0..n_u` sheared about `u_ref`.
pub fn detect_view_lines(
    efs: &ComplexGrid,
    delta_alpha: f64,
    u_ref: f64,
    n_u: usize,
    opts: &LineOptions,
) -> Result<LineCensus> {
    if n_u < 2 {
        return Err(SpectrumError::Domain(format!("need at least 2 views, got {n_u}")));
    }
    let hist = angular_histogram(efs, opts)?;
    let n = hist.energy.len();
    let max = hist.energy.iter().cloned().fold(0.0, f64::max);
    let mut lines: Vec<DetectedLine> = (0..n)
        .filter(|&i| {
            let e = hist.energy[i];
            e > hist.energy[(i + n - 1) % n] && e >= hist.energy[(i + 1) % n] && e > opts.peak_fraction * max
        })
        .map(|i| DetectedLine {
            angle_deg: hist.angles_deg[i],
            energy: hist.energy[i],
            view: None,
        })
        .collect();
    let predicted: Vec<f64> = (0..n_u)
        .map(|u| predicted_angle_deg(delta_alpha, u as f64 - u_ref))
        .collect();

    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (li, l) in lines.iter().enumerate() {
        for (u, p) in predicted.iter().enumerate() {
            let g = angle_gap(l.angle_deg, *p);
            if g <= opts.tolerance_deg {
                pairs.push((g, li, u));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut used = vec![false; n_u];
    let mut matched = 0;
    for (_, li, u) in pairs {
        if lines[li].view.is_none() && !used[u] {
            lines[li].view = Some(u);
            used[u] = true;
            matched += 1;
        }
    }
    let complete = matched == n_u && lines.len() == n_u;
    Ok(LineCensus {
        lines,
        predicted_deg: predicted,
        matched,
        complete,
    })
}

/// Share of |EFS|² outside the double cone |ω_f| ≤ tan(half_angle)·|ω_x|
/// in the normalized plane. The ω_f = 0 row and ω_x = 0 column are left
/// out of both sums.
pub fn cone_exterior_fraction(efs: &ComplexGrid, half_angle: f64) -> Result<f64> {
    check_efs(efs)?;
    let (nf, w) = efs.data.dim();
    let slope = half_angle.tan();
    let (mut outside, mut total) = (0.0, 0.0);
    for ((i, j), v) in efs.data.indexed_iter() {
        if i == nf / 2 || j == w / 2 {
            continue;
        }
        let wf = (i as f64 - (nf / 2) as f64) / nf as f64;
        let wx = (j as f64 - (w / 2) as f64) / w as f64;
        let e = v.norm_sqr();
        total += e;
        if wf.abs() > slope * wx.abs() * (1.0 + 1e-12) {
            outside += e;
        }
    }
    if total == 0.0 {
        return Err(SpectrumError::Domain("no energy off the DC cross".into()));
    }
    Ok(outside / total)
}
