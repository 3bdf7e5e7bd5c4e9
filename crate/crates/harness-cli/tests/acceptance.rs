//! Acceptance run: one PASS/FAIL line per criterion, details indented
//! below. `ACCEPTANCE_ONLY=7,9` restricts the run to some criteria and
//! `ACCEPTANCE_STRICT=1` exits non-zero when any criterion fails.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use harness_cli::{evaluate, run_experiment, ExperimentSpec, InputSpec, SweepSpec, ViewMetrics};
use lf_core::{
    downsample_views, extract_epi, synth_lightfield, synth_lightfield_4d, AngularAxis,
    Epi, Layer, LayerDisparity, LayerMask, LightField, SceneGeometry, TextureParams,
};
use ndarray::{Array2, Array3};
use reconstruct::{
    back_project, full_parallax_reconstruct, multi_reference_reconstruct, nearest_copy, reconstruct_lightfield,
    vertical_copy_baseline, ClassicalParams, CompletionBackend, PassOrder, ReconstructOptions, Reconstruction,
    TargetGeometry, WedgeMask,
};
use sampling::{apex_angle, layer_bound_for_range, max_delta_alpha, min_focal_layers, min_focal_layers_for};
use shear_refocus::{build_focal_stack, Boundary, Kernel, ReconstructionConfig, ShearOptions};
use spectrum::{
    cone_exterior_fraction, conjugate_symmetry_deviation, detect_view_lines, efs_slice_route, efs_spatial_route,
    energy_outside, fft2, predicted_angle_deg, LineCensus, LineOptions, Variable,
};

struct Outcome {
    pass: bool,
    summary: String,
    info: Vec<String>,
}

fn main() {
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let criteria: [(usize, &str, fn() -> Outcome); 11] = [
        (1, "dual-route EFS equivalence", c1),
        (2, "conjugate symmetry", c2),
        (3, "view-line census", c3),
        (4, "depth invariance", c4),
        (5, "sampling bound", c5),
        (6, "projection chain", c6),
        (7, "end-to-end reconstruction", c7),
        (8, "parameter-sweep shape", c8),
        (9, "multi-reference", c9),
        (10, "full parallax", c10),
        (11, "determinism", c11),
    ];
    let mut failed = Vec::new();
    for (n, title, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&n)) {
            continue;
        }
        let t = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} {n:>2} {title}: {} [{:.1} s]", o.summary, t.elapsed().as_secs_f64());
        for line in &o.info {
            println!("        {line}");
        }
        if !o.pass {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        // Verdicts are reported above; set ACCEPTANCE_STRICT to turn them
        // into a failing exit status.
        if std::env::var_os("ACCEPTANCE_STRICT").is_some() {
            std::process::exit(1);
        }
    }
}

// Shared scenes and helpers.

fn cubic() -> ShearOptions {
    ShearOptions {
        kernel: Kernel::Cubic,
        ..Default::default()
    }
}

fn periodic_field(d: f64, n: usize, h: usize, w: usize, seed: u64) -> LightField {
    let mut geom = SceneGeometry::single_layer(d, seed);
    geom.wrap_x = true;
    synth_lightfield(&geom, n, h, w, seed).unwrap().field
}

fn dual_route_scenes() -> Vec<(f64, LightField)> {
    [0.1, 0.15, 0.2, 0.05, -0.05]
        .iter()
        .enumerate()
        .map(|(i, &d)| (d, periodic_field(d, 50, 128, 128, i as u64)))
        .collect()
}

fn dual_route_cfg() -> ReconstructionConfig {
    ReconstructionConfig::new(-0.1, 0.3, 64, 25, 50).unwrap()
}

/// Disparity of the dense 200-view scenes: 1 px per source step after 15×
/// downsampling.
const D_DENSE: f64 = 1.0 / 15.0;
const FACTOR: usize = 15;

fn single_layer_scene() -> SceneGeometry {
    SceneGeometry::single_layer(D_DENSE, 3)
}

fn two_layer_scene() -> SceneGeometry {
    SceneGeometry::from_layers(vec![
        Layer::constant(0.6 * D_DENSE, 5),
        Layer::constant(D_DENSE, 9).with_mask(LayerMask::HalfPlane {
            edge: 128.0,
            keep_left: true,
        }),
    ])
}

struct Case {
    sparse: LightField,
    truth: LightField,
}

fn case(geom: &SceneGeometry, h: usize) -> Case {
    let dense = synth_lightfield(geom, 200, h, 256, 7).unwrap().field;
    let sparse = downsample_views(&dense, FACTOR, false).unwrap();
    let nt = (sparse.n_u() - 1) * FACTOR + 1;
    let truth = dense.select(AngularAxis::U, &(0..nt).collect::<Vec<_>>()).unwrap();
    Case { sparse, truth }
}

fn dense_cfg() -> ReconstructionConfig {
    ReconstructionConfig::new(-12.0, 14.0, 256, 6, 196).unwrap().with_shear(cubic())
}

fn classical() -> CompletionBackend {
    CompletionBackend::Classical(ClassicalParams::default())
}

fn oracle(c: &Case) -> CompletionBackend {
    CompletionBackend::Oracle(Arc::new(c.truth.clone()))
}

fn run(c: &Case, cfg: &ReconstructionConfig, b: &CompletionBackend) -> Reconstruction {
    reconstruct_lightfield(&c.sparse, cfg, b, ReconstructOptions::default()).unwrap()
}

fn trim(n: usize) -> usize {
    n / 10
}

fn central(n: usize) -> impl Fn(usize) -> bool {
    move |j| j >= trim(n) && j < n - trim(n)
}

fn outer(n: usize) -> impl Fn(usize) -> bool {
    move |j| j < trim(n) || j >= n - trim(n)
}

fn mean_psnr(views: &[ViewMetrics], keep: impl Fn(usize) -> bool) -> f64 {
    let sel: Vec<f64> = views.iter().filter(|m| keep(m.u)).map(|m| m.psnr).collect();
    sel.iter().sum::<f64>() / sel.len() as f64
}

fn min_psnr(views: &[ViewMetrics], keep: impl Fn(usize) -> bool) -> f64 {
    views.iter().filter(|m| keep(m.u)).map(|m| m.psnr).fold(f64::INFINITY, f64::min)
}

fn and(a: &Array3<bool>, b: &Array3<bool>) -> Array3<bool> {
    let mut out = a.clone();
    out.zip_mut_with(b, |x, y| *x = *x && *y);
    out
}

fn census(epi: &Epi, n_f: usize, delta_alpha: f64) -> LineCensus {
    let n_u = epi.n_views();
    let half = 0.5 * (n_f - 1) as f64 * delta_alpha;
    let cfg = ReconstructionConfig::new(-half, half, n_f, epi.u_ref, n_u).unwrap();
    let efs = efs_spatial_route(&build_focal_stack(epi, &cfg).unwrap()).unwrap();
    detect_view_lines(&efs, cfg.delta_alpha, epi.u_ref as f64, n_u, &LineOptions::default()).unwrap()
}

fn impulse_epi(n_u: usize, w: usize) -> Epi {
    let mut data = Array2::zeros((n_u, w));
    data.column_mut(w / 2).fill(1.0);
    Epi::new(data, (n_u - 1) / 2).unwrap()
}

/// Exact count and every line within 1.5° of its prediction.
fn census_ok(c: &LineCensus, n_u: usize, delta_alpha: f64, u_ref: f64) -> (bool, f64) {
    let mut worst = 0.0f64;
    let mut ok = c.complete && c.lines.len() == n_u;
    for l in &c.lines {
        match l.view {
            Some(u) => worst = worst.max((l.angle_deg - predicted_angle_deg(delta_alpha, u as f64 - u_ref)).abs()),
            None => ok = false,
        }
    }
    (ok && worst <= 1.5, worst)
}

fn envelope(c: &LineCensus) -> f64 {
    let a = c.angles();
    a.iter().cloned().fold(f64::MIN, f64::max) - a.iter().cloned().fold(f64::MAX, f64::min)
}

// Criteria.

fn c1() -> Outcome {
    let t = Instant::now();
    let cfg = dual_route_cfg();
    let wrapped = dual_route_cfg().with_shear(ShearOptions {
        boundary: Boundary::Periodic,
        ..Default::default()
    });
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut info = Vec::new();
    for (d, lf) in dual_route_scenes() {
        let (mut scene_worst, mut over, mut num, mut den) = (0.0f64, 0, 0.0, 0.0);
        let mut wrapped_worst = 0.0f64;
        for y in 0..lf.height() {
            let epi = extract_epi(&lf, y, 0, cfg.u_ref).unwrap();
            let spatial = efs_spatial_route(&build_focal_stack(&epi, &cfg).unwrap()).unwrap();
            let slice = efs_slice_route(&epi, &cfg).unwrap().efs;
            let r = slice.relative_l2(&spatial).unwrap();
            scene_worst = scene_worst.max(r);
            over += usize::from(r > 0.05);
            let n2 = spatial.data.iter().map(|z| z.norm_sqr()).sum::<f64>();
            num += r * r * n2;
            den += n2;
            let periodic = efs_spatial_route(&build_focal_stack(&epi, &wrapped).unwrap()).unwrap();
            wrapped_worst = wrapped_worst.max(efs_slice_route(&epi, &wrapped).unwrap().efs.relative_l2(&periodic).unwrap());
            count += 1;
        }
        info.push(format!(
            "d = {d:+.2}: worst EPI {scene_worst:.4} ({over} over 0.05), pooled {:.4}; periodic boundary worst {wrapped_worst:.4}",
            (num / den).sqrt()
        ));
        worst = worst.max(scene_worst);
    }
    let secs = t.elapsed().as_secs_f64();
    Outcome {
        pass: worst <= 0.05 && secs <= 60.0,
        summary: format!("max relative L2 {worst:.4} (<= 0.05) over {count} EPIs of 5 scenes, {secs:.1} s (<= 60 s)"),
        info,
    }
}

fn c2() -> Outcome {
    let cfg = dual_route_cfg();
    let mut worst_spatial = 0.0f64;
    let mut n = 0;
    for (_, lf) in dual_route_scenes() {
        for y in (0..lf.height()).step_by(4) {
            let epi = extract_epi(&lf, y, 0, cfg.u_ref).unwrap();
            let g = efs_spatial_route(&build_focal_stack(&epi, &cfg).unwrap()).unwrap();
            worst_spatial = worst_spatial.max(conjugate_symmetry_deviation(&g) / g.max_magnitude());
            n += 1;
        }
    }
    // Completed EFS grids, both back-ends, on a crop of the dense scenes.
    let mut worst_completed = 0.0f64;
    for geom in [single_layer_scene(), two_layer_scene()] {
        let c = case(&geom, 8);
        for b in [oracle(&c), classical()] {
            worst_completed = worst_completed.max(run(&c, &dense_cfg(), &b).efs_symmetry);
        }
    }
    Outcome {
        pass: worst_spatial <= 1e-9 && worst_completed <= 1e-9,
        summary: format!(
            "spatial-route worst {worst_spatial:.2e} over {n} grids, completed worst {worst_completed:.2e} (relative to peak, <= 1e-9)"
        ),
        info: vec![],
    }
}

fn c3() -> Outcome {
    let (w, n_f) = (128, 128);
    let mut pass = true;
    let mut info = Vec::new();
    for n_u in [5, 14, 25] {
        let epi = impulse_epi(n_u, w);
        let u_ref = epi.u_ref as f64;
        let reach = (n_u as f64 - 1.0 - u_ref).max(u_ref);
        let da = 0.95 / reach;
        let c = census(&epi, n_f, da);
        let (ok, worst) = census_ok(&c, n_u, da, u_ref);
        pass &= ok;
        info.push(format!("N_u = {n_u}: {} lines, {} matched, worst error {worst:.2}°", c.lines.len(), c.matched));
    }
    // Downsampling the 25-view scene: fewer lines, same envelope.
    let n_u = 25;
    let da = 0.95 / 12.0;
    let full = census(&impulse_epi(n_u, w), n_f, da);
    let env_full = envelope(&full);
    for factor in [2, 3] {
        let lf = LightField::new(
            impulse_epi(n_u, w).data.insert_axis(ndarray::Axis(0)).insert_axis(ndarray::Axis(2)),
            1.0,
            1.0,
        )
        .unwrap();
        let small = downsample_views(&lf, factor, false).unwrap();
        let n = small.n_u();
        let epi = extract_epi(&small, 0, 0, (n - 1) / 2).unwrap();
        let da_s = da * factor as f64;
        let c = census(&epi, n_f, da_s);
        let (ok, _) = census_ok(&c, n, da_s, epi.u_ref as f64);
        let apex = apex_angle(n, Some(da_s)).unwrap().to_degrees();
        let env = envelope(&c);
        let same = (env - apex).abs() <= 2.0 && (env - env_full).abs() <= 2.0;
        pass &= ok && c.lines.len() != full.lines.len() && same;
        info.push(format!(
            "{n_u} -> {n} views (x{factor}): {} lines, envelope {env:.2}° vs apex {apex:.2}° and full {env_full:.2}°",
            c.lines.len()
        ));
    }
    Outcome {
        pass,
        summary: "exact line counts within 1.5°, downsampled envelopes within 2°".into(),
        info,
    }
}

fn c4() -> Outcome {
    let (n_u, n_f, w) = (9, 128, 128);
    let da = 0.95 / 4.0;
    let sets: Vec<LineCensus> = [0.3, 0.8]
        .iter()
        .map(|&d| {
            let mut geom = SceneGeometry::single_layer(d, 11);
            geom.texture = TextureParams {
                cutoff: 0.5,
                ..TextureParams::default()
            };
            let g = synth_lightfield(&geom, n_u, 3, w, 2).unwrap();
            census(&extract_epi(&g.field, 1, 0, 4).unwrap(), n_f, da)
        })
        .collect();
    let mut a = sets[0].angles();
    let mut b = sets[1].angles();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let pass = sets.iter().all(|c| c.complete) && a.len() == b.len() && worst <= 1.5;
    Outcome {
        pass,
        summary: format!("{} vs {} lines at d = 0.3 and 0.8, worst pairwise gap {worst:.2}° (<= 1.5°)", a.len(), b.len()),
        info: vec![],
    }
}

fn c5() -> Outcome {
    let b = min_focal_layers(4.0, 100.0, 9.0, 200, 1.0).unwrap();
    let direct = (1.0f64 * 9.0 * (100.0 - 4.0) * 199.0 / (2.0 * 100.0 * 4.0)).ceil() as usize;
    // Slanted plane, 0.1..1.0 px/view.
    let n_u = 49;
    let mut geom = SceneGeometry::from_layers(vec![Layer {
        disparity: LayerDisparity::Linear { left: 0.1, right: 1.0 },
        texture_seed: 3,
        mask: LayerMask::Opaque,
    }]);
    geom.focal_length = 2.0;
    geom.z_min = 2.0;
    geom.z_max = 20.0;
    let g = synth_lightfield(&geom, n_u, 3, 128, 5).unwrap();
    let epi = extract_epi(&g.field, 1, 0, n_u / 2).unwrap();
    let bound = min_focal_layers_for(&geom, n_u, 1.0).unwrap().n_f_min;
    let half = apex_angle(n_u, Some(max_delta_alpha(n_u).unwrap())).unwrap() / 2.0;
    let exterior = |n_f: usize| {
        let cfg = ReconstructionConfig::new(0.1, 1.0, n_f, n_u / 2, n_u).unwrap();
        cone_exterior_fraction(&efs_spatial_route(&build_focal_stack(&epi, &cfg).unwrap()).unwrap(), half).unwrap()
    };
    let (at, below) = (exterior(bound), exterior(bound.div_ceil(2)));
    Outcome {
        pass: b.n_f_min == 215 && direct == 215 && at <= below,
        summary: format!(
            "N_fmin = {} (direct formula {direct}); cone-exterior energy {at:.4} at N_f = {bound} vs {below:.4} at {}",
            b.n_f_min,
            bound.div_ceil(2)
        ),
        info: vec![],
    }
}

fn c6() -> Outcome {
    let n = 33;
    let cfg = ReconstructionConfig::new(-1.0, 1.0, 96, 16, n).unwrap();
    let bound = layer_bound_for_range(cfg.d_min, cfg.d_max, n).unwrap();
    let wedge = WedgeMask::from_config(&cfg, n, 128).unwrap();
    let mut worst_rel = 0.0f64;
    let mut outside_zero = true;
    for (d, seed) in [(0.3, 1), (-0.45, 4), (0.7, 9)] {
        let lf = periodic_field(d, n, 2, 128, seed);
        let epi = extract_epi(&lf, 1, 0, n / 2).unwrap();
        let slice = efs_slice_route(&epi, &cfg).unwrap();
        let spec = back_project(&slice.hybrid, &cfg.f_values(), &wedge, 16.0).unwrap();
        let truth = fft2(&epi.data, [Variable::U, Variable::X]).unwrap();
        let (mut num, mut den) = (0.0, 0.0);
        for ((a, b), keep) in wedge.mask.indexed_iter() {
            if *keep {
                num += (spec.data[[a, b]] - truth.data[[a, b]]).norm_sqr();
                den += truth.data[[a, b]].norm_sqr();
            } else if spec.data[[a, b]].norm() != 0.0 {
                outside_zero = false;
            }
        }
        worst_rel = worst_rel.max((num / den).sqrt());
    }
    let mut losses = Vec::new();
    for (d, seed) in [(0.5, 1), (-0.25, 2), (0.1, 3), (0.8, 4)] {
        let m = 64;
        let g = synth_lightfield(&SceneGeometry::single_layer(d, seed), m, 2, 128, seed).unwrap();
        let epi = extract_epi(&g.field, 0, 0, m / 2).unwrap();
        let spec = fft2(&epi.data, [Variable::U, Variable::X]).unwrap();
        let w = WedgeMask::new(-1.0, 1.0, TargetGeometry::new(m, m).unwrap(), 128);
        losses.push(energy_outside(&spec, w.mask.view()).unwrap().loss);
    }
    let (lo, hi) = losses.iter().fold((f64::MAX, 0.0f64), |(a, b), l| (a.min(*l), b.max(*l)));
    let mean = losses.iter().sum::<f64>() / losses.len() as f64;
    Outcome {
        pass: cfg.n_f as f64 >= bound && worst_rel <= 0.02 && outside_zero && lo > 0.0 && hi <= 0.10,
        summary: format!(
            "round trip {worst_rel:.4} (<= 0.02) at N_f = {} >= {bound}; out-of-wedge zero: {outside_zero}; wedge loss {:.2}%..{:.2}% (mean {:.2}%)",
            cfg.n_f,
            100.0 * lo,
            100.0 * hi,
            100.0 * mean
        ),
        info: vec![],
    }
}

fn c7() -> Outcome {
    let cfg = dense_cfg();
    let mut info = Vec::new();
    let mut pass = true;

    let t = Instant::now();
    let single = case(&single_layer_scene(), 256);
    let gen_secs = t.elapsed().as_secs_f64();
    let nt = single.truth.n_u();
    let interp = |j: usize| central(nt)(j) && TargetGeometry::new(14, nt).unwrap().source_at(j).is_none();

    for (name, c) in [("single-layer", &single), ("two-layer", &case(&two_layer_scene(), 256))] {
        let t = Instant::now();
        let r = run(c, &cfg, &oracle(c));
        let views = evaluate(&c.truth, &r.field, Some(&r.valid)).unwrap();
        let secs = t.elapsed().as_secs_f64();
        let mean = mean_psnr(&views, central(nt));
        pass &= mean >= 35.0 && secs <= 300.0;
        info.push(format!(
            "oracle, {name}: central-80% mean {mean:.2} dB (>= 35), min {:.2} dB, {secs:.1} s",
            min_psnr(&views, central(nt))
        ));
    }

    let mut margins = Vec::new();
    for (name, c) in [("single-layer", Some(&single)), ("two-layer", None)] {
        let owned;
        let c = match c {
            Some(c) => c,
            None => {
                owned = case(&two_layer_scene(), 256);
                &owned
            }
        };
        let t = Instant::now();
        let r = run(c, &cfg, &classical());
        let views = evaluate(&c.truth, &r.field, Some(&r.valid)).unwrap();
        let secs = t.elapsed().as_secs_f64() + if name == "single-layer" { gen_secs } else { 0.0 };
        let copy = nearest_copy(&c.sparse, r.target).unwrap();
        let base = evaluate(&c.truth, &copy, Some(&r.valid)).unwrap();
        let (a, b) = (mean_psnr(&views, interp), mean_psnr(&base, interp));
        margins.push(a - b);
        info.push(format!(
            "classical, {name}: interpolated views {a:.2} dB vs nearest copy {b:.2} dB ({:+.2} dB), {secs:.1} s",
            a - b
        ));
        if name == "single-layer" {
            pass &= a - b >= 3.0 && secs <= 300.0;
        }
    }
    info.push("the classical margin is judged on the single-layer scene; two-layer is reported only".into());
    Outcome {
        pass,
        summary: format!(
            "oracle >= 35 dB on both scenes; classical beats nearest copy by {:+.2} dB (>= 3) on the single-layer scene",
            margins[0]
        ),
        info,
    }
}

fn c8() -> Outcome {
    let c = case(&single_layer_scene(), 32);
    let base = dense_cfg();
    let nt = c.truth.n_u();
    let bound = layer_bound_for_range(base.d_min, base.d_max, c.sparse.n_u()).unwrap();
    // Layer counts are (d_max − d_min)/Δα, so a config holds one more layer.
    let n_f = |layers: f64| layers.ceil() as usize + 1;
    let variants = [
        ("range x0.8", base.scaled_range(0.8).unwrap()),
        ("range x1.0", base.clone()),
        ("range x1.2", base.scaled_range(1.2).unwrap()),
        ("N_f below", base.with_n_f(n_f(bound / 2.0)).unwrap()),
        ("N_f at", base.with_n_f(n_f(bound)).unwrap()),
        ("N_f x1.5", base.with_n_f(n_f(1.5 * bound)).unwrap()),
    ];
    let runs: Vec<Reconstruction> = variants.iter().map(|(_, cfg)| run(&c, cfg, &classical())).collect();
    let mask = runs.iter().skip(1).fold(runs[0].valid.clone(), |m, r| and(&m, &r.valid));
    let mut psnr = Vec::new();
    let mut info = Vec::new();
    for ((label, cfg), r) in variants.iter().zip(&runs) {
        let views = evaluate(&c.truth, &r.field, Some(&mask)).unwrap();
        let p = mean_psnr(&views, central(nt));
        let s = views.iter().filter(|m| central(nt)(m.u)).map(|m| m.ssim).sum::<f64>()
            / views.iter().filter(|m| central(nt)(m.u)).count() as f64;
        info.push(format!("{label}: [{:.2}, {:.2}], N_f = {}: {p:.2} dB, SSIM {s:.4}", cfg.d_min, cfg.d_max, cfg.n_f));
        psnr.push(p);
    }
    let pass = psnr[0] < psnr[1] && psnr[3] < psnr[4] && (psnr[4] - psnr[5]).abs() <= 1.0;
    Outcome {
        pass,
        summary: format!(
            "0.8x {:.2} < 1.0x {:.2}; below {:.2} < at {:.2}; |at - 1.5x| = {:.2} dB (<= 1); bound {bound:.0} layers",
            psnr[0],
            psnr[1],
            psnr[3],
            psnr[4],
            (psnr[4] - psnr[5]).abs()
        ),
        info,
    }
}

fn c9() -> Outcome {
    let cfg = dense_cfg();
    let refs = [4, 6, 8];
    let mut pass = true;
    let mut info = Vec::new();
    for (name, geom) in [("single-layer", single_layer_scene()), ("two-layer", two_layer_scene())] {
        let c = case(&geom, 32);
        let nt = c.truth.n_u();
        for (bname, b) in [("classical", classical()), ("oracle", oracle(&c))] {
            let single = run(&c, &cfg, &b);
            let multi = multi_reference_reconstruct(&c.sparse, &cfg, &refs, &b, ReconstructOptions::default()).unwrap();
            let s = mean_psnr(&evaluate(&c.truth, &single.field, Some(&single.valid)).unwrap(), outer(nt));
            let m = mean_psnr(&evaluate(&c.truth, &multi.field, Some(&single.valid)).unwrap(), outer(nt));
            pass &= m >= s;
            info.push(format!("{name}, {bname}: outer-20% three-reference {m:.2} dB vs single {s:.2} dB ({:+.2})", m - s));
        }
    }
    Outcome {
        pass,
        summary: format!("references {refs:?} vs 6, three-reference >= single on every scene and back-end"),
        info,
    }
}

fn c10() -> Outcome {
    let n = 17;
    let geom = SceneGeometry::single_layer(0.5, 4);
    let dense = synth_lightfield_4d(&geom, n, n, 96, 128, 3).unwrap().field;
    let sparse = lf_core::downsample_views_along(&dense, 2, false, AngularAxis::U).unwrap();
    let sparse = lf_core::downsample_views_along(&sparse, 2, false, AngularAxis::V).unwrap();
    let cfg = ReconstructionConfig::new(-3.0, 5.0, 64, 4, n).unwrap().with_shear(cubic());
    let b = classical();
    let opts = ReconstructOptions::default();
    let full = full_parallax_reconstruct(&sparse, &cfg, &cfg, &b, PassOrder::HorizontalFirst, opts).unwrap();
    let copy = vertical_copy_baseline(&sparse, &cfg, n, &b, opts).unwrap();
    let mask = and(&full.valid, &copy.valid);
    let mean = |lf: &LightField| {
        let v = evaluate(&dense, lf, Some(&mask)).unwrap();
        v.iter().map(|m| m.psnr).sum::<f64>() / v.len() as f64
    };
    let (a, c) = (mean(&full.field), mean(&copy.field));
    Outcome {
        pass: full.field.n_u() == n && full.field.n_v() == n && a >= c,
        summary: format!(
            "{}x{} -> {}x{}: full parallax {a:.2} dB vs vertical-copy baseline {c:.2} dB",
            sparse.n_v(),
            sparse.n_u(),
            full.field.n_v(),
            full.field.n_u()
        ),
        info: vec![],
    }
}

fn files_equal(a: &[std::path::PathBuf], b: &[std::path::PathBuf]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.file_name() == y.file_name() && std::fs::read(x).unwrap() == std::fs::read(y).unwrap()
        })
}

fn c11() -> Outcome {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("specs/smoke.json")).unwrap();
    let smoke = ExperimentSpec::from_json(&text).unwrap();
    let mut specs = vec![smoke.clone()];
    let mut s = smoke.clone();
    s.name = "classical sweep".into();
    s.backend = harness_cli::BackendSpec::Classical { params: ClassicalParams::default() };
    s.sweep = Some(SweepSpec {
        range_scales: vec![0.8, 1.0, 1.2],
        n_f: vec![32],
    });
    s.save_field = true;
    specs.push(s);
    let mut s = smoke.clone();
    s.name = "multi-reference".into();
    s.refs = vec![1, 2, 3];
    specs.push(s);
    let mut s = smoke;
    s.name = "full parallax".into();
    if let InputSpec::Generate { n_u, n_v, height, width, .. } = &mut s.input {
        (*n_u, *n_v, *height, *width) = (9, 9, 24, 32);
    }
    s.downsample = 2;
    specs.push(s);

    let root = tempfile::tempdir().unwrap();
    let mut pass = true;
    let mut info = Vec::new();
    for (i, spec) in specs.iter_mut().enumerate() {
        spec.output = root.path().join(format!("{i}a"));
        let a = run_experiment(spec).unwrap();
        spec.output = root.path().join(format!("{i}b"));
        spec.sequential = !spec.sequential;
        let b = run_experiment(spec).unwrap();
        let same = files_equal(&a.files, &b.files);
        pass &= same;
        info.push(format!("{}: {} files, identical: {same}", spec.name, a.files.len()));
    }
    Outcome {
        pass,
        summary: "repeated runs (threaded and sequential) write byte-identical outputs".into(),
        info,
    }
}
