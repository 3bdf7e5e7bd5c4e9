use std::f64::consts::{FRAC_PI_2, PI};

use lf_core::{extract_epi, synth_lightfield, Layer, LayerDisparity, LayerMask, SceneGeometry};
use proptest::prelude::*;
use sampling::*;
use shear_refocus::{build_focal_stack, ReconstructionConfig};
use spectrum::{cone_exterior_fraction, efs_spatial_route};

#[test]
fn apex_angle_examples() {
    assert!((apex_angle(2, None).unwrap() - 2.0 * 0.5f64.atan()).abs() < 1e-15);
    assert!((apex_angle(2, None).unwrap() - 0.9273).abs() < 1e-4);
    assert!((apex_angle(201, Some(0.01)).unwrap() - FRAC_PI_2).abs() < 1e-12);
    assert!((apex_angle(5, Some(0.5)).unwrap() - FRAC_PI_2).abs() < 1e-12);
    assert!(apex_angle(1, None).is_err());
}

#[test]
fn defocus_examples() {
    assert_eq!(defocus_diameter(2.0, 5), 8.0);
    assert_eq!(defocus_diameter(0.0, 9), 0.0);
    assert_eq!(defocus_diameter(0.5, 201), 100.0);
    assert!(!is_aliased(0.5));
    assert!(!is_aliased(-1.0));
    assert!(is_aliased(1.5));
}

#[test]
fn slope_examples() {
    match aliasing_line_slope(5.0, 3.0, Some(0.01)) {
        Slope::Finite(s) => assert!((s - 50.0).abs() < 1e-9),
        Slope::Vertical => panic!(),
    }
    assert_eq!(aliasing_line_slope(3.0, 3.0, Some(0.01)), Slope::Vertical);
    assert_eq!(aliasing_line_slope(4.0, 4.0, None), Slope::Vertical);
    let (Slope::Finite(a), Slope::Finite(b)) =
        (aliasing_line_slope(7.0, 4.0, None), aliasing_line_slope(1.0, 4.0, None))
    else {
        panic!()
    };
    assert_eq!(a, -b);
}

#[test]
fn delta_alpha_bound_examples() {
    assert!((max_delta_alpha(201).unwrap() - 0.01).abs() < 1e-15);
    assert_eq!(max_delta_alpha(3).unwrap(), 1.0);
    assert_eq!(max_delta_alpha(2).unwrap(), 2.0);
}

#[test]
fn layer_bound_examples() {
    let b = min_focal_layers(4.0, 100.0, 9.0, 200, 1.0).unwrap();
    assert_eq!(b.n_f_min, 215);
    // ceil(9·96·199/800) from the closed form.
    assert_eq!(b.n_f_min, (9.0f64 * 96.0 * 199.0 / 800.0).ceil() as usize);
    let flat = min_focal_layers(7.0, 7.0, 9.0, 200, 1.0).unwrap();
    assert_eq!((flat.bound, flat.n_f_min), (0.0, 1));
    let double = min_focal_layers(4.0, 100.0, 18.0, 200, 1.0).unwrap();
    assert!((double.bound - 2.0 * b.bound).abs() < 1e-9);
    assert!(matches!(min_focal_layers(0.0, 10.0, 9.0, 200, 1.0), Err(SamplingError::Domain(_))));
    assert!(min_focal_layers(4.0, 100.0, 9.0, 200, 0.5).is_err());
}

#[test]
fn bound_matches_the_unaliased_layer_count() {
    let (kb, z_min, z_max, n_u) = (9.0, 4.0, 100.0, 200);
    let (d_min, d_max) = (kb / z_max, kb / z_min);
    let n_f = layers_for_spacing(d_min, d_max, max_delta_alpha(n_u).unwrap()).unwrap();
    let b = min_focal_layers(z_min, z_max, kb, n_u, 1.0).unwrap();
    assert!((n_f - b.bound).abs() <= 1e-9 * b.bound);
    assert!((layer_bound_for_range(d_min, d_max, n_u).unwrap() - b.bound).abs() <= 1e-9 * b.bound);
}

#[test]
fn report_is_consistent() {
    let mut geom = SceneGeometry::single_layer(0.5, 1);
    geom.z_min = 4.0;
    geom.z_max = 100.0;
    geom.focal_length = 9.0;
    geom.baseline_step = 1.0;
    let r = sampling_report(&ReportInput {
        geom: &geom,
        n_u: 9,
        u_ref: 4.0,
        delta_alpha: 0.25,
        s: 1.0,
        efs: None,
    })
    .unwrap();
    assert_eq!(r.view_slopes[4], Slope::Vertical);
    assert_eq!(r.view_slopes.len(), 9);
    assert!((r.apex_angle_discrete - FRAC_PI_2).abs() < 1e-12);
    assert!(r.apex_angle_continuous > 0.0 && r.apex_angle_continuous < PI);
    assert_eq!(r.delta_alpha_max, 0.25);
    assert!((r.n_f - r.n_f_min.bound).abs() < 1e-9);
    let json = serde_json::to_string(&r).unwrap();
    assert!(json.contains(r#"{"kind":"vertical"}"#), "{json}");
    let back: SamplingReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
}

#[test]
fn sweep_rows_cover_each_curve() {
    let rows = layer_bound_sweep(&[2.0, 4.0], 100.0, 1.0, 9.0, 200, 1.0).unwrap();
    assert_eq!(rows.len(), 99 + 97);
    let at = rows.iter().find(|r| r.z_min == 4.0 && r.z_max == 100.0).unwrap();
    assert_eq!(at.n_f_min, 215);
    assert_eq!(rows[0].n_f_min, 1);
}

#[test]
fn enough_layers_keep_energy_inside_the_cone() {
    // Slanted plane with disparity 0.1..1.0 px/view, i.e. depth 2..20 at kB = 2.
    let n_u = 49;
    let w = 128;
    let mut geom = SceneGeometry::from_layers(vec![Layer {
        disparity: LayerDisparity::Linear {
            left: 0.1,
            right: 1.0,
        },
        texture_seed: 3,
        mask: LayerMask::Opaque,
    }]);
    geom.focal_length = 2.0;
    geom.baseline_step = 1.0;
    geom.z_min = 2.0;
    geom.z_max = 20.0;
    let g = synth_lightfield(&geom, n_u, 3, w, 5).unwrap();
    let epi = extract_epi(&g.field, 1, 0, n_u / 2).unwrap();
    let bound = min_focal_layers_for(&geom, n_u, 1.0).unwrap().n_f_min;
    assert_eq!(bound, 22);
    let half = apex_angle(n_u, Some(max_delta_alpha(n_u).unwrap())).unwrap() / 2.0;
    let exterior = |n_f: usize| {
        let cfg = ReconstructionConfig::new(0.1, 1.0, n_f, n_u / 2, n_u).unwrap();
        let efs = efs_spatial_route(&build_focal_stack(&epi, &cfg).unwrap()).unwrap();
        cone_exterior_fraction(&efs, half).unwrap()
    };
    let (at, below) = (exterior(bound), exterior(bound.div_ceil(2)));
    assert!(at <= below, "at bound {at}, below {below}");
}

proptest! {
    #[test]
    fn bound_is_monotone(
        n_u in 2usize..300, kb in 0.1f64..20.0, z_min in 0.5f64..10.0, extra in 0.0f64..50.0
    ) {
        let z_max = z_min + extra;
        let b = min_focal_layers(z_min, z_max, kb, n_u, 1.0).unwrap();
        prop_assert!(b.n_f_min >= 1);
        prop_assert!(min_focal_layers(z_min, z_max, kb, n_u + 1, 1.0).unwrap().bound >= b.bound);
        prop_assert!(min_focal_layers(z_min, z_max, kb * 1.5, n_u, 1.0).unwrap().bound >= b.bound);
        prop_assert!(apex_angle(n_u + 1, None).unwrap() > apex_angle(n_u, None).unwrap());
        prop_assert!(apex_angle(n_u, Some(0.2)).unwrap() < apex_angle(n_u, Some(0.3)).unwrap());
    }

    #[test]
    fn bound_grows_with_depth_spread_at_fixed_product(p in 4.0f64..100.0, a in 0.1f64..0.9, b in 0.1f64..0.9) {
        // Z_min·Z_max = p fixed; spread grows as Z_min shrinks.
        let (lo, hi) = (a.min(b), a.max(b));
        let spread = |t: f64| {
            let z_min = p.sqrt() * t;
            min_focal_layers(z_min, p / z_min, 9.0, 50, 1.0).unwrap().bound
        };
        prop_assert!(spread(lo) >= spread(hi) - 1e-9);
    }
}
