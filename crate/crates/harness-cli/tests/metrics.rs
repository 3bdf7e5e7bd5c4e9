use approx::assert_relative_eq;
use harness_cli::{psnr, psnr_masked, ssim, ssim_map, ssim_masked, MetricError, PSNR_CAP};
use ndarray::Array2;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn noise(h: usize, w: usize, seed: u64) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Array2::from_shape_fn((h, w), |_| rng.random::<f64>())
}

/// Direct per-window SSIM with a 2D Gaussian, no separability.
fn ssim_brute(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    let (h, w) = a.dim();
    let mut g = [[0.0; 11]; 11];
    let mut total = 0.0;
    for (i, row) in g.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let (di, dj) = (i as f64 - 5.0, j as f64 - 5.0);
            *v = (-(di * di + dj * dj) / (2.0 * 1.5 * 1.5)).exp();
            total += *v;
        }
    }
    let (c1, c2) = (1e-4, 9e-4);
    let mut sum = 0.0;
    let mut n = 0.0;
    for y in 0..=h - 11 {
        for x in 0..=w - 11 {
            let (mut ma, mut mb, mut aa, mut bb, mut ab) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for i in 0..11 {
                for j in 0..11 {
                    let k = g[i][j] / total;
                    let (p, q) = (a[[y + i, x + j]], b[[y + i, x + j]]);
                    ma += k * p;
                    mb += k * q;
                    aa += k * p * p;
                    bb += k * q * q;
                    ab += k * p * q;
                }
            }
            let (va, vb, cov) = (aa - ma * ma, bb - mb * mb, ab - ma * mb);
            sum += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
            n += 1.0;
        }
    }
    sum / n
}

#[test]
fn identical_images_hit_the_cap() {
    let a = noise(16, 16, 1);
    assert_eq!(psnr(a.view(), a.view()).unwrap(), PSNR_CAP);
    assert_relative_eq!(ssim(a.view(), a.view()).unwrap(), 1.0, epsilon = 1e-12);
}

#[test]
fn uniform_offset_of_a_tenth_is_20_db() {
    let a = noise(12, 12, 2).mapv(|v| 0.8 * v);
    let b = a.mapv(|v| v + 0.1);
    assert_relative_eq!(psnr(a.view(), b.view()).unwrap(), 20.0, epsilon = 1e-9);
}

#[test]
fn checkerboard_against_its_inverse_is_0_db() {
    let a = Array2::from_shape_fn((8, 8), |(y, x)| ((x + y) % 2) as f64);
    let b = a.mapv(|v| 1.0 - v);
    assert_relative_eq!(psnr(a.view(), b.view()).unwrap(), 0.0, epsilon = 1e-12);
}

#[test]
fn masked_psnr_ignores_masked_pixels() {
    let a = Array2::zeros((4, 4));
    let mut b = Array2::from_elem((4, 4), 0.1);
    b[[0, 0]] = 1.0;
    let mut m = Array2::from_elem((4, 4), true);
    m[[0, 0]] = false;
    assert_relative_eq!(psnr_masked(a.view(), b.view(), Some(m.view())).unwrap(), 20.0, epsilon = 1e-9);
    let none = Array2::from_elem((4, 4), false);
    assert!(matches!(psnr_masked(a.view(), b.view(), Some(none.view())), Err(MetricError::EmptyMask)));
}

#[test]
fn constant_offset_ssim_is_the_luminance_term() {
    let (c, d) = (0.5, 0.1);
    let a = Array2::from_elem((20, 20), c);
    let b = Array2::from_elem((20, 20), c + d);
    let want = (2.0 * c * (c + d) + 1e-4) / (c * c + (c + d) * (c + d) + 1e-4);
    assert_relative_eq!(ssim(a.view(), b.view()).unwrap(), want, epsilon = 1e-12);
}

#[test]
fn inverted_noise_is_nearly_anticorrelated() {
    // b = 1 − a flips the sign of every local covariance; with σ² ≈ 1/12
    // against C2 = 9e-4 the structure term sits just above −1.
    let a = noise(40, 40, 3);
    let b = a.mapv(|v| 1.0 - v);
    let s = ssim(a.view(), b.view()).unwrap();
    assert!(s <= -0.95, "{s}");
    assert_relative_eq!(s, ssim_brute(&a, &b), epsilon = 1e-12);
}

#[test]
fn separable_ssim_matches_the_direct_window_sum() {
    let a = noise(24, 30, 4);
    let b = (&a * 0.7 + &noise(24, 30, 5) * 0.3).mapv(|v| v.min(1.0));
    assert_relative_eq!(ssim(a.view(), b.view()).unwrap(), ssim_brute(&a, &b), epsilon = 1e-12);
}

#[test]
fn ssim_map_covers_windows_inside_the_image() {
    let a = noise(20, 15, 6);
    assert_eq!(ssim_map(a.view(), a.view()).unwrap().dim(), (10, 5));
}

#[test]
fn masked_ssim_uses_window_centres() {
    let a = noise(21, 21, 7);
    let b = noise(21, 21, 8);
    let map = ssim_map(a.view(), b.view()).unwrap();
    let mut m = Array2::from_elem((21, 21), false);
    m[[5, 5]] = true;
    m[[15, 10]] = true;
    let want = 0.5 * (map[[0, 0]] + map[[10, 5]]);
    assert_relative_eq!(ssim_masked(a.view(), b.view(), Some(m.view())).unwrap(), want, epsilon = 1e-15);
    let all = Array2::from_elem((21, 21), true);
    assert_eq!(
        ssim_masked(a.view(), b.view(), Some(all.view())).unwrap(),
        ssim(a.view(), b.view()).unwrap()
    );
}

#[test]
fn errors_on_bad_shapes() {
    let a = noise(10, 12, 9);
    assert!(matches!(ssim(a.view(), a.view()), Err(MetricError::TooSmall(_))));
    let b = noise(12, 10, 9);
    assert!(matches!(psnr(a.view(), b.view()), Err(MetricError::Dims(..))));
    assert!(matches!(ssim(a.view(), b.view()), Err(MetricError::Dims(..))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn metrics_are_symmetric(s1 in 0u64..1000, s2 in 0u64..1000, h in 11usize..20, w in 11usize..20) {
        let a = noise(h, w, s1);
        let b = noise(h, w, s2);
        prop_assert_eq!(psnr(a.view(), b.view()).unwrap(), psnr(b.view(), a.view()).unwrap());
        let (x, y) = (ssim(a.view(), b.view()).unwrap(), ssim(b.view(), a.view()).unwrap());
        prop_assert!((x - y).abs() <= 1e-15);
        prop_assert!((-1.0..=1.0).contains(&x));
    }
}
