//! Cross-module properties over ranges of the source strength.

use num_complex::Complex64 as C;
use proptest::prelude::*;
use spectral_curve::curve::{gaussian_curve, quartic_curve};
use spectral_curve::density::{density_at, profile};
use spectral_curve::mc::{compare_histogram, reflection_distance, sample_spectrum_gaussian, McConfig};
use spectral_curve::params::solve_parameters;
use spectral_curve::sheets::{branch_structure, Sheets, Side};
use spectral_curve::verify::{boundary_residual, h2, h2_expected};

fn quartic(a: f64) -> Sheets {
    let (p, br) = solve_parameters(a, 1e-12).unwrap();
    Sheets::new(&quartic_curve(a, p.alpha, p.beta).unwrap(), &br).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn quartic_pipeline_holds_across_a(a in 3.0f64..60.0) {
        let s = quartic(a);
        let [lo, hi] = s.branch.i2;
        prop_assert!(0.0 < lo && lo < hi);
        prop_assert_eq!(s.branch.i1, [-hi, -lo]);
        for k in 1..8 {
            let x = lo + (hi - lo) * k as f64 / 8.0;
            prop_assert!(boundary_residual(&s, 2, x).unwrap() <= 1e-10 * (1.0 + a));
            prop_assert!((density_at(&s, x) - density_at(&s, -x)).abs() <= 1e-10 * (1.0 + density_at(&s, x)));
            let v = s.boundary(x, Side::Plus).unwrap();
            prop_assert!(v.f2.im < 0.0);
        }
        let p = profile(&s, 60).unwrap();
        prop_assert!((p.total_mass - 1.0).abs() < 1e-6);
    }

    #[test]
    fn h2_identity_off_axis(a in 3.0f64..40.0, re in -3.0f64..3.0, im in 0.05f64..3.0) {
        let s = quartic(a);
        let z = C::new(re * s.branch.gamma2, im * s.branch.gamma2);
        let v = s.label(z).unwrap();
        let e = (h2(&s.curve, &v) - h2_expected(&s.curve, z)).norm();
        prop_assert!(e <= 1e-8 * (1.0 + z.norm_sqr()) * (1.0 + a * a), "{}", e);
    }

    #[test]
    fn gaussian_masses_follow_source_fractions(a in 1.2f64..4.0, x2 in 0.2f64..0.8) {
        let curve = gaussian_curve(a, x2).unwrap();
        let br = branch_structure(&curve, 1e-6).unwrap();
        let p = profile(&Sheets::new(&curve, &br).unwrap(), 60).unwrap();
        prop_assert!((p.masses[0] - (1.0 - x2)).abs() < 1e-6, "{:?}", p.masses);
        prop_assert!((p.masses[1] - x2).abs() < 1e-6, "{:?}", p.masses);
    }
}

#[test]
fn density_has_square_root_edges() {
    let s = quartic(10.0);
    let e = s.branch.gamma2;
    let len = e - s.branch.gamma1;
    let ratio = |d: f64| density_at(&s, e - d * len) / (d * len).sqrt();
    let (r3, r5) = (ratio(1e-3), ratio(1e-5));
    assert!(r5 > 0.0 && ((r3 - r5) / r5).abs() < 0.01, "{r3} {r5}");
}

#[test]
fn reflected_spectrum_matches() {
    let cfg = McConfig { n: 400, samples: 100, seed: 11, bins: 80 };
    let b = sample_spectrum_gaussian(&cfg, 2.0).unwrap();
    let d = reflection_distance(&b);
    assert!(d <= 0.03, "{d}");
}

#[test]
fn more_samples_move_toward_the_curve() {
    let curve = gaussian_curve(2.0, 0.5).unwrap();
    let br = branch_structure(&curve, 1e-6).unwrap();
    let p = profile(&Sheets::new(&curve, &br).unwrap(), 200).unwrap();
    let median = |samples: usize| {
        let mut d: Vec<f64> = (0..5)
            .map(|seed| {
                let cfg = McConfig { n: 60, samples, seed, bins: 20 };
                compare_histogram(&sample_spectrum_gaussian(&cfg, 2.0).unwrap(), &p, cfg.bins).cdf_sup_distance
            })
            .collect();
        d.sort_by(f64::total_cmp);
        d[2]
    };
    let (few, many) = (median(4), median(16));
    assert!(many < few, "{few} -> {many}");
}
