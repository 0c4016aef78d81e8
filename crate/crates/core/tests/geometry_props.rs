use cmap_core::fields::{real_catalogue, CoordinateField, KillingContext};
use cmap_core::geometry::{chart, einstein_check, metric_gram, metric_on_fiber_h, PointBarN};
use cmap_core::{sample, ModelParams};
use num_complex::Complex64;
use proptest::prelude::*;

fn point_strategy(n: usize) -> impl Strategy<Value = PointBarN> {
    (any::<u64>()).prop_map(move |seed| sample::points(seed, n, 1).remove(0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_is_symmetric_positive_definite(n in 1usize..4, c in 0.0f64..3.0, p in any::<u64>()) {
        let q = sample::points(p, n, 1).remove(0);
        let g = metric_gram(&q, &ModelParams::new(n, c).unwrap()).unwrap();
        prop_assert_eq!(g.clone(), g.transpose());
        prop_assert!(g.cholesky().is_some());
    }

    #[test]
    fn chart_round_trip(p in point_strategy(3)) {
        let back = PointBarN::from_chart(3, &p.to_chart()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn catalogue_is_killing_at_random_points(p in point_strategy(2), c in 0.0f64..3.0) {
        let params = ModelParams::new(2, c).unwrap();
        let ctx = KillingContext::new(&p, &params, 1e-3).unwrap();
        for (label, f) in real_catalogue(2) {
            let r = ctx.relative_residual(&f.compile_real().unwrap());
            prop_assert!(r <= 1e-6, "{} residual {}", label, r);
        }
        prop_assert!(ctx.relative_residual(&CoordinateField(chart::RHO)) > 1e-2);
    }
}

#[test]
fn fiber_metric_blocks_agree_when_undeformed() {
    let params = ModelParams::new(2, 0.0).unwrap();
    let g = metric_on_fiber_h(&[Complex64::new(0.0, 0.0); 2], 0.3, 1.0, &params).unwrap();
    assert!((g[(0, 0)] - g[(2, 2)]).abs() < 1e-14);
    assert!((g[(1, 1)] - g[(3, 3)]).abs() < 1e-14);
}

#[test]
fn einstein_extends_to_n2() {
    // truncation error is O(h²): 1e-3 gives ≈1e-3, 1.25e-4 gives ≈2e-5
    for c in [0.0, 1.0] {
        let params = ModelParams::new(2, c).unwrap();
        for p in sample::points(42, 2, 5) {
            let e = einstein_check(&p, &params, 1.25e-4).unwrap();
            assert!(e.relative_residual <= 1e-4, "{e:?}");
            assert!((e.lambda + 8.0).abs() < 1e-3, "{e:?}");
        }
    }
}

#[test]
fn points_outside_chart_are_rejected() {
    let params = ModelParams::new(2, 1.0).unwrap();
    let p = PointBarN { x: vec![Complex64::new(1.2, 0.0)], w: vec![Complex64::new(0.0, 0.0); 2], phi: 0.0, rho: 1.0 };
    assert!(metric_gram(&p, &params).is_err());
    assert!(PointBarN::new(vec![], vec![Complex64::new(0.0, 0.0)], 0.0, -1.0).is_err());
}
