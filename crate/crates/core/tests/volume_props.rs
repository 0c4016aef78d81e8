use cmap_core::geometry::{fiber_density_split, metric_gram};
use cmap_core::volume::{density, poly_p, slab_closed, tail_closed, volume_table};
use cmap_core::{sample, ModelParams};
use proptest::prelude::*;

proptest! {
    #[test]
    fn slabs_are_additive(n in 1usize..4, c in 0.0f64..3.0, a in 0.05f64..1.0, d1 in 0.01f64..2.0, d2 in 0.01f64..2.0) {
        let p = ModelParams::new(n, c).unwrap();
        let (b, e) = (a + d1, a + d1 + d2);
        let whole = slab_closed(a, e, &p, 1.0).unwrap();
        let parts = slab_closed(a, b, &p, 1.0).unwrap() + slab_closed(b, e, &p, 1.0).unwrap();
        prop_assert!(((whole - parts) / whole).abs() <= 1e-12);
    }

    #[test]
    fn polynomial_matches_product_form(n in 1usize..6, rho in 0.1f64..10.0, c in 0.0f64..5.0) {
        let x = c / rho;
        let product = (1.0 + x).powi(n as i32 - 1) * (1.0 + 2.0 * x);
        prop_assert!((poly_p(n).unwrap().eval(x) - product).abs() <= 1e-12 * product);
    }

    #[test]
    fn tail_is_decreasing(n in 1usize..4, c in 0.0f64..3.0, r in 0.1f64..10.0, d in 0.01f64..5.0) {
        let p = ModelParams::new(n, c).unwrap();
        prop_assert!(tail_closed(r + d, &p, 1.0).unwrap() < tail_closed(r, &p, 1.0).unwrap());
    }
}

#[test]
fn density_times_f_inv_is_volume_form() {
    for n in 1..=3 {
        let params = ModelParams::new(n, 0.8).unwrap();
        let mut rng = sample::rng(42);
        for _ in 0..10 {
            let base = sample::fiber_point(&mut rng, n, 1.0);
            let f_inv = fiber_density_split(&base, &params).unwrap().1;
            for rho in [0.5, 2.0, 3.5] {
                let mut p = base.clone();
                p.rho = rho;
                let vol = metric_gram(&p, &params).unwrap().determinant().sqrt();
                let predicted = density(rho, &params).unwrap() * f_inv;
                assert!(((vol - predicted) / vol).abs() <= 1e-8);
            }
        }
    }
}

#[test]
fn undeformed_growth_near_zero() {
    for n in 1..=3 {
        let p = ModelParams::new(n, 0.0).unwrap();
        let r1: f64 = 1e-3;
        let scaled = r1.powi(n as i32 + 1) * slab_closed(r1, 1.0, &p, 2.0).unwrap();
        assert!((scaled / (2.0 / (n as f64 + 1.0)) - 1.0).abs() < 1e-2);
    }
}

#[test]
fn table_for_undeformed_n1() {
    let rows = volume_table(&[1.0, 2.0, 4.0], &ModelParams::new(1, 0.0).unwrap(), 1.0).unwrap();
    let closed: Vec<f64> = rows.iter().map(|r| r.closed_tail).collect();
    assert_eq!(closed, vec![0.5, 0.125, 0.03125]);
    for r in &rows {
        assert!((r.quadrature_tail - r.closed_tail).abs() <= 1e-10 * r.closed_tail);
        assert!((r.ratio_to_asymptote - 1.0).abs() < 1e-15);
    }
}
