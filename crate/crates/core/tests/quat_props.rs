use cmap_core::exact::rint;
use cmap_core::quatarith::{
    embed_det_rational, embed_product, enumerate_norm_one, norm_one_rows, zero_divisor_count, QuatInt, QuatParams,
};
use cmap_core::sample;
use proptest::prelude::*;

fn quat(params: QuatParams) -> impl Strategy<Value = QuatInt> {
    proptest::array::uniform4(-30i64..30).prop_map(move |q| QuatInt::new(params, q))
}

fn params() -> impl Strategy<Value = QuatParams> {
    prop_oneof![Just((2, 3)), Just((3, 7)), Just((2, 5)), Just((5, 2))].prop_map(|(a, b)| QuatParams::new(a, b).unwrap())
}

proptest! {
    #[test]
    fn norm_is_multiplicative((x, y) in params().prop_flat_map(|p| (quat(p), quat(p)))) {
        prop_assert_eq!(x.mul(&y).unwrap().reduced_norm(), x.reduced_norm() * y.reduced_norm());
    }

    #[test]
    fn multiplication_is_associative((x, y, z) in params().prop_flat_map(|p| (quat(p), quat(p), quat(p)))) {
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
    }

    #[test]
    fn embedding_is_a_homomorphism((x, y) in params().prop_flat_map(|p| (quat(p), quat(p)))) {
        prop_assert_eq!(x.mul(&y).unwrap().embed_matrix(), embed_product(&x, &y));
    }

    #[test]
    fn determinant_is_reduced_norm(x in params().prop_flat_map(quat)) {
        prop_assert_eq!(embed_det_rational(&x), Some(rint(x.reduced_norm())));
    }
}

#[test]
fn enumeration_contains_expected_units() {
    let p = QuatParams::new(2, 3).unwrap();
    let units: Vec<[i64; 4]> = enumerate_norm_one(p, 3).iter().map(|q| q.q).collect();
    for q in [[1, 0, 0, 0], [-1, 0, 0, 0], [3, 2, 0, 0], [3, -2, 0, 0], [-3, 2, 0, 0], [-3, -2, 0, 0]] {
        assert!(units.contains(&q), "{q:?}");
    }
    let mut sorted = units.clone();
    sorted.sort();
    assert_eq!(sorted, units);
}

#[test]
fn products_of_units_are_units() {
    let p = QuatParams::new(3, 7).unwrap();
    let units = enumerate_norm_one(p, 4);
    for x in &units {
        for y in &units {
            assert_eq!(x.mul(y).unwrap().reduced_norm(), 1);
        }
    }
}

#[test]
fn no_zero_divisors_in_division_algebras() {
    let mut rng = sample::rng(42);
    for (a, b) in [(2, 3), (3, 7), (2, 5)] {
        let p = QuatParams::new(a, b).unwrap();
        assert!(p.is_fuchsian().unwrap());
        assert_eq!(zero_divisor_count(p, &mut rng, 2000, 6), 0);
    }
    // (1, 3) splits: (1 + I)(1 − I) = 0
    let split = QuatParams::new(1, 3).unwrap();
    assert_eq!(QuatInt::new(split, [1, 1, 0, 0]).mul(&QuatInt::new(split, [1, -1, 0, 0])).unwrap().q, [0; 4]);
}

#[test]
fn rows_report_every_unit() {
    let rows = norm_one_rows(QuatParams::new(2, 3).unwrap(), 3).unwrap();
    let row = rows.iter().find(|r| (r.q0, r.q1, r.q2, r.q3) == (3, 2, 0, 0)).unwrap();
    assert!(row.su11_ok && row.preserves_gamma2 && row.norm == 1);
}
