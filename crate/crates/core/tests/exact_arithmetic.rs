use gt_super::exactnum::{
    radsum_add, radsum_mul, rat, sqrt_rational, RadicalSum, Rational, SignedRadical,
};
use num_bigint::BigUint;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn radical_sum() -> impl Strategy<Value = RadicalSum> {
    prop::collection::vec((1u32..=60, rational()), 0..5).prop_map(|terms| {
        RadicalSum::from_terms(terms.into_iter().map(|(d, c)| (BigUint::from(d), c)))
    })
}

fn signed_radical() -> impl Strategy<Value = SignedRadical> {
    (
        prop::sample::select(vec![-1i8, 1]),
        0i64..=30,
        1i64..=9,
        1u32..=200,
    )
        .prop_map(|(s, n, d, r)| SignedRadical::new(s, rat(n, d), BigUint::from(r)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn addition_is_associative(a in radical_sum(), b in radical_sum(), c in radical_sum()) {
        prop_assert_eq!(radsum_add(&radsum_add(&a, &b), &c), radsum_add(&a, &radsum_add(&b, &c)));
    }

    #[test]
    fn multiplication_distributes(a in radical_sum(), b in radical_sum(), c in radical_sum()) {
        prop_assert_eq!(radsum_mul(&a, &radsum_add(&b, &c)), radsum_add(&radsum_mul(&a, &b), &radsum_mul(&a, &c)));
    }

    #[test]
    fn multiplication_is_associative_and_commutative(a in radical_sum(), b in radical_sum(), c in radical_sum()) {
        prop_assert_eq!(radsum_mul(&radsum_mul(&a, &b), &c), radsum_mul(&a, &radsum_mul(&b, &c)));
        prop_assert_eq!(radsum_mul(&a, &b), radsum_mul(&b, &a));
    }

    #[test]
    fn subtraction_inverts_addition(a in radical_sum(), b in radical_sum()) {
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn radical_squared_is_rational(r in signed_radical()) {
        let s = RadicalSum::from(r.clone());
        let sq = radsum_mul(&s, &s).as_rational();
        let expected = r.coeff() * r.coeff() * Rational::from_integer(r.radicand().clone().into());
        prop_assert_eq!(sq, Some(expected));
    }

    #[test]
    fn float_view_tracks_exact_sum(a in radical_sum(), b in radical_sum()) {
        let lhs = radsum_add(&a, &b).to_f64();
        prop_assert!((lhs - (a.to_f64() + b.to_f64())).abs() <= 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn exact_json_round_trips(a in radical_sum()) {
        let s = serde_json::to_string(&a).unwrap();
        let back: RadicalSum = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn square_root_squares_back(n in 0i64..=100_000, d in 1i64..=5_000) {
        let x = rat(n, d);
        let r = sqrt_rational(&x, 1).unwrap();
        prop_assert_eq!(r.square(), x);
    }
}

#[test]
fn negative_radicand_is_rejected() {
    assert!(sqrt_rational(&rat(-1, 3), 1).is_err());
}
