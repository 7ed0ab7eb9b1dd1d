use gt_super::exactnum::{int, rat, Rational};
use gt_super::weights::{
    classify_type1, decompose_unitary, form, rho_shifted_pairing, HighestWeight, UnitaryClass,
    Weight,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

/// Dominant weights with small labels; blocks share a fractional offset.
fn dominant(m: usize, n: usize) -> impl Strategy<Value = HighestWeight> {
    (
        -6i64..=6,
        prop::sample::select(vec![1i64, 2, 3]),
        prop::collection::vec(0i64..=2, m - 1),
        -6i64..=6,
        prop::sample::select(vec![1i64, 2, 3]),
        prop::collection::vec(0i64..=2, n.saturating_sub(1)),
    )
        .prop_map(move |(e0, ed, egaps, o0, od, ogaps)| {
            let mut even = vec![rat(e0, ed)];
            for g in egaps {
                let last = even.last().unwrap().clone();
                even.push(last - int(g));
            }
            let mut odd = vec![rat(o0, od)];
            for g in ogaps {
                let last = odd.last().unwrap().clone();
                odd.push(last - int(g));
            }
            odd.truncate(n);
            HighestWeight::new(Weight::new(even, odd)).unwrap()
        })
}

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3, 1usize..=3)
}

fn omega() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=7).prop_map(|(a, b)| rat(a, b))
}

fn shifted(hw: &HighestWeight, w: &Rational) -> HighestWeight {
    let d = Weight::graded_delta(hw.m(), hw.n()).scale(w);
    HighestWeight::new(hw.weight().add(&d).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn classification_ignores_omega_delta(hw in shape().prop_flat_map(|(m, n)| dominant(m, n)), w in omega()) {
        prop_assert_eq!(classify_type1(&hw), classify_type1(&shifted(&hw, &w)));
    }

    #[test]
    fn decomposition_reconstructs_exactly(hw in shape().prop_flat_map(|(m, n)| dominant(m, n))) {
        if let Ok(d) = decompose_unitary(&hw) {
            let (m, n) = (hw.m(), hw.n());
            let back = d.lambda0.weight()
                .add(&Weight::graded_eps(m, n).scale(&d.gamma)).unwrap()
                .add(&Weight::graded_delta(m, n).scale(&d.omega)).unwrap();
            prop_assert_eq!(&back, hw.weight());
            let l0 = d.lambda0.weight();
            for i in 1..m {
                let phi = Weight::eps(m, n, i).sub(&Weight::eps(m, n, i + 1)).unwrap();
                let v = form(l0, &phi).unwrap();
                prop_assert!(!v.is_negative() && v.is_integer());
            }
            for nu in 1..n {
                let phi = Weight::delta(m, n, nu).sub(&Weight::delta(m, n, nu + 1)).unwrap();
                let v = -form(l0, &phi).unwrap();
                prop_assert!(!v.is_negative() && v.is_integer());
            }
        } else {
            prop_assert_eq!(classify_type1(&hw), UnitaryClass::NotType1);
        }
    }

    #[test]
    fn typical_pairings_are_positive_for_every_odd_index(hw in shape().prop_flat_map(|(m, n)| dominant(m, n))) {
        if classify_type1(&hw) == UnitaryClass::TypicalType1 {
            for mu in 1..=hw.n() {
                prop_assert!(rho_shifted_pairing(hw.weight(), hw.m(), mu) > Rational::zero());
            }
        }
    }
}

#[test]
fn omega_delta_module_is_type1_for_any_omega() {
    for w in [rat(-7, 2), rat(0, 1), rat(7, 3)] {
        let hw = shifted(&HighestWeight::parse("0,0|0,0").unwrap(), &w);
        assert!(classify_type1(&hw).is_type1());
        let d = decompose_unitary(&hw).unwrap();
        assert_eq!(d.omega, w);
        assert!(d.gamma.is_zero());
    }
}
