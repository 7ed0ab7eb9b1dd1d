use std::collections::BTreeSet;

use gt_super::exactnum::{rat, signum, Rational};
use gt_super::matels::elem_nsq;
use gt_super::patterns::enumerate_basis;
use gt_super::roots::{
    invariant_c, invariant_c_bar, invariant_delta, invariant_delta_bar,
    invariant_delta_bar_printed, invariant_nsq, level_roots, rho_bar, root_diff_bar, IndexSets,
    LevelRoots, RowPair,
};
use gt_super::weights::{HighestWeight, Weight};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

const MODULES: [&str; 8] = [
    "1|0",
    "1,0|0",
    "2,1|-1",
    "1|0,0",
    "5/2|1/2,1/2",
    "2,1|0,0",
    "3,1|-1,-1",
    "3,1|1,0",
];

fn swap_roots(r: &LevelRoots) -> LevelRoots {
    LevelRoots {
        level: r.level,
        m: r.m,
        alpha: r.alpha_bar.clone(),
        alpha_bar: r.alpha.clone(),
    }
}

fn barred_as_unbarred(pair: &RowPair) -> RowPair {
    let sets = IndexSets {
        i0: pair.sets.i0_bar.clone(),
        i0_bar: pair.sets.i0.clone(),
        ..pair.sets.clone()
    };
    RowPair {
        m: pair.m,
        lower: swap_roots(&pair.lower),
        upper: swap_roots(&pair.upper),
        sets,
    }
}

fn pairs(w: &str) -> Vec<RowPair> {
    let basis = enumerate_basis(&HighestWeight::parse(w).unwrap()).unwrap();
    let big = basis.m() + basis.n();
    basis
        .iter()
        .flat_map(|p| (1..big).map(move |l| RowPair::of_pattern(p, l).unwrap()))
        .collect()
}

#[test]
fn barred_invariants_are_unbarred_ones_after_substitution() {
    for w in MODULES {
        for pair in pairs(w) {
            let swapped = barred_as_unbarred(&pair);
            let top = pair.sets.top();
            for r in 1..=top {
                match (invariant_c_bar(&pair, r), invariant_c(&swapped, r)) {
                    (Ok(a), Ok(b)) => assert_eq!(a, b),
                    (a, b) => assert_eq!(a.is_err(), b.is_err()),
                }
            }
            for r in 1..top {
                let printed = invariant_delta_bar_printed(&pair, r);
                let plain = invariant_delta(&swapped, r);
                match (printed, plain) {
                    (Ok(a), Ok(b)) => assert_eq!(a, -b),
                    (a, b) => assert_eq!(a.is_err(), b.is_err()),
                }
            }
        }
    }
}

#[test]
fn invariant_products_are_nonnegative_and_match_closed_forms() {
    for w in MODULES {
        let basis = enumerate_basis(&HighestWeight::parse(w).unwrap()).unwrap();
        let big = basis.m() + basis.n();
        for pat in basis.iter() {
            for p in 1..big {
                for r in 1..=p {
                    let v = invariant_nsq(pat, p, r).unwrap();
                    assert!(!v.is_negative(), "{pat} level {p} position {r}: {v}");
                    if basis.contains(&pat.shifted(p, r, 1)) {
                        assert_eq!(v, elem_nsq(pat, p, r).unwrap());
                    } else {
                        assert!(v.is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn index_sets_control_vanishing() {
    for w in MODULES {
        for pair in pairs(w) {
            let it: BTreeSet<usize> = pair.sets.i_tilde();
            let i: BTreeSet<usize> = pair.sets.i();
            let top = pair.sets.top();
            for r in (1..=top).filter(|r| !it.contains(r)) {
                assert!(invariant_c(&pair, r).unwrap().is_zero());
            }
            for r in (1..top).filter(|r| !i.contains(r)) {
                assert!(invariant_delta_bar(&pair, r).unwrap().is_zero());
                for u in 1..=top {
                    assert!(rho_bar(&pair, u, r).map(|v| v.is_zero()).unwrap_or(false));
                }
            }
            if !pair.sets.classical {
                for u in
                    (1..=pair.m).filter(|u| i.contains(u) && pair.sets.i_prime_tilde().contains(u))
                {
                    let expected =
                        invariant_c_bar(&pair, u).unwrap() * invariant_delta_bar(&pair, u).unwrap();
                    assert_eq!(rho_bar(&pair, u, u).unwrap(), expected);
                }
            }
        }
    }
}

#[test]
fn nonzero_mixed_parity_root_differences_keep_their_sign() {
    for w in [
        "2,1|0,0",
        "5/2,5/2|0,0",
        "3,1|1,0",
        "5/2|1/2,1/2",
        "2,1|0,0,0",
    ] {
        let basis = enumerate_basis(&HighestWeight::parse(w).unwrap()).unwrap();
        let m = basis.m();
        let big = m + basis.n();
        for s in m + 1..big {
            for us in 1..=s {
                for up in 1..s {
                    if (us > m) == (up > m) {
                        continue;
                    }
                    let signs: BTreeSet<i8> = basis
                        .iter()
                        .map(|p| signum(&root_diff_bar(p, s, us, up)))
                        .filter(|&g| g != 0)
                        .collect();
                    assert!(
                        signs.len() <= 1,
                        "{w} level {s} positions {us}/{up}: {signs:?}"
                    );
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn roots_move_uniformly_under_omega_delta(idx in 0usize..MODULES.len(), a in -9i64..=9, b in 1i64..=4) {
        let h = HighestWeight::parse(MODULES[idx]).unwrap();
        let om = rat(a, b);
        let moved = HighestWeight::new(h.weight().add(&Weight::graded_delta(h.m(), h.n()).scale(&om)).unwrap()).unwrap();
        let (b0, b1) = (enumerate_basis(&h).unwrap(), enumerate_basis(&moved).unwrap());
        prop_assert_eq!(b0.len(), b1.len());
        let m = h.m();
        for (p, q) in b0.iter().zip(b1.iter()) {
            for lvl in 1..=p.levels() {
                let (r0, r1) = (level_roots(p.row(lvl), m), level_roots(q.row(lvl), m));
                for k in 0..lvl {
                    prop_assert_eq!(&r1.alpha[k] - &r0.alpha[k], -om.clone());
                    prop_assert_eq!(&r1.alpha_bar[k] - &r0.alpha_bar[k], om.clone());
                }
            }
        }
    }
}

#[test]
fn gl11_vector_module_invariants() {
    let basis = enumerate_basis(&HighestWeight::parse("1|0").unwrap()).unwrap();
    let low = basis.iter().find(|p| p.label(1, 1).is_zero()).unwrap();
    assert_eq!(
        invariant_nsq(low, 1, 1).unwrap(),
        Rational::from_integer(1.into())
    );
}
