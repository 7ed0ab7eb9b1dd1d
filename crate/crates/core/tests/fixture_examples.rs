use gt_super::fixture::{compare_formula, is_classified, FixtureOutcome, GL22_FORMULAS};
use gt_super::patterns::enumerate_basis;
use gt_super::weights::HighestWeight;

const MODULES: [&str; 5] = ["2,1|0,0", "5/2,5/2|0,0", "3,1|1,0", "2,2|0,0", "3,1|-1,-1"];

#[test]
fn every_outcome_on_every_pattern_is_classified() {
    for w in MODULES {
        let basis = enumerate_basis(&HighestWeight::parse(w).unwrap()).unwrap();
        for f in GL22_FORMULAS {
            for pat in basis.iter() {
                if let Some((kind, engine, shown)) = compare_formula(f, &basis, pat).unwrap() {
                    assert!(
                        is_classified(f.id, kind),
                        "{w} {} on {pat}: {kind}, engine {engine}, fixture {shown:?}",
                        f.id
                    );
                }
            }
        }
    }
}

#[test]
fn elementary_formulas_match_everywhere() {
    for w in MODULES {
        let basis = enumerate_basis(&HighestWeight::parse(w).unwrap()).unwrap();
        for f in GL22_FORMULAS
            .iter()
            .filter(|f| f.id == "N1_1" || f.id == "N2_1")
        {
            for pat in basis.iter() {
                if let Some((kind, ..)) = compare_formula(f, &basis, pat).unwrap() {
                    assert_eq!(kind, FixtureOutcome::Match, "{w} {} on {pat}", f.id);
                }
            }
        }
    }
}

#[test]
fn generators_follow_the_shift_path() {
    for f in GL22_FORMULAS {
        let (p, q) = f.generator();
        assert!(p < q && q <= 4, "{}", f.id);
        assert_eq!(f.u.len(), q - p);
        assert!(f.sign == 1 || f.sign == -1);
    }
}
