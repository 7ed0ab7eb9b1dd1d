//! Acceptance run: one line per criterion, with per-module detail lines.
//!
//! Criteria that fail for a documented reason are listed in `KNOWN_RED`
//! together with the module that fails. The run exits nonzero when a
//! criterion fails outside that list, or when a listed failure starts
//! passing.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use gt_super::exactnum::{rat, RadicalSum, Rational};
use gt_super::patterns::BranchingRule;
use gt_super::repmat::SparseRepMatrix;
use gt_super::verify::{
    check_commutators, check_gl22_fixture, check_hermiticity, check_internal_consistency,
    check_nonelementary_oracle, check_translation, check_zero_equivalence, Module, VerifyReport,
};
use gt_super::weights::{HighestWeight, Weight};

const MODULES: [&str; 12] = [
    "1|0",
    "0|0",
    "1|-3/2",
    "1,0|0",
    "3/2,3/2|0",
    "2,1|-1",
    "1|0,0",
    "5/2|1/2,1/2",
    "1,0|0,0",
    "2,1|0,0",
    "5/2,5/2|0,0",
    "3,1|-1,-1",
];

/// (criterion, module) pairs that fail; the reasons are in the decisions
/// ledger.
const KNOWN_RED: [(u8, &str); 4] = [
    (1, "1|-3/2"),
    (2, "1|-3/2"),
    (3, "1|-3/2"),
    (6, "3,1|-1,-1"),
];

const SEED: u64 = 20_241_014;

struct Outcome {
    criterion: u8,
    module: String,
    pass: bool,
    note: String,
}

struct Run {
    outcomes: Vec<Outcome>,
}

impl Run {
    fn record(&mut self, criterion: u8, module: &str, pass: bool, note: String) {
        self.outcomes.push(Outcome {
            criterion,
            module: module.to_string(),
            pass,
            note,
        });
    }

    fn report(&mut self, criterion: u8, module: &str, r: &VerifyReport) {
        let note = match &r.counterexample {
            None => format!("{} checked", r.checked),
            Some(ce) => format!(
                "first counterexample {:?} on {:?}: expected {}, actual {}",
                ce.generators, ce.patterns, ce.expected, ce.actual
            ),
        };
        self.record(criterion, module, r.pass, note);
    }
}

fn weight_key(w: &str) -> String {
    w.to_string()
}

fn build(w: &str) -> Result<Module, String> {
    let hw = HighestWeight::parse(w).map_err(|e| e.to_string())?;
    Module::build(&hw, BranchingRule::Refined).map_err(|e| e.to_string())
}

fn structural(run: &mut Run) {
    for w in MODULES {
        match build(w) {
            Ok(md) => {
                run.report(1, w, &check_commutators(&md));
                run.report(2, w, &check_hermiticity(&md));
                run.report(3, w, &check_nonelementary_oracle(&md));
            }
            Err(e) => {
                for c in 1..=3 {
                    run.record(c, w, false, format!("module not constructed: {e}"));
                }
            }
        }
    }
}

fn dimensions(run: &mut Run) {
    let cases: [(&str, usize); 6] = [
        ("1,0|0,0", 4),
        ("1,0|0", 3),
        ("1|0", 2),
        ("3/2,3/2|0", 4),
        ("5/2|1/2,1/2", 4),
        ("5/2,5/2|0,0", 16),
    ];
    for (w, expected) in cases {
        match build(w) {
            Ok(md) => {
                let d = md.basis.len();
                run.record(
                    4,
                    w,
                    d == expected,
                    format!("dimension {d}, expected {expected}"),
                );
            }
            Err(e) => run.record(4, w, false, e),
        }
    }
}

fn defining_rep(run: &mut Run) {
    let w = "1,0|0,0";
    let md = match build(w) {
        Ok(md) => md,
        Err(e) => return run.record(5, w, false, e),
    };
    let one = RadicalSum::from(Rational::from_integer(1.into()));
    let mut bad = Vec::new();
    for (&(p, q), mat) in &md.gens {
        if p == q {
            continue;
        }
        let vals: Vec<&RadicalSum> = mat.entries.values().collect();
        if vals.len() != 1 || &(vals[0] * vals[0]) != &one {
            bad.push(format!("E_{p}{q} has entries {vals:?}"));
        }
        if q == p + 1 && vals.iter().any(|v| **v != one) {
            bad.push(format!("elementary E_{p}{q} entry is not +1"));
        }
    }
    let (m, n) = (2, 2);
    let mut weights = BTreeSet::new();
    for i in 0..md.basis.len() {
        let labels: Vec<Rational> = (1..=m + n).map(|p| diag(&md.gens[&(p, p)], i)).collect();
        weights.insert(Weight::from_labels(m, &labels).to_string());
    }
    let expected: BTreeSet<String> = [
        Weight::eps(m, n, 1),
        Weight::eps(m, n, 2),
        Weight::delta(m, n, 1),
        Weight::delta(m, n, 2),
    ]
    .iter()
    .map(|w| w.to_string())
    .collect();
    if weights != expected {
        bad.push(format!("Cartan weights {weights:?}"));
    }
    let note = if bad.is_empty() {
        "one unit entry per generator; weights ε₁, ε₂, δ₁, δ₂".to_string()
    } else {
        bad.join("; ")
    };
    run.record(5, w, bad.is_empty(), note);
}

fn diag(m: &SparseRepMatrix, i: usize) -> Rational {
    m.get(i, i)
        .as_rational()
        .expect("diagonal entries are rational")
}

fn omega(run: &mut Run) {
    let w = "3,1|-1,-1";
    let hw = HighestWeight::parse(w).expect("weight parses");
    let om = rat(7, 3);
    let shift = Weight::new(
        vec![Rational::from_integer(0.into()); 2],
        vec![om.clone(), om.clone()],
    );
    match check_translation(&hw, &om, &shift, BranchingRule::Refined) {
        Ok(r) => run.report(6, w, &r),
        Err(e) => run.record(6, w, false, e.to_string()),
    }
}

fn fixture(run: &mut Run) {
    match check_gl22_fixture(100, SEED) {
        Ok(r) => {
            run.report(7, "2,1|0,0; 5/2,5/2|0,0", &r);
        }
        Err(e) => run.record(7, "fixture", false, e.to_string()),
    }
}

fn consistency(run: &mut Run) {
    for w in ["1,0|0,0", "2,1|0,0", "5/2,5/2|0,0", "3,1|-1,-1"] {
        match build(w) {
            Ok(md) => match check_internal_consistency(&md.basis, 1000, SEED) {
                Ok(r) => run.report(8, w, &r),
                Err(e) => run.record(8, w, false, e.to_string()),
            },
            Err(e) => run.record(8, w, false, e),
        }
    }
}

fn zero_equivalence(run: &mut Run) {
    for w in ["1,0|0,0", "2,1|0,0", "5/2,5/2|0,0", "3,1|-1,-1"] {
        match build(w) {
            Ok(md) => match check_zero_equivalence(&md) {
                Ok(r) => run.report(9, w, &r),
                Err(e) => run.record(9, w, false, e.to_string()),
            },
            Err(e) => run.record(9, w, false, e),
        }
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut run = Run {
        outcomes: Vec::new(),
    };
    structural(&mut run);
    dimensions(&mut run);
    defining_rep(&mut run);
    omega(&mut run);
    fixture(&mut run);
    consistency(&mut run);
    zero_equivalence(&mut run);

    let known: BTreeSet<(u8, String)> =
        KNOWN_RED.iter().map(|&(c, w)| (c, weight_key(w))).collect();
    let mut unexpected = Vec::new();
    for c in 1..=9u8 {
        let rows: Vec<&Outcome> = run.outcomes.iter().filter(|o| o.criterion == c).collect();
        let pass = rows.iter().all(|o| o.pass);
        let tag = if pass {
            "PASS"
        } else if rows
            .iter()
            .filter(|o| !o.pass)
            .all(|o| known.contains(&(c, o.module.clone())))
        {
            "FAIL (known, see decisions ledger)"
        } else {
            "FAIL"
        };
        println!("criterion {c}: {tag}");
        for o in rows {
            println!(
                "    [{}] {}: {}",
                if o.pass { "ok" } else { "FAIL" },
                o.module,
                o.note
            );
            let is_known = known.contains(&(c, o.module.clone()));
            if o.pass == is_known {
                unexpected.push(format!("criterion {c} on {}", o.module));
            }
        }
    }
    println!("elapsed {:.1}s", start.elapsed().as_secs_f64());
    if unexpected.is_empty() {
        println!("all outcomes as recorded");
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcomes: {}", unexpected.join(", "));
        ExitCode::FAILURE
    }
}
