//! Exact verification suites over assembled modules.
//!
//! Every suite returns a [`VerifyReport`]; a failing report always carries
//! the first counterexample in basis-ordinal order.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::{int, rat, RadicalSum, Rational};
use crate::fixture::{compare_formula, is_classified, OutcomeTable, GL22_FORMULAS};
use crate::matels::{elem_factors, elem_nsq, elem_sign, Kernels, ShiftPath};
use crate::patterns::{
    branch, enumerate_basis_with, free_betweenness_set, validate_pattern, weyl_dimension,
    BasisIndex, BranchingRule, EnumerateOptions, GTPattern,
};
use crate::repmat::{all_generators, index_parity, GeneratorSet, SparseRepMatrix};
use crate::roots::{invariant_c, invariant_delta_bar, invariant_nsq, RowPair};
use crate::weights::{classify_type1, HighestWeight, UnitaryClass, Weight};

/// The named suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Commutators,
    Hermiticity,
    Nonelementary,
    HighestWeight,
    Kac,
    Consistency,
    ZeroEquivalence,
    OmegaTranslation,
    Fixture,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Commutators,
        Suite::Hermiticity,
        Suite::Nonelementary,
        Suite::HighestWeight,
        Suite::Kac,
        Suite::Consistency,
        Suite::ZeroEquivalence,
        Suite::OmegaTranslation,
        Suite::Fixture,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Commutators => "commutators",
            Suite::Hermiticity => "hermiticity",
            Suite::Nonelementary => "nonelementary",
            Suite::HighestWeight => "highest-weight",
            Suite::Kac => "kac",
            Suite::Consistency => "consistency",
            Suite::ZeroEquivalence => "zero-equivalence",
            Suite::OmegaTranslation => "omega-translation",
            Suite::Fixture => "fixture",
        }
    }

    pub fn parse(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The first failing instance of a suite.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub module: String,
    pub generators: Vec<(usize, usize)>,
    pub patterns: Vec<String>,
    pub expected: RadicalSum,
    pub actual: RadicalSum,
    pub breakdown: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub module: String,
    pub pass: bool,
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerifyReport {
    fn finish(
        suite: Suite,
        module: String,
        checked: usize,
        ce: Option<Counterexample>,
        start: Instant,
    ) -> Self {
        VerifyReport {
            suite: suite.name().to_string(),
            module,
            pass: ce.is_none(),
            checked,
            counterexample: ce,
            details: Value::Null,
            elapsed: start.elapsed(),
        }
    }

    fn with_details(mut self, d: Value) -> Self {
        self.details = d;
        self
    }

    /// One JSON object; timing is included only on request so that the
    /// default output is reproducible byte for byte.
    pub fn to_json_line(&self, timing: bool) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if timing {
            v["elapsed_ms"] = json!(self.elapsed.as_millis() as u64);
        }
        v.to_string()
    }
}

/// An enumerated module with all generator matrices assembled.
pub struct Module {
    pub basis: BasisIndex,
    pub gens: GeneratorSet,
}

impl Module {
    pub fn build(hw: &HighestWeight, rule: BranchingRule) -> Result<Module> {
        let basis = enumerate_basis_with(
            hw,
            EnumerateOptions {
                rule,
                max_dim: None,
            },
        )?;
        let gens = all_generators(&basis)?;
        Ok(Module { basis, gens })
    }

    pub fn label(&self) -> String {
        module_label(self.basis.highest_weight())
    }

    fn g(&self, p: usize, q: usize) -> &SparseRepMatrix {
        &self.gens[&(p, q)]
    }

    fn size(&self) -> usize {
        self.basis.m() + self.basis.n()
    }
}

pub fn module_label(hw: &HighestWeight) -> String {
    format!("gl({}|{}) ({})", hw.m(), hw.n(), hw)
}

/// Run items in parallel (when enabled) and keep results in input order.
fn ordered_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// First entry (in column-then-row order) where two matrices differ.
fn first_difference(
    a: &SparseRepMatrix,
    b: &SparseRepMatrix,
) -> Option<(usize, usize, RadicalSum, RadicalSum)> {
    let keys: BTreeSet<(usize, usize)> = a
        .entries
        .keys()
        .chain(b.entries.keys())
        .map(|&(r, c)| (c, r))
        .collect();
    keys.into_iter().find_map(|(c, r)| {
        let (x, y) = (a.get(r, c), b.get(r, c));
        (x != y).then_some((r, c, x, y))
    })
}

/// Factor-by-factor account of one assembled entry ⟨row|E_pq|col⟩.
pub fn explain_entry(
    basis: &BasisIndex,
    p: usize,
    q: usize,
    row: usize,
    col: usize,
) -> Vec<String> {
    let src = basis.get(col);
    let tgt = basis.get(row);
    if p == q {
        return vec![format!("E_{p}{p} on {src}: weight coordinate")];
    }
    let (l, top, raise) = if p < q { (p, q, true) } else { (q, p, false) };
    let delta = if raise { 1 } else { -1 };
    let k = Kernels::new(basis);
    let mut out = Vec::new();
    for path in ShiftPath::all(l, top) {
        if src.shifted_many(&path.shifts(), delta) != *tgt {
            continue;
        }
        let base = if raise { src } else { tgt };
        let value = if raise {
            k.nonelem_raise(src, &path)
        } else {
            k.nonelem_lower(src, &path)
        };
        out.push(format!("E_{p}{q} path {path} from {src}: {}", show(value)));
        for (lvl, pos) in path.shifts() {
            let line = match elem_factors(base, lvl, pos) {
                Ok(fb) => format!(
                    "  N^{lvl}_{pos} at {base} sign {:+}: {fb}",
                    elem_sign(base, lvl, pos)
                ),
                Err(e) => format!("  N^{lvl}_{pos} at {base}: {e}"),
            };
            out.push(line);
        }
    }
    if out.is_empty() {
        out.push(format!("E_{p}{q}: no shift path from {src} to {tgt}"));
    }
    out
}

fn show<T: fmt::Display>(r: Result<T>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn parity(a: usize, m: usize) -> u8 {
    index_parity(a, m)
}

/// `(−1)^{[(p)+(q)][(r)+(s)]}`.
fn grade_sign(p: usize, q: usize, r: usize, s: usize, m: usize) -> i64 {
    if (parity(p, m) + parity(q, m)) % 2 == 1 && (parity(r, m) + parity(s, m)) % 2 == 1 {
        -1
    } else {
        1
    }
}

/// The graded commutation relations on every generator quadruple.
pub fn check_commutators(md: &Module) -> VerifyReport {
    let start = Instant::now();
    let big = md.size();
    let m = md.basis.m();
    let quads: Vec<[usize; 4]> = (1..=big)
        .flat_map(|p| {
            (1..=big).flat_map(move |q| {
                (1..=big).flat_map(move |r| (1..=big).map(move |s| [p, q, r, s]))
            })
        })
        .collect();
    let results = ordered_map(&quads, |&[p, q, r, s]| {
        let lhs = md.g(p, q).graded_commutator(md.g(r, s));
        let mut rhs = SparseRepMatrix::zero(md.basis.len(), p, s, 0);
        if q == r {
            rhs = rhs.add_scaled(md.g(p, s), 1);
        }
        if p == s {
            rhs = rhs.add_scaled(md.g(r, q), -grade_sign(p, q, r, s, m));
        }
        first_difference(&rhs, &lhs).map(|(row, col, e, a)| {
            let mut breakdown = vec![format!("[E_{p}{q}, E_{r}{s}] at ({row}, {col})")];
            for k in 0..md.basis.len() {
                for (x, y) in [((p, q), (r, s)), ((r, s), (p, q))] {
                    let (u, v) = (md.g(x.0, x.1).get(row, k), md.g(y.0, y.1).get(k, col));
                    if !u.is_zero() && !v.is_zero() {
                        breakdown.push(format!(
                            "E_{}{}[{row},{k}] = {u}; E_{}{}[{k},{col}] = {v}",
                            x.0, x.1, y.0, y.1
                        ));
                        breakdown.extend(explain_entry(&md.basis, x.0, x.1, row, k));
                        breakdown.extend(explain_entry(&md.basis, y.0, y.1, k, col));
                    }
                }
            }
            Counterexample {
                module: md.label(),
                generators: vec![(p, q), (r, s)],
                patterns: vec![md.basis.get(col).to_string(), md.basis.get(row).to_string()],
                expected: e,
                actual: a,
                breakdown,
            }
        })
    });
    let ce = results.into_iter().flatten().next();
    VerifyReport::finish(Suite::Commutators, md.label(), quads.len(), ce, start)
}

/// matrix(E_qp) = transpose(matrix(E_pq)) for all p, q.
pub fn check_hermiticity(md: &Module) -> VerifyReport {
    let start = Instant::now();
    let big = md.size();
    let pairs: Vec<(usize, usize)> = (1..=big)
        .flat_map(|p| (p..=big).map(move |q| (p, q)))
        .collect();
    let results = ordered_map(&pairs, |&(p, q)| {
        first_difference(&md.g(p, q).transpose(), md.g(q, p)).map(|(row, col, e, a)| {
            let mut breakdown = explain_entry(&md.basis, q, p, row, col);
            breakdown.extend(explain_entry(&md.basis, p, q, col, row));
            Counterexample {
                module: md.label(),
                generators: vec![(q, p), (p, q)],
                patterns: vec![md.basis.get(col).to_string(), md.basis.get(row).to_string()],
                expected: e,
                actual: a,
                breakdown,
            }
        })
    });
    let ce = results.into_iter().flatten().next();
    VerifyReport::finish(Suite::Hermiticity, md.label(), pairs.len(), ce, start)
}

/// Non-elementary generators against nested graded commutators of the
/// elementary matrices.
pub fn check_nonelementary_oracle(md: &Module) -> VerifyReport {
    let start = Instant::now();
    let big = md.size();
    let mut ce = None;
    let mut checked = 0;
    for l in 1..big {
        let mut up = md.g(l, l + 1).clone();
        let mut down = md.g(l + 1, l).clone();
        for q in l + 2..=big {
            up = up.graded_commutator(md.g(q - 1, q));
            down = md.g(q, q - 1).graded_commutator(&down);
            for (oracle, (p, r)) in [(&up, (l, q)), (&down, (q, l))] {
                checked += 1;
                if ce.is_some() {
                    continue;
                }
                if let Some((row, col, e, a)) = first_difference(oracle, md.g(p, r)) {
                    ce = Some(Counterexample {
                        module: md.label(),
                        generators: vec![(p, r)],
                        patterns: vec![
                            md.basis.get(col).to_string(),
                            md.basis.get(row).to_string(),
                        ],
                        expected: e,
                        actual: a,
                        breakdown: explain_entry(&md.basis, p, r, row, col),
                    });
                }
            }
        }
    }
    VerifyReport::finish(Suite::Nonelementary, md.label(), checked, ce, start)
}

/// The top pattern is a highest-weight vector and generates the module.
pub fn check_highest_weight(md: &Module) -> VerifyReport {
    let start = Instant::now();
    let big = md.size();
    let labels = md.basis.highest_weight().labels();
    let top = md.basis.get(0).to_string();
    let mut ce = None;
    let mut checked = 0;
    let mut fail =
        |gens: Vec<(usize, usize)>, expected: RadicalSum, actual: RadicalSum, note: String| {
            if ce.is_none() {
                ce = Some(Counterexample {
                    module: md.label(),
                    generators: gens,
                    patterns: vec![top.clone()],
                    expected,
                    actual,
                    breakdown: vec![note],
                });
            }
        };
    for p in 1..=big {
        for q in p + 1..=big {
            checked += 1;
            if let Some((&(row, _), v)) = md
                .g(p, q)
                .entries
                .range((0, 0)..)
                .find(|((_, c), _)| *c == 0)
            {
                fail(
                    vec![(p, q)],
                    RadicalSum::zero(),
                    v.clone(),
                    format!("raising E_{p}{q} maps the top vector to row {row}"),
                );
            }
        }
        checked += 1;
        let col0: Vec<(usize, RadicalSum)> = md
            .g(p, p)
            .entries
            .iter()
            .filter(|((_, c), _)| *c == 0)
            .map(|(&(r, _), v)| (r, v.clone()))
            .collect();
        let expected = RadicalSum::from(labels[p - 1].clone());
        let actual = col0
            .iter()
            .find(|(r, _)| *r == 0)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(RadicalSum::zero);
        if col0.iter().any(|(r, _)| *r != 0) || actual != expected {
            fail(
                vec![(p, p)],
                expected,
                actual,
                format!("E_{p}{p} eigenvalue on the top vector"),
            );
        }
    }
    let mut seen = vec![false; md.basis.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(c) = queue.pop_front() {
        for p in 1..=big {
            for q in 1..p {
                for (&(r, col), _) in &md.g(p, q).entries {
                    if col == c && !seen[r] {
                        seen[r] = true;
                        queue.push_back(r);
                    }
                }
            }
        }
    }
    checked += 1;
    if let Some(missing) = seen.iter().position(|s| !s) {
        fail(
            vec![],
            RadicalSum::one(),
            RadicalSum::zero(),
            format!(
                "pattern {} is not reached by lowering from the top",
                md.basis.get(missing)
            ),
        );
    }
    VerifyReport::finish(Suite::HighestWeight, md.label(), checked, ce, start)
}

fn kac_dimension(hw: &HighestWeight) -> Rational {
    let labels = hw.labels();
    let m = hw.m();
    let factor =
        Rational::from_integer(num_bigint::BigInt::from(2u8).pow((hw.m() * hw.n()) as u32));
    factor * weyl_dimension(&labels[..m]) * weyl_dimension(&labels[m..])
}

/// Kac-module factorization and free branching at the top level.
pub fn check_kac(hw: &HighestWeight, rule: BranchingRule) -> Result<VerifyReport> {
    let start = Instant::now();
    if classify_type1(hw) != UnitaryClass::TypicalType1 || hw.n() == 0 {
        return Err(Error::Precondition(format!(
            "{hw} is not typical for a superalgebra"
        )));
    }
    let (m, n) = (hw.m(), hw.n());
    let basis = enumerate_basis_with(
        hw,
        EnumerateOptions {
            rule,
            max_dim: None,
        },
    )?;
    let label = module_label(hw);
    let top = hw.labels();
    let mut ce = None;
    let mut fail = |expected: Rational, actual: Rational, note: String| {
        if ce.is_none() {
            ce = Some(Counterexample {
                module: label.clone(),
                generators: vec![],
                patterns: vec![],
                expected: expected.into(),
                actual: actual.into(),
                breakdown: vec![note],
            });
        }
    };
    let kac = kac_dimension(hw);
    let dim = int(basis.len() as i64);
    if kac != dim {
        fail(
            kac.clone(),
            dim.clone(),
            "dimension against 2^(mn) times the even Weyl dimensions".into(),
        );
    }
    let branched: BTreeSet<Vec<Rational>> = branch(&top, m).into_iter().collect();
    let free: BTreeSet<Vec<Rational>> = free_betweenness_set(&top, m).into_iter().collect();
    if branched != free {
        let stray = branched
            .symmetric_difference(&free)
            .next()
            .cloned()
            .unwrap_or_default();
        fail(
            int(free.len() as i64),
            int(branched.len() as i64),
            format!("branch list differs from the free betweenness set at {stray:?}"),
        );
    }
    let mut counts: BTreeMap<Vec<Rational>, usize> = BTreeMap::new();
    for p in basis.iter() {
        *counts.entry(p.row(m + n - 1).to_vec()).or_default() += 1;
    }
    let mut total = Rational::zero();
    for row in &branched {
        let sub = HighestWeight::new(Weight::from_labels(m, row))?;
        let d = int(enumerate_basis_with(
            &sub,
            EnumerateOptions {
                rule,
                max_dim: None,
            },
        )?
        .len() as i64);
        let seen = int(*counts.get(row).unwrap_or(&0) as i64);
        if d != seen {
            fail(d.clone(), seen, format!("multiplicity of branch {sub}"));
        }
        total += d;
    }
    if total != dim {
        fail(dim, total, "sum of branch dimensions".into());
    }
    let details = json!({
        "dimension": basis.len(),
        "kac_dimension": kac.to_string(),
        "branches": branched.len(),
    });
    Ok(
        VerifyReport::finish(Suite::Kac, label, 3 + branched.len(), ce, start)
            .with_details(details),
    )
}

/// The two gl(2|2) modules used for the hard-coded formulas.
pub const FIXTURE_MODULES: [&str; 2] = ["2,1|0,0", "5/2,5/2|0,0"];

/// Hard-coded gl(2|2) formulas on `count` random basis vectors of each
/// fixture module; a non-match outside the corrections table fails.
pub fn check_gl22_fixture(count: usize, seed: u64) -> Result<VerifyReport> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ce = None;
    let mut checked = 0;
    let mut tallies: BTreeMap<String, OutcomeTable> = BTreeMap::new();
    let mut labels = Vec::new();
    for w in FIXTURE_MODULES {
        let hw = HighestWeight::parse(w)?;
        let basis = enumerate_basis_with(&hw, EnumerateOptions::default())?;
        let label = module_label(&hw);
        let table = tallies.entry(label.clone()).or_default();
        for _ in 0..count {
            let pat = basis.get(rng.gen_range(0..basis.len()));
            for f in GL22_FORMULAS {
                checked += 1;
                let Some((kind, engine, fixture)) = compare_formula(f, &basis, pat)? else {
                    continue;
                };
                *table.entry(f.id).or_default().entry(kind).or_default() += 1;
                if ce.is_none() && !is_classified(f.id, kind) {
                    ce = Some(Counterexample {
                        module: label.clone(),
                        generators: vec![f.generator()],
                        patterns: vec![pat.to_string()],
                        expected: fixture
                            .map(RadicalSum::from)
                            .unwrap_or_else(RadicalSum::zero),
                        actual: engine.into(),
                        breakdown: vec![format!(
                            "{} is {kind}, not listed in the corrections table",
                            f.id
                        )],
                    });
                }
            }
        }
        labels.push(label);
    }
    let details = serde_json::to_value(&tallies).expect("tallies serialize");
    Ok(
        VerifyReport::finish(Suite::Fixture, labels.join("; "), checked, ce, start)
            .with_details(details),
    )
}

/// `elem_raise² = δ̄·c̄` on random (pattern, level, position) triples and
/// the index-set vanishing of c and δ̄ on every sampled row pair.
pub fn check_internal_consistency(
    basis: &BasisIndex,
    count: usize,
    seed: u64,
) -> Result<VerifyReport> {
    let start = Instant::now();
    let label = module_label(basis.highest_weight());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let levels = basis.m() + basis.n();
    let k = Kernels::new(basis);
    let mut ce = None;
    let mut checked = 0;
    let mut fail = |pat: &GTPattern, note: String, expected: Rational, actual: Rational| {
        if ce.is_none() {
            ce = Some(Counterexample {
                module: label.clone(),
                generators: vec![],
                patterns: vec![pat.to_string()],
                expected: expected.into(),
                actual: actual.into(),
                breakdown: vec![note],
            });
        }
    };
    if levels < 2 {
        return Ok(VerifyReport::finish(
            Suite::Consistency,
            label.clone(),
            0,
            None,
            start,
        ));
    }
    for _ in 0..count {
        let pat = basis.get(rng.gen_range(0..basis.len()));
        let p = rng.gen_range(1..levels);
        let r = rng.gen_range(1..=p);
        checked += 1;
        let lhs = k.elem_raise(pat, p, r)?.square();
        let rhs = invariant_nsq(pat, p, r)?;
        if lhs != rhs {
            let fb = elem_factors(pat, p, r)
                .map(|f| f.to_string())
                .unwrap_or_default();
            fail(
                pat,
                format!("level {p} position {r}: closed form {fb}"),
                rhs,
                lhs,
            );
        }
        if basis.contains(&pat.shifted(p, r, 1))
            && elem_nsq(pat, p, r)? != invariant_nsq(pat, p, r)?
        {
            fail(
                pat,
                format!("closed form against invariants at level {p} position {r}"),
                invariant_nsq(pat, p, r)?,
                elem_nsq(pat, p, r)?,
            );
        }
        let pair = RowPair::of_pattern(pat, p)?;
        let it = pair.sets.i_tilde();
        let ii = pair.sets.i();
        for s in 1..=p + 1 {
            checked += 1;
            if !it.contains(&s) {
                let c = invariant_c(&pair, s)?;
                if !c.is_zero() {
                    fail(
                        pat,
                        format!("c_{s} outside the index set at level {p}"),
                        Rational::zero(),
                        c,
                    );
                }
            }
            if !ii.contains(&s) {
                let d = invariant_delta_bar(&pair, s)?;
                if !d.is_zero() {
                    fail(
                        pat,
                        format!("δ̄_{s} outside the index set at level {p}"),
                        Rational::zero(),
                        d,
                    );
                }
            }
        }
    }
    Ok(VerifyReport::finish(
        Suite::Consistency,
        label,
        checked,
        ce,
        start,
    ))
}

/// Entry nonzero exactly when the shifted pattern is valid, over all
/// generators, sources and shift paths.
pub fn check_zero_equivalence(md: &Module) -> Result<VerifyReport> {
    let start = Instant::now();
    let big = md.size();
    let rule = md.basis.rule();
    let k = Kernels::new(&md.basis);
    let mut ce = None;
    let mut checked = 0;
    for p in 1..=big {
        for q in (1..=big).filter(|&q| q != p) {
            let (l, top, raise) = if p < q { (p, q, true) } else { (q, p, false) };
            let delta = if raise { 1 } else { -1 };
            for (col, src) in md.basis.iter().enumerate() {
                let mut expected_nnz = 0;
                for path in ShiftPath::all(l, top) {
                    checked += 1;
                    let tgt = src.shifted_many(&path.shifts(), delta);
                    let valid = validate_pattern(&tgt, rule).is_ok() && tgt.top() == src.top();
                    let v = if raise {
                        k.nonelem_raise(src, &path)?
                    } else {
                        k.nonelem_lower(src, &path)?
                    };
                    let entry = md
                        .basis
                        .index_of(&tgt)
                        .map(|row| md.g(p, q).get(row, col))
                        .unwrap_or_else(RadicalSum::zero);
                    expected_nnz += usize::from(valid);
                    let bad = valid == v.is_zero()
                        || valid != md.basis.contains(&tgt)
                        || entry != RadicalSum::from(v.clone());
                    if bad && ce.is_none() {
                        let mut breakdown = vec![format!(
                            "path {path}: target valid = {valid}, kernel = {v}, entry = {entry}"
                        )];
                        if let Some(row) = md.basis.index_of(&tgt) {
                            breakdown.extend(explain_entry(&md.basis, p, q, row, col));
                        }
                        ce = Some(Counterexample {
                            module: md.label(),
                            generators: vec![(p, q)],
                            patterns: vec![src.to_string(), tgt.to_string()],
                            expected: if valid {
                                entry.clone()
                            } else {
                                RadicalSum::zero()
                            },
                            actual: v.into(),
                            breakdown,
                        });
                    }
                }
                let nnz = md.g(p, q).entries.keys().filter(|(_, c)| *c == col).count();
                if nnz != expected_nnz && ce.is_none() {
                    ce = Some(Counterexample {
                        module: md.label(),
                        generators: vec![(p, q)],
                        patterns: vec![src.to_string()],
                        expected: int(expected_nnz as i64).into(),
                        actual: int(nnz as i64).into(),
                        breakdown: vec![
                            "nonzero entries in the column against valid targets".into()
                        ],
                    });
                }
            }
        }
    }
    Ok(VerifyReport::finish(
        Suite::ZeroEquivalence,
        md.label(),
        checked,
        ce,
        start,
    ))
}

/// The weight ωδ with δ = (−1,…,−1|1,…,1).
pub fn omega_delta(m: usize, n: usize, omega: &Rational) -> Weight {
    Weight::new(vec![-omega.clone(); m], vec![omega.clone(); n])
}

/// Compare the module of `hw` with that of `hw + ωδ`: off-diagonal
/// generators must agree exactly and E_pp must move by `cartan_shift_p`.
pub fn check_translation(
    hw: &HighestWeight,
    omega: &Rational,
    cartan_shift: &Weight,
    rule: BranchingRule,
) -> Result<VerifyReport> {
    let start = Instant::now();
    let (m, n) = (hw.m(), hw.n());
    let moved = HighestWeight::new(hw.weight().add(&omega_delta(m, n, omega))?)?;
    let a = Module::build(hw, rule)?;
    let b = Module::build(&moved, rule)?;
    let label = format!("{} vs ({})", a.label(), moved);
    let mut ce = None;
    let mut checked = 0;
    if a.basis.len() != b.basis.len() {
        ce = Some(Counterexample {
            module: label.clone(),
            generators: vec![],
            patterns: vec![],
            expected: int(a.basis.len() as i64).into(),
            actual: int(b.basis.len() as i64).into(),
            breakdown: vec!["dimension changed under translation".into()],
        });
        return Ok(VerifyReport::finish(
            Suite::OmegaTranslation,
            label,
            1,
            ce,
            start,
        ));
    }
    let shift = cartan_shift.labels();
    for (&(p, q), ma) in &a.gens {
        checked += 1;
        let expected = if p == q {
            let mut id = SparseRepMatrix::zero(a.basis.len(), p, p, 0);
            for i in 0..a.basis.len() {
                id.insert(i, i, RadicalSum::one());
            }
            ma.add_scaled(&id.scale_all(&shift[p - 1]), 1)
        } else {
            ma.clone()
        };
        if ce.is_none() {
            if let Some((row, col, e, v)) = first_difference(&expected, &b.gens[&(p, q)]) {
                ce = Some(Counterexample {
                    module: label.clone(),
                    generators: vec![(p, q)],
                    patterns: vec![b.basis.get(col).to_string(), b.basis.get(row).to_string()],
                    expected: e,
                    actual: v,
                    breakdown: vec![format!(
                        "Cartan shift expected {} on E_{p}{p}",
                        if p == q {
                            shift[p - 1].to_string()
                        } else {
                            "0".into()
                        }
                    )],
                });
            }
        }
    }
    Ok(VerifyReport::finish(
        Suite::OmegaTranslation,
        label,
        checked,
        ce,
        start,
    ))
}

/// Translation by ωδ with the Cartan diagonals moving by ωδ itself.
pub fn check_omega_translation(
    hw: &HighestWeight,
    omega: &Rational,
    rule: BranchingRule,
) -> Result<VerifyReport> {
    check_translation(hw, omega, &omega_delta(hw.m(), hw.n(), omega), rule)
}

/// Options for [`run_suite`].
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub samples: usize,
    pub fixture_count: usize,
    pub omega: Rational,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            samples: 1000,
            fixture_count: 100,
            omega: rat(7, 3),
        }
    }
}

/// Suites meaningful for `hw` when the caller asks for all of them.
pub fn default_suites(hw: &HighestWeight) -> Vec<Suite> {
    let mut v = vec![
        Suite::Commutators,
        Suite::Hermiticity,
        Suite::Nonelementary,
        Suite::HighestWeight,
        Suite::Consistency,
        Suite::ZeroEquivalence,
    ];
    if hw.n() > 0 && classify_type1(hw) == UnitaryClass::TypicalType1 {
        v.insert(4, Suite::Kac);
    }
    if hw.n() > 0 {
        v.push(Suite::OmegaTranslation);
    }
    v
}

/// Run one suite on an assembled module.
pub fn run_suite(suite: Suite, md: &Module, opts: &SuiteOptions) -> Result<VerifyReport> {
    let hw = md.basis.highest_weight();
    match suite {
        Suite::Commutators => Ok(check_commutators(md)),
        Suite::Hermiticity => Ok(check_hermiticity(md)),
        Suite::Nonelementary => Ok(check_nonelementary_oracle(md)),
        Suite::HighestWeight => Ok(check_highest_weight(md)),
        Suite::Kac => check_kac(hw, md.basis.rule()),
        Suite::Consistency => check_internal_consistency(&md.basis, opts.samples, opts.seed),
        Suite::ZeroEquivalence => check_zero_equivalence(md),
        Suite::OmegaTranslation => check_omega_translation(hw, &opts.omega, md.basis.rule()),
        Suite::Fixture => check_gl22_fixture(opts.fixture_count, opts.seed),
    }
}

impl SparseRepMatrix {
    /// Every entry multiplied by `c`.
    pub fn scale_all(&self, c: &Rational) -> SparseRepMatrix {
        let mut out = SparseRepMatrix::zero(self.dim, self.p, self.q, self.parity);
        for (&(r, col), v) in &self.entries {
            out.insert(r, col, v.scale(c));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(w: &str) -> Module {
        Module::build(&HighestWeight::parse(w).unwrap(), BranchingRule::Refined).unwrap()
    }

    #[test]
    fn gl11_suites_pass() {
        let md = module("1|0");
        for r in [
            check_commutators(&md),
            check_hermiticity(&md),
            check_nonelementary_oracle(&md),
            check_highest_weight(&md),
        ] {
            assert!(r.pass, "{}", r.to_json_line(false));
        }
    }

    #[test]
    fn kac_on_typical_gl21() {
        let r = check_kac(
            &HighestWeight::parse("3/2,3/2|0").unwrap(),
            BranchingRule::Refined,
        )
        .unwrap();
        assert!(r.pass, "{}", r.to_json_line(false));
    }

    #[test]
    fn kac_rejects_atypical() {
        assert!(check_kac(
            &HighestWeight::parse("0|0").unwrap(),
            BranchingRule::Refined
        )
        .is_err());
    }

    #[test]
    fn translation_moves_every_diagonal() {
        let hw = HighestWeight::parse("1,0|0").unwrap();
        let r = check_omega_translation(&hw, &rat(1, 3), BranchingRule::Refined).unwrap();
        assert!(r.pass, "{}", r.to_json_line(false));
    }

    #[test]
    fn corrupted_matrix_fails_commutators() {
        let mut md = module("1,0|0");
        let e = md.gens.get_mut(&(1, 2)).unwrap();
        let (&k, _) = e.entries.iter().next().unwrap();
        e.entries.insert(k, RadicalSum::from(int(2)));
        let r = check_commutators(&md);
        assert!(!r.pass);
        assert!(r.counterexample.is_some());
    }

    #[test]
    fn report_json_is_stable() {
        let md = module("0|0");
        let line = check_hermiticity(&md).to_json_line(false);
        assert_eq!(
            line,
            r#"{"checked":3,"counterexample":null,"module":"gl(1|1) (0|0)","pass":true,"suite":"hermiticity"}"#
        );
    }
}
