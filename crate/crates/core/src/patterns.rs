//! Gelfand-Tsetlin patterns for the chain
//! gl(m|n) ⊃ gl(m|n−1) ⊃ … ⊃ gl(m|1) ⊃ gl(m) ⊃ … ⊃ gl(1),
//! branching, validation and basis enumeration.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{int, is_integer, parse_rational, Rational};
use crate::weights::{
    classify_type1, classify_type1_weight, is_dominant_block, rho_shifted_pairing, HighestWeight,
    UnitaryClass, Weight,
};

/// One basis vector: row `p` (level p, 1-based) holds `p` labels; at levels
/// above m the first m labels are even and the rest odd.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GTPattern {
    m: usize,
    n: usize,
    rows: Vec<Vec<Rational>>,
}

impl GTPattern {
    /// Build from rows listed by level, bottom row first.
    pub fn from_levels(m: usize, n: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.len() != m + n {
            return Err(Error::Shape(format!(
                "expected {} rows, got {}",
                m + n,
                rows.len()
            )));
        }
        for (k, r) in rows.iter().enumerate() {
            if r.len() != k + 1 {
                return Err(Error::Shape(format!(
                    "row {} has {} labels, expected {}",
                    k + 1,
                    r.len(),
                    k + 1
                )));
            }
        }
        Ok(GTPattern { m, n, rows })
    }

    /// Build from rows listed top row first.
    pub fn from_top_down(m: usize, n: usize, mut rows: Vec<Vec<Rational>>) -> Result<Self> {
        rows.reverse();
        Self::from_levels(m, n, rows)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rows, m + n.
    pub fn levels(&self) -> usize {
        self.m + self.n
    }

    /// Labels of level `p` (1-based).
    pub fn row(&self, p: usize) -> &[Rational] {
        &self.rows[p - 1]
    }

    /// Label at level `p`, position `pos` (both 1-based).
    pub fn label(&self, p: usize, pos: usize) -> &Rational {
        &self.rows[p - 1][pos - 1]
    }

    pub fn top(&self) -> &[Rational] {
        self.row(self.levels())
    }

    pub fn rows_top_down(&self) -> impl Iterator<Item = &Vec<Rational>> {
        self.rows.iter().rev()
    }

    /// Copy with `λ_{pos,p}` moved by `delta`.
    pub fn shifted(&self, p: usize, pos: usize, delta: i64) -> GTPattern {
        let mut out = self.clone();
        out.rows[p - 1][pos - 1] += int(delta);
        out
    }

    /// Copy with one label moved by `delta` at each `(level, position)`.
    pub fn shifted_many(&self, shifts: &[(usize, usize)], delta: i64) -> GTPattern {
        let mut out = self.clone();
        for &(p, pos) in shifts {
            out.rows[p - 1][pos - 1] += int(delta);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pattern serialises")
    }

    /// Parse `{"rows": [[...], ...]}` with rows top-down.
    pub fn from_json(m: usize, s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Repr {
            rows: Vec<Vec<String>>,
        }
        let r: Repr = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let rows = r
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| parse_rational(x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let total = rows.len();
        if m == 0 || m > total {
            return Err(Error::Shape(format!("m = {m} does not fit {total} rows")));
        }
        Self::from_top_down(m, total - m, rows)
    }
}

impl Serialize for GTPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            rows: Vec<Vec<String>>,
        }
        Repr {
            rows: self
                .rows_top_down()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl fmt::Display for GTPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.m;
        let rows: Vec<String> = self
            .rows_top_down()
            .map(|r| {
                let e: Vec<String> = r.iter().take(m).map(|x| x.to_string()).collect();
                let o: Vec<String> = r.iter().skip(m).map(|x| x.to_string()).collect();
                if r.len() > m {
                    format!("({}|{})", e.join(","), o.join(","))
                } else {
                    format!("({})", e.join(","))
                }
            })
            .collect();
        write!(f, "{}", rows.join(" "))
    }
}

impl Ord for GTPattern {
    /// Canonical order: rows compared top row first, left to right, larger
    /// labels first.
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.rows_top_down().zip(other.rows_top_down()) {
            for (x, y) in a.iter().zip(b.iter()) {
                match y.cmp(x) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
        }
        (self.m, self.n).cmp(&(other.m, other.n))
    }
}

impl PartialOrd for GTPattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Which branching conditions define the basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BranchingRule {
    /// Row-pair betweenness and row-weight conditions only.
    Literal,
    /// The same conditions, and for covariant tensor modules (top row minus ωδ
    /// a partition-labelled weight) every row of length ≥ m minus ωδ must be
    /// covariant as well.
    #[default]
    Refined,
}

/// The branching condition that failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    Shape,
    SuperBetweenness,
    BottomSuperStep,
    Classical,
    RowUnitary,
    Covariance,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::Shape => "shape",
            Condition::SuperBetweenness => "super-level betweenness",
            Condition::BottomSuperStep => "gl(m|1) to gl(m) step",
            Condition::Classical => "classical betweenness",
            Condition::RowUnitary => "row weight",
            Condition::Covariance => "covariant row structure",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: Condition,
    pub row: usize,
    pub position: usize,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at row {}, position {}: {}",
            self.condition, self.row, self.position, self.detail
        )
    }
}

fn violation(
    condition: Condition,
    row: usize,
    position: usize,
    detail: impl Into<String>,
) -> Violation {
    Violation {
        condition,
        row,
        position,
        detail: detail.into(),
    }
}

fn between(hi: &Rational, x: &Rational, lo: &Rational) -> bool {
    hi >= x && x >= lo && is_integer(&(hi - x))
}

fn even_step(upper: &Rational, lower: &Rational) -> bool {
    let d = upper - lower;
    d.is_zero() || d.is_one()
}

fn row_weight(row: &[Rational], m: usize) -> Weight {
    let k = row.len().min(m);
    Weight::new(row[..k].to_vec(), row[k..].to_vec())
}

/// Check one row as a type 1 unitary highest weight of its level.
fn check_row(row: &[Rational], p: usize, m: usize) -> std::result::Result<(), Violation> {
    let w = row_weight(row, m);
    if !is_dominant_block(&w.even) {
        return Err(violation(
            Condition::RowUnitary,
            p,
            0,
            "even labels not dominant",
        ));
    }
    if !is_dominant_block(&w.odd) {
        return Err(violation(
            Condition::RowUnitary,
            p,
            m + 1,
            "odd labels not dominant",
        ));
    }
    if p > m && classify_type1_weight(&w) == UnitaryClass::NotType1 {
        return Err(violation(
            Condition::RowUnitary,
            p,
            0,
            format!("row ({w}) is not type 1 unitary"),
        ));
    }
    Ok(())
}

/// Check the pair (level p, level p − 1) against the betweenness conditions.
fn check_pair(
    upper: &[Rational],
    lower: &[Rational],
    p: usize,
    m: usize,
) -> std::result::Result<(), Violation> {
    let q = p - 1;
    if p <= m {
        for i in 0..q {
            if !between(&upper[i], &lower[i], &upper[i + 1]) {
                return Err(violation(
                    Condition::Classical,
                    q,
                    i + 1,
                    format!("{} not between {} and {}", lower[i], upper[i], upper[i + 1]),
                ));
            }
        }
        return Ok(());
    }
    let cond = if p == m + 1 {
        Condition::BottomSuperStep
    } else {
        Condition::SuperBetweenness
    };
    for i in 0..m {
        if !even_step(&upper[i], &lower[i]) {
            return Err(violation(
                cond,
                q,
                i + 1,
                format!(
                    "even label {} is not {} or {} − 1",
                    lower[i], upper[i], upper[i]
                ),
            ));
        }
    }
    if p == m + 1 {
        let w = row_weight(upper, m);
        if rho_shifted_pairing(&w, m, 1).is_zero() && lower[m - 1] != upper[m - 1] {
            return Err(violation(
                cond,
                q,
                m,
                "atypical gl(m|1) row forces the last even label to stay",
            ));
        }
        return Ok(());
    }
    for mu in 0..(q - m) {
        let (hi, x, lo) = (&upper[m + mu], &lower[m + mu], &upper[m + mu + 1]);
        if !between(hi, x, lo) {
            return Err(violation(
                cond,
                q,
                m + mu + 1,
                format!("odd label {x} not between {hi} and {lo}"),
            ));
        }
    }
    Ok(())
}

/// The ωδ offset of a covariant top row, if the top row is covariant.
pub fn covariant_offset(top: &[Rational], m: usize) -> Option<Rational> {
    let w = if top.len() > m {
        top.last().unwrap().clone()
    } else {
        Rational::zero()
    };
    is_covariant_row(top, m, &w).then_some(w)
}

/// `row − ωδ` has nonnegative integer labels and its even part is long
/// enough to host the odd part of the partition.
pub fn is_covariant_row(row: &[Rational], m: usize, omega: &Rational) -> bool {
    let k = row.len().min(m);
    let ev: Vec<Rational> = row[..k].iter().map(|x| x + omega).collect();
    let od: Vec<Rational> = row[k..].iter().map(|x| x - omega).collect();
    if ev
        .iter()
        .chain(od.iter())
        .any(|x| !is_integer(x) || x.is_negative())
    {
        return false;
    }
    if row.len() < m {
        return true;
    }
    let positive = od.iter().filter(|x| x.is_positive()).count() as i64;
    ev[m - 1] >= int(positive)
}

/// Full validation of a pattern.
pub fn validate_pattern(p: &GTPattern, rule: BranchingRule) -> std::result::Result<(), Violation> {
    let (m, big) = (p.m, p.levels());
    for lev in 1..=big {
        if p.row(lev).len() != lev {
            return Err(violation(Condition::Shape, lev, 0, "wrong row length"));
        }
    }
    check_row(p.top(), big, m)?;
    for lev in (2..=big).rev() {
        check_pair(p.row(lev), p.row(lev - 1), lev, m)?;
        check_row(p.row(lev - 1), lev - 1, m)?;
    }
    if rule == BranchingRule::Refined {
        if let Some(w) = covariant_offset(p.top(), m) {
            for lev in m..big {
                if !is_covariant_row(p.row(lev), m, &w) {
                    return Err(violation(
                        Condition::Covariance,
                        lev,
                        0,
                        "row is not covariant",
                    ));
                }
            }
        }
    }
    Ok(())
}

fn cartesian(choices: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = vec![Vec::new()];
    for c in choices {
        let mut next = Vec::with_capacity(out.len() * c.len());
        for prefix in &out {
            for x in c {
                let mut v = prefix.clone();
                v.push(x.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn descending_range(hi: &Rational, lo: &Rational) -> Vec<Rational> {
    let d = hi - lo;
    if !is_integer(&d) || d.is_negative() {
        return Vec::new();
    }
    let steps = d.to_integer().to_i64().expect("small label gap");
    (0..=steps).map(|t| hi - int(t)).collect()
}

/// All level-(p−1) rows allowed below `row` (level p) by the branching conditions,
/// in canonical (descending) order.
pub fn branch(row: &[Rational], m: usize) -> Vec<Vec<Rational>> {
    let p = row.len();
    if p <= 1 {
        return Vec::new();
    }
    let mut choices = Vec::new();
    if p <= m {
        for i in 0..p - 1 {
            choices.push(descending_range(&row[i], &row[i + 1]));
        }
    } else {
        let atypical_bottom =
            p == m + 1 && rho_shifted_pairing(&row_weight(row, m), m, 1).is_zero();
        for i in 0..m {
            if atypical_bottom && i == m - 1 {
                choices.push(vec![row[i].clone()]);
            } else {
                choices.push(vec![row[i].clone(), &row[i] - Rational::one()]);
            }
        }
        for mu in 0..(p - 1 - m) {
            choices.push(descending_range(&row[m + mu], &row[m + mu + 1]));
        }
    }
    cartesian(&choices)
        .into_iter()
        .filter(|c| check_row(c, p - 1, m).is_ok())
        .collect()
}

/// The free betweenness set below a super row: even labels λ or λ − 1 with
/// dominant result, odd labels between their neighbours; no unitarity filter.
pub fn free_betweenness_set(row: &[Rational], m: usize) -> Vec<Vec<Rational>> {
    let p = row.len();
    assert!(p > m, "free betweenness set is defined below super rows");
    let mut choices: Vec<Vec<Rational>> = (0..m)
        .map(|i| vec![row[i].clone(), &row[i] - Rational::one()])
        .collect();
    for mu in 0..(p - 1 - m) {
        choices.push(descending_range(&row[m + mu], &row[m + mu + 1]));
    }
    cartesian(&choices)
        .into_iter()
        .filter(|c| is_dominant_block(&c[..m]))
        .collect()
}

/// Concurrent-read-safe memo of `branch` results.
#[derive(Default)]
pub struct BranchCache {
    m: usize,
    map: RwLock<HashMap<Vec<Rational>, Arc<Vec<Vec<Rational>>>>>,
}

impl BranchCache {
    pub fn new(m: usize) -> Self {
        BranchCache {
            m,
            map: RwLock::new(HashMap::new()),
        }
    }

    pub fn branch(&self, row: &[Rational]) -> Arc<Vec<Vec<Rational>>> {
        if let Some(v) = self.map.read().expect("cache lock").get(row) {
            return v.clone();
        }
        let v = Arc::new(branch(row, self.m));
        self.map
            .write()
            .expect("cache lock")
            .entry(row.to_vec())
            .or_insert(v)
            .clone()
    }
}

/// Ordered basis with reverse lookup.
#[derive(Clone, Debug)]
pub struct BasisIndex {
    hw: HighestWeight,
    rule: BranchingRule,
    patterns: Vec<GTPattern>,
    lookup: HashMap<GTPattern, usize>,
}

impl BasisIndex {
    pub fn highest_weight(&self) -> &HighestWeight {
        &self.hw
    }

    pub fn rule(&self) -> BranchingRule {
        self.rule
    }

    pub fn m(&self) -> usize {
        self.hw.m()
    }

    pub fn n(&self) -> usize {
        self.hw.n()
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn get(&self, i: usize) -> &GTPattern {
        &self.patterns[i]
    }

    pub fn index_of(&self, p: &GTPattern) -> Option<usize> {
        self.lookup.get(p).copied()
    }

    pub fn contains(&self, p: &GTPattern) -> bool {
        self.lookup.contains_key(p)
    }

    pub fn patterns(&self) -> &[GTPattern] {
        &self.patterns
    }

    pub fn iter(&self) -> impl Iterator<Item = &GTPattern> {
        self.patterns.iter()
    }
}

/// Enumeration options.
#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    pub rule: BranchingRule,
    pub max_dim: Option<usize>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            rule: BranchingRule::Refined,
            max_dim: None,
        }
    }
}

/// All valid patterns with top row `hw`, in canonical order.
pub fn enumerate_basis(hw: &HighestWeight) -> Result<BasisIndex> {
    enumerate_basis_with(hw, EnumerateOptions::default())
}

pub fn enumerate_basis_with(hw: &HighestWeight, opts: EnumerateOptions) -> Result<BasisIndex> {
    if !classify_type1(hw).is_type1() {
        return Err(Error::NotUnitary(hw.to_string()));
    }
    let (m, n) = (hw.m(), hw.n());
    let top = hw.labels();
    let cov = match opts.rule {
        BranchingRule::Refined => covariant_offset(&top, m),
        BranchingRule::Literal => None,
    };
    let cache = BranchCache::new(m);
    let mut patterns = Vec::new();
    let mut stack: Vec<Vec<Rational>> = vec![top];
    fn rec(
        stack: &mut Vec<Vec<Rational>>,
        cache: &BranchCache,
        cov: &Option<Rational>,
        m: usize,
        n: usize,
        limit: Option<usize>,
        out: &mut Vec<GTPattern>,
    ) -> Result<()> {
        let cur = stack.last().unwrap().clone();
        if cur.len() == 1 {
            if let Some(l) = limit {
                if out.len() >= l {
                    return Err(Error::TooLarge(l));
                }
            }
            out.push(GTPattern::from_top_down(m, n, stack.clone()).expect("shape"));
            return Ok(());
        }
        for child in cache.branch(&cur).iter() {
            if let Some(w) = cov {
                if child.len() >= m && !is_covariant_row(child, m, w) {
                    continue;
                }
            }
            stack.push(child.clone());
            rec(stack, cache, cov, m, n, limit, out)?;
            stack.pop();
        }
        Ok(())
    }
    rec(&mut stack, &cache, &cov, m, n, opts.max_dim, &mut patterns)?;
    let lookup = patterns
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    Ok(BasisIndex {
        hw: hw.clone(),
        rule: opts.rule,
        patterns,
        lookup,
    })
}

/// Weight of a basis vector: coordinate p is the row-sum difference.
pub fn pattern_weight(p: &GTPattern) -> Weight {
    let sums: Vec<Rational> = (1..=p.levels()).map(|l| p.row(l).iter().sum()).collect();
    let coords: Vec<Rational> = (0..sums.len())
        .map(|k| {
            if k == 0 {
                sums[0].clone()
            } else {
                &sums[k] - &sums[k - 1]
            }
        })
        .collect();
    Weight::from_labels(p.m, &coords)
}

pub fn dimension(hw: &HighestWeight) -> Result<usize> {
    Ok(enumerate_basis(hw)?.len())
}

/// Weyl dimension of the gl(k) module with dominant labels `v`.
pub fn weyl_dimension(v: &[Rational]) -> Rational {
    let mut d = Rational::one();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let gap = int((j - i) as i64);
            d *= (&v[i] - &v[j] + &gap) / gap;
        }
    }
    d
}
