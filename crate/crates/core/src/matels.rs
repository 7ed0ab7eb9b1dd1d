//! Matrix-element kernels: elementary raising and lowering, the fermionic
//! sign of the even super-level steps, the path phase and the
//! non-elementary shift components.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{int, sqrt_rational, Rational, SignedRadical};
use crate::patterns::{validate_pattern, BasisIndex, BranchingRule, GTPattern};
use crate::roots::root_diff_bar;

/// Decides which shifted patterns belong to the module.
pub trait Validity: Sync {
    fn is_valid(&self, p: &GTPattern) -> bool;
}

impl Validity for BranchingRule {
    fn is_valid(&self, p: &GTPattern) -> bool {
        validate_pattern(p, *self).is_ok()
    }
}

impl Validity for BasisIndex {
    fn is_valid(&self, p: &GTPattern) -> bool {
        self.contains(p)
    }
}

/// Simultaneous shift components: level `l + k` moves position `u[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftPath {
    pub l: usize,
    pub u: Vec<usize>,
}

impl ShiftPath {
    pub fn new(l: usize, u: Vec<usize>) -> Result<Self> {
        if l == 0 || u.is_empty() {
            return Err(Error::Shape(
                "shift path needs l ≥ 1 and at least one level".into(),
            ));
        }
        for (k, &pos) in u.iter().enumerate() {
            if pos == 0 || pos > l + k {
                return Err(Error::Shape(format!(
                    "position {pos} out of range at level {}",
                    l + k
                )));
            }
        }
        Ok(ShiftPath { l, u })
    }

    /// Last level of the path.
    pub fn p(&self) -> usize {
        self.l + self.u.len() - 1
    }

    pub fn levels(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.u
            .iter()
            .enumerate()
            .map(move |(k, &pos)| (self.l + k, pos))
    }

    pub fn shifts(&self) -> Vec<(usize, usize)> {
        self.levels().collect()
    }

    /// Every path of a generator E_{l,q} (l < q): one position per level
    /// l..q−1.
    pub fn all(l: usize, q: usize) -> Vec<ShiftPath> {
        let mut out = vec![Vec::new()];
        for s in l..q {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<usize>| {
                    (1..=s).map(move |pos| {
                        let mut v = prefix.clone();
                        v.push(pos);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(|u| ShiftPath { l, u }).collect()
    }
}

impl fmt::Display for ShiftPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.levels().map(|(s, pos)| format!("{pos}@{s}")).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Affine form in the labels of one pattern, with its value on that pattern.
#[derive(Clone, Debug)]
pub(crate) struct Lin {
    coef: BTreeMap<(usize, usize), i64>,
    constant: Rational,
    value: Rational,
    m: usize,
}

impl Lin {
    pub(crate) fn new(
        coef: BTreeMap<(usize, usize), i64>,
        constant: Rational,
        value: Rational,
        m: usize,
    ) -> Lin {
        Lin {
            coef,
            constant,
            value,
            m,
        }
    }

    pub(crate) fn value(&self) -> &Rational {
        &self.value
    }

    pub(crate) fn label(pat: &GTPattern, level: usize, pos: usize) -> Lin {
        Lin {
            coef: BTreeMap::from([((level, pos), 1)]),
            constant: Rational::zero(),
            value: pat.label(level, pos).clone(),
            m: pat.m(),
        }
    }

    pub(crate) fn plus(&self, c: i64) -> Lin {
        let mut o = self.clone();
        o.constant += int(c);
        o.value += int(c);
        o
    }

    pub(crate) fn neg(&self) -> Lin {
        Lin {
            coef: self.coef.iter().map(|(k, v)| (*k, -v)).collect(),
            constant: -self.constant.clone(),
            value: -self.value.clone(),
            m: self.m,
        }
    }

    pub(crate) fn sub(&self, o: &Lin) -> Lin {
        let mut coef = self.coef.clone();
        for (k, v) in &o.coef {
            *coef.entry(*k).or_insert(0) -= v;
        }
        coef.retain(|_, v| *v != 0);
        Lin {
            coef,
            constant: &self.constant - &o.constant,
            value: &self.value - &o.value,
            m: self.m,
        }
    }

    /// Rate of change when every even label moves together.
    fn derivative(&self) -> i64 {
        self.coef
            .iter()
            .filter(|((_, pos), _)| *pos <= self.m)
            .map(|(_, v)| v)
            .sum()
    }

    fn same(&self, o: &Lin) -> bool {
        self.coef == o.coef && self.constant == o.constant
    }
}

impl fmt::Display for Lin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for ((lvl, pos), c) in &self.coef {
            let sign = if *c < 0 {
                "−"
            } else if s.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = if c.abs() == 1 {
                String::new()
            } else {
                c.abs().to_string()
            };
            s.push_str(&format!("{sign}{mag}λ[{pos},{lvl}]"));
        }
        if !self.constant.is_zero() || s.is_empty() {
            if self.constant.is_negative() {
                s.push_str(&format!("−{}", -self.constant.clone()));
            } else {
                s.push_str(&format!(
                    "{}{}",
                    if s.is_empty() { "" } else { "+" },
                    self.constant
                ));
            }
        }
        write!(f, "({s} = {})", self.value)
    }
}

/// Numerator and denominator factor lists of one closed-form kernel.
#[derive(Clone, Debug, Default)]
pub struct FactorBreakdown {
    sign: i64,
    num: Vec<Lin>,
    den: Vec<Lin>,
}

impl FactorBreakdown {
    pub(crate) fn new(sign: i64, num: Vec<Lin>, den: Vec<Lin>) -> Self {
        FactorBreakdown { sign, num, den }
    }

    /// Cancel factors that agree up to sign, then take the limit along the
    /// common even-label direction to resolve the remaining zero factors.
    pub fn evaluate(&self) -> Result<Rational> {
        let mut num = self.num.clone();
        let mut sign = self.sign;
        let mut den = Vec::new();
        for f in &self.den {
            if let Some(j) = num.iter().position(|g| g.same(f)) {
                num.remove(j);
            } else if let Some(j) = num.iter().position(|g| g.same(&f.neg())) {
                num.remove(j);
                sign = -sign;
            } else {
                den.push(f.clone());
            }
        }
        let mut v = int(sign);
        let (mut zn, mut zd) = (0usize, 0usize);
        for f in &num {
            if f.value.is_zero() {
                let d = f.derivative();
                if d == 0 {
                    return Ok(Rational::zero());
                }
                zn += 1;
                v *= int(d);
            } else {
                v *= &f.value;
            }
        }
        for f in &den {
            if f.value.is_zero() {
                let d = f.derivative();
                if d == 0 {
                    return Err(Error::ZeroDenominator(format!("factor {f}")));
                }
                zd += 1;
                v /= int(d);
            } else {
                v /= &f.value;
            }
        }
        match zn.cmp(&zd) {
            std::cmp::Ordering::Greater => Ok(Rational::zero()),
            std::cmp::Ordering::Less => Err(Error::Pole(format!(
                "{} zero numerator vs {} zero denominator factors",
                zn, zd
            ))),
            std::cmp::Ordering::Equal => Ok(v),
        }
    }
}

impl fmt::Display for FactorBreakdown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n: Vec<String> = self.num.iter().map(|x| x.to_string()).collect();
        let d: Vec<String> = self.den.iter().map(|x| x.to_string()).collect();
        write!(
            f,
            "{} · [{}] / [{}]",
            if self.sign < 0 { "−" } else { "+" },
            n.join(" "),
            d.join(" ")
        )
    }
}

fn alpha_forms(pat: &GTPattern, p: usize) -> Vec<Lin> {
    let m = pat.m();
    if p <= m {
        return (1..=p)
            .map(|i| Lin::label(pat, p, i).plus((p - i) as i64))
            .collect();
    }
    let k = (p - m) as i64;
    let mut out: Vec<Lin> = (1..=m)
        .map(|i| Lin::label(pat, p, i).plus(m as i64 - k - i as i64))
        .collect();
    out.extend((1..=k).map(|mu| Lin::label(pat, p, m + mu as usize).neg().plus(mu - k)));
    out
}

/// The closed-form factors of (N^p_r)² on `pat`.
pub fn elem_factors(pat: &GTPattern, p: usize, r: usize) -> Result<FactorBreakdown> {
    let m = pat.m();
    let big = pat.levels();
    if p == 0 || p >= big || r == 0 || r > p {
        return Err(Error::Shape(format!(
            "no elementary step at level {p}, position {r}"
        )));
    }
    let a = |q: usize| {
        if q == 0 {
            Vec::new()
        } else {
            alpha_forms(pat, q)
        }
    };
    let (ap, app, apm) = (a(p), a(p + 1), a(p - 1));
    let mut num = Vec::new();
    let mut den = Vec::new();
    let sign;
    if p < m {
        let ar = &ap[r - 1];
        for k in 1..=p + 1 {
            num.push(app[k - 1].sub(ar).plus(-1));
        }
        for k in 1..p {
            num.push(ar.sub(&apm[k - 1]));
        }
        for k in (1..=p).filter(|&k| k != r) {
            den.push(ar.sub(&ap[k - 1]).plus(1));
            den.push(ar.sub(&ap[k - 1]));
        }
        sign = if p % 2 == 0 { 1 } else { -1 };
    } else if p == m {
        let ai = &ap[r - 1];
        num.push(app[m].sub(ai).plus(-1));
        num.push(app[r - 1].sub(ai).plus(1));
        for k in 1..m {
            num.push(apm[k - 1].sub(ai));
        }
        for k in (1..=m).filter(|&k| k != r) {
            den.push(app[k - 1].sub(ai));
        }
        sign = -1;
    } else {
        let kk = p - m;
        let ax = &ap[r - 1];
        if r <= m {
            for k in (1..=m).filter(|&k| k != r) {
                num.push(ap[k - 1].sub(ax).plus(-1));
                num.push(ap[k - 1].sub(ax));
                den.push(apm[k - 1].sub(ax).plus(-1));
                den.push(app[k - 1].sub(ax));
            }
            for nu in 1..kk {
                num.push(apm[m + nu - 1].sub(ax).plus(-2));
            }
            for nu in 1..=kk + 1 {
                num.push(app[m + nu - 1].sub(ax).plus(-1));
            }
            for nu in 1..=kk {
                den.push(ap[m + nu - 1].sub(ax).plus(-2));
                den.push(ap[m + nu - 1].sub(ax).plus(-1));
            }
            sign = 1;
        } else {
            let mu = r - m;
            for k in 1..=m {
                num.push(ap[k - 1].sub(ax).plus(1));
                num.push(ap[k - 1].sub(ax).plus(2));
                den.push(apm[k - 1].sub(ax).plus(1));
                den.push(app[k - 1].sub(ax).plus(2));
            }
            for nu in 1..kk {
                num.push(apm[m + nu - 1].sub(ax));
            }
            for nu in 1..=kk + 1 {
                num.push(app[m + nu - 1].sub(ax).plus(1));
            }
            for nu in (1..=kk).filter(|&nu| nu != mu) {
                den.push(ap[m + nu - 1].sub(ax));
                den.push(ap[m + nu - 1].sub(ax).plus(1));
            }
            sign = -1;
        }
    }
    Ok(FactorBreakdown { sign, num, den })
}

/// (N^p_r)² on `pat` from the closed forms, without checking the shift.
pub fn elem_nsq(pat: &GTPattern, p: usize, r: usize) -> Result<Rational> {
    elem_factors(pat, p, r)?.evaluate()
}

fn theta(pat: &GTPattern, level: usize, pos: usize) -> Rational {
    pat.label(level + 1, pos) - pat.label(level, pos)
}

/// Sign carried by the raising element at level p, position r. Raising an
/// even label at a super level passes the odd content of the rows above and
/// below; the sign counts the even steps it crosses.
pub fn elem_sign(pat: &GTPattern, p: usize, r: usize) -> i8 {
    let m = pat.m();
    if p < m || r > m {
        return 1;
    }
    let mut s: Rational = (1..r).map(|k| theta(pat, p, k)).sum();
    if p > m {
        s += (r + 1..=m).map(|k| theta(pat, p - 1, k)).sum::<Rational>();
    }
    if s.to_integer().is_even() {
        1
    } else {
        -1
    }
}

/// Matrix-element kernels for one validity oracle.
pub struct Kernels<'a, V: Validity + ?Sized> {
    valid: &'a V,
}

impl<'a, V: Validity + ?Sized> Kernels<'a, V> {
    pub fn new(valid: &'a V) -> Self {
        Kernels { valid }
    }

    /// Nonnegative magnitude ⟨pat + Δ|E_{p,p+1}|pat⟩; zero if the shift
    /// leaves the module.
    pub fn elem_raise(&self, pat: &GTPattern, p: usize, r: usize) -> Result<SignedRadical> {
        if !self.valid.is_valid(&pat.shifted(p, r, 1)) {
            return Ok(SignedRadical::zero());
        }
        let v = elem_nsq(pat, p, r)?;
        sqrt_rational(&v, 1)
    }

    /// Nonnegative magnitude ⟨pat − Δ|E_{p+1,p}|pat⟩.
    pub fn elem_lower(&self, pat: &GTPattern, p: usize, r: usize) -> Result<SignedRadical> {
        let src = pat.shifted(p, r, -1);
        if !self.valid.is_valid(&src) {
            return Ok(SignedRadical::zero());
        }
        self.elem_raise(&src, p, r)
    }

    /// Signed raising entry used in the assembled matrices.
    pub fn signed_raise(&self, pat: &GTPattern, p: usize, r: usize) -> Result<SignedRadical> {
        let v = self.elem_raise(pat, p, r)?;
        Ok(if elem_sign(pat, p, r) < 0 {
            v.scale(&-Rational::one())
        } else {
            v
        })
    }

    /// Signed lowering entry; the lowering matrix is the transpose of the
    /// raising one.
    pub fn signed_lower(&self, pat: &GTPattern, p: usize, r: usize) -> Result<SignedRadical> {
        let src = pat.shifted(p, r, -1);
        if !self.valid.is_valid(&src) {
            return Ok(SignedRadical::zero());
        }
        self.signed_raise(&src, p, r)
    }

    /// ⟨pat + Δ_path|E_{l,p+1}|pat⟩ for a path with at least two levels.
    /// The entry is a product of signed elementary entries along any order of
    /// the single steps that stays inside the module, divided by the root
    /// differences β̄ − ᾱ of consecutive levels; a difference whose lower
    /// level is shifted after the upper one is taken at the shifted position.
    pub fn nonelem_raise(&self, pat: &GTPattern, path: &ShiftPath) -> Result<SignedRadical> {
        let shifts = path.shifts();
        if shifts.len() == 1 {
            return self.signed_raise(pat, shifts[0].0, shifts[0].1);
        }
        if !self.valid.is_valid(&pat.shifted_many(&shifts, 1)) {
            return Ok(SignedRadical::zero());
        }
        let order = self.valid_order(pat, &shifts).ok_or_else(|| {
            Error::Kernel(format!("no admissible step order for {path} on {pat}"))
        })?;
        let mut prod = SignedRadical::one();
        let mut cur = pat.clone();
        for &k in &order {
            let (lvl, pos) = shifts[k];
            prod = prod.mul(&self.signed_raise(&cur, lvl, pos)?);
            cur = cur.shifted(lvl, pos, 1);
        }
        let mut rank = vec![0usize; shifts.len()];
        for (t, &k) in order.iter().enumerate() {
            rank[k] = t;
        }
        let m = pat.m();
        let mut scale = Rational::one();
        for k in 1..shifts.len() {
            let (s, us) = shifts[k];
            let up = shifts[k - 1].1;
            let d = root_diff_bar(pat, s, us, up);
            let sup = s > m;
            let dh = if rank[k - 1] < rank[k] {
                d
            } else {
                d + int(if sup { 1 } else { -1 })
            };
            if dh.is_zero() {
                return Err(Error::ZeroDenominator(format!(
                    "root difference at level {s} on {path}"
                )));
            }
            let kappa = if sup {
                Rational::one()
            } else {
                -Rational::one()
            };
            scale *= kappa / dh;
        }
        Ok(prod.scale(&scale))
    }

    /// ⟨pat − Δ_path|E_{p+1,l}|pat⟩, the transpose of raising.
    pub fn nonelem_lower(&self, pat: &GTPattern, path: &ShiftPath) -> Result<SignedRadical> {
        let src = pat.shifted_many(&path.shifts(), -1);
        if !self.valid.is_valid(&src) {
            return Ok(SignedRadical::zero());
        }
        self.nonelem_raise(&src, path)
    }

    /// The displayed product formula: phase times elementary magnitudes on
    /// the unshifted pattern over √|(Δ+1)Δ| per consecutive level pair.
    pub fn nonelem_raise_printed(
        &self,
        pat: &GTPattern,
        path: &ShiftPath,
    ) -> Result<SignedRadical> {
        let shifts = path.shifts();
        if !self.valid.is_valid(&pat.shifted_many(&shifts, 1)) {
            return Ok(SignedRadical::zero());
        }
        let mut sq = Rational::one();
        for &(lvl, pos) in &shifts {
            sq *= elem_nsq(pat, lvl, pos)?.abs();
        }
        for k in 1..shifts.len() {
            let d = root_diff_bar(pat, shifts[k].0, shifts[k].1, shifts[k - 1].1);
            let dd = (&d + Rational::one()) * &d;
            if dd.is_zero() {
                return Err(Error::ZeroDenominator(format!(
                    "root difference at level {} on {path}",
                    shifts[k].0
                )));
            }
            sq /= dd.abs();
        }
        sqrt_rational(&sq, phase_sign(path, pat.m()))
    }

    fn valid_order(&self, pat: &GTPattern, shifts: &[(usize, usize)]) -> Option<Vec<usize>> {
        fn dfs<V: Validity + ?Sized>(
            v: &V,
            cur: &GTPattern,
            shifts: &[(usize, usize)],
            used: &mut Vec<bool>,
            order: &mut Vec<usize>,
        ) -> bool {
            if order.len() == shifts.len() {
                return true;
            }
            for k in 0..shifts.len() {
                if used[k] {
                    continue;
                }
                let next = cur.shifted(shifts[k].0, shifts[k].1, 1);
                if !v.is_valid(&next) {
                    continue;
                }
                used[k] = true;
                order.push(k);
                if dfs(v, &next, shifts, used, order) {
                    return true;
                }
                order.pop();
                used[k] = false;
            }
            false
        }
        let mut used = vec![false; shifts.len()];
        let mut order = Vec::new();
        dfs(self.valid, pat, shifts, &mut used, &mut order).then_some(order)
    }
}

fn pos_is_odd(level: usize, pos: usize, m: usize) -> bool {
    level > m && pos > m
}

/// The displayed path phase ∏ (−1)^{(u_{s−1})(u_s)} S(u_s − u_{s−1}), with
/// odd positions ordered above even ones and S(0) = 1.
pub fn phase_sign(path: &ShiftPath, m: usize) -> i8 {
    let mut sign = 1i8;
    let lv: Vec<(usize, usize)> = path.shifts();
    for k in 1..lv.len() {
        let (s0, a) = lv[k - 1];
        let (s1, b) = lv[k];
        let (oa, ob) = (pos_is_odd(s0, a, m), pos_is_odd(s1, b, m));
        if oa && ob {
            sign = -sign;
        }
        let key = |odd: bool, pos: usize| (odd as u8, pos);
        if key(ob, b) < key(oa, a) {
            sign = -sign;
        }
    }
    sign
}

/// Elementary raising magnitude under a branching rule.
pub fn elem_raise(
    pat: &GTPattern,
    p: usize,
    r: usize,
    rule: BranchingRule,
) -> Result<SignedRadical> {
    Kernels::new(&rule).elem_raise(pat, p, r)
}

/// Elementary lowering magnitude under a branching rule.
pub fn elem_lower(
    pat: &GTPattern,
    p: usize,
    r: usize,
    rule: BranchingRule,
) -> Result<SignedRadical> {
    Kernels::new(&rule).elem_lower(pat, p, r)
}

pub fn nonelem_raise(
    pat: &GTPattern,
    path: &ShiftPath,
    rule: BranchingRule,
) -> Result<SignedRadical> {
    Kernels::new(&rule).nonelem_raise(pat, path)
}

pub fn nonelem_lower(
    pat: &GTPattern,
    path: &ShiftPath,
    rule: BranchingRule,
) -> Result<SignedRadical> {
    Kernels::new(&rule).nonelem_lower(pat, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::enumerate_basis;
    use crate::weights::HighestWeight;

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn classical_gl2_step() {
        let p = GTPattern::from_top_down(2, 0, vec![row(&[1, 0]), row(&[0])]).unwrap();
        assert_eq!(
            elem_raise(&p, 1, 1, BranchingRule::Refined).unwrap(),
            SignedRadical::one()
        );
    }

    #[test]
    fn gl11_defining() {
        let lo = GTPattern::from_top_down(1, 1, vec![row(&[1, 0]), row(&[0])]).unwrap();
        let hi = GTPattern::from_top_down(1, 1, vec![row(&[1, 0]), row(&[1])]).unwrap();
        let rule = BranchingRule::Refined;
        assert_eq!(elem_raise(&lo, 1, 1, rule).unwrap(), SignedRadical::one());
        assert!(elem_raise(&hi, 1, 1, rule).unwrap().is_zero());
        assert_eq!(elem_lower(&hi, 1, 1, rule).unwrap(), SignedRadical::one());
    }

    #[test]
    fn phase_examples() {
        assert_eq!(phase_sign(&ShiftPath::new(2, vec![1]).unwrap(), 2), 1);
        assert_eq!(phase_sign(&ShiftPath::new(2, vec![2, 3]).unwrap(), 2), 1);
        assert_eq!(phase_sign(&ShiftPath::new(3, vec![3, 2]).unwrap(), 2), -1);
        assert_eq!(phase_sign(&ShiftPath::new(3, vec![3, 4]).unwrap(), 2), -1);
    }

    #[test]
    fn paths_enumerated() {
        assert_eq!(ShiftPath::all(1, 4).len(), 6);
        assert_eq!(
            ShiftPath::all(2, 3),
            vec![
                ShiftPath { l: 2, u: vec![1] },
                ShiftPath { l: 2, u: vec![2] }
            ]
        );
    }

    #[test]
    fn cancellation_resolves_coincident_labels() {
        let hw = HighestWeight::parse("5/2,5/2|0,0").unwrap();
        let b = enumerate_basis(&hw).unwrap();
        for pat in b.iter() {
            for p in 1..4 {
                for r in 1..=p {
                    let v = b.contains(&pat.shifted(p, r, 1));
                    let e = Kernels::new(&b).elem_raise(pat, p, r).unwrap();
                    assert_eq!(v, !e.is_zero(), "{pat} {p} {r}");
                }
            }
        }
    }
}
