//! Characteristic roots, index sets and the invariant eigenvalues
//! c, c̄, δ, δ̄, ρ, ρ̄ for an adjacent pair of pattern rows.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{int, is_integer, Rational};
use crate::matels::{FactorBreakdown, Lin};
use crate::patterns::GTPattern;

/// Roots of one chain level. Positions are 1-based: 1..min(p, m) even,
/// the rest odd.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelRoots {
    pub level: usize,
    pub m: usize,
    #[serde(with = "rational_vec")]
    pub alpha: Vec<Rational>,
    #[serde(with = "rational_vec")]
    pub alpha_bar: Vec<Rational>,
}

mod rational_vec {
    use serde::Serializer;

    use crate::exactnum::Rational;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }
}

impl LevelRoots {
    pub fn alpha_at(&self, pos: usize) -> &Rational {
        &self.alpha[pos - 1]
    }

    pub fn alpha_bar_at(&self, pos: usize) -> &Rational {
        &self.alpha_bar[pos - 1]
    }

    pub fn even_alpha(&self) -> &[Rational] {
        &self.alpha[..self.level.min(self.m)]
    }

    pub fn odd_alpha(&self) -> &[Rational] {
        &self.alpha[self.level.min(self.m)..]
    }

    pub fn even_alpha_bar(&self) -> &[Rational] {
        &self.alpha_bar[..self.level.min(self.m)]
    }

    pub fn odd_alpha_bar(&self) -> &[Rational] {
        &self.alpha_bar[self.level.min(self.m)..]
    }
}

/// Roots of the row `row` sitting at level `p = row.len()`.
pub fn level_roots(row: &[Rational], m: usize) -> LevelRoots {
    let p = row.len();
    let (alpha, alpha_bar) = if p <= m {
        (
            (1..=p).map(|i| &row[i - 1] + int((p - i) as i64)).collect(),
            (1..=p).map(|i| int(i as i64 - 1) - &row[i - 1]).collect(),
        )
    } else {
        let k = (p - m) as i64;
        let mi = m as i64;
        let mut a: Vec<Rational> = (1..=m)
            .map(|i| &row[i - 1] + int(mi - k - i as i64))
            .collect();
        a.extend((1..=k).map(|mu| int(mu - k) - &row[m + mu as usize - 1]));
        let mut b: Vec<Rational> = (1..=m).map(|i| int(i as i64 - 1) - &row[i - 1]).collect();
        b.extend((1..=k).map(|mu| &row[m + mu as usize - 1] + int(mi + 1 - mu)));
        (a, b)
    };
    LevelRoots {
        level: p,
        m,
        alpha,
        alpha_bar,
    }
}

/// Index sets of a pair (lower level q, upper level q + 1). All entries are
/// positions: lower-level positions, plus the top position q + 1 in the
/// tilde sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexSets {
    pub lower_level: usize,
    pub classical: bool,
    pub i0: BTreeSet<usize>,
    pub i0_bar: BTreeSet<usize>,
    pub i1: BTreeSet<usize>,
}

impl IndexSets {
    pub fn top(&self) -> usize {
        self.lower_level + 1
    }

    pub fn i(&self) -> BTreeSet<usize> {
        self.i0.union(&self.i1).copied().collect()
    }

    pub fn i_prime(&self) -> BTreeSet<usize> {
        self.i0_bar.union(&self.i1).copied().collect()
    }

    pub fn i_tilde(&self) -> BTreeSet<usize> {
        let mut s = self.i();
        s.insert(self.top());
        s
    }

    pub fn i_prime_tilde(&self) -> BTreeSet<usize> {
        let mut s = self.i_prime();
        s.insert(self.top());
        s
    }

    /// (−1)^{(s)} for a lower-level position; every factor is +1 on
    /// classical pairs.
    pub fn parity_factor(&self, pos: usize, m: usize) -> Rational {
        if self.classical || pos <= m {
            Rational::one()
        } else {
            -Rational::one()
        }
    }
}

pub fn index_sets(lower: &[Rational], upper: &[Rational], m: usize) -> Result<IndexSets> {
    let q = lower.len();
    if upper.len() != q + 1 {
        return Err(Error::Shape(format!(
            "rows of length {} and {} are not adjacent",
            q,
            upper.len()
        )));
    }
    if q + 1 <= m {
        for i in 0..q {
            let ok = upper[i] >= lower[i]
                && lower[i] >= upper[i + 1]
                && is_integer(&(&upper[i] - &lower[i]));
            if !ok {
                return Err(Error::InvalidPattern(format!(
                    "betweenness fails at position {}",
                    i + 1
                )));
            }
        }
        return Ok(IndexSets {
            lower_level: q,
            classical: true,
            i0: (1..=q).collect(),
            i0_bar: (1..=q).collect(),
            i1: BTreeSet::new(),
        });
    }
    let mut i0 = BTreeSet::new();
    let mut i0_bar = BTreeSet::new();
    for i in 1..=m {
        let d = &upper[i - 1] - &lower[i - 1];
        if d.is_one() {
            i0.insert(i);
        } else if d.is_zero() {
            i0_bar.insert(i);
        } else {
            return Err(Error::InvalidPattern(format!(
                "even label step {d} at position {i}"
            )));
        }
    }
    for pos in m + 1..=q {
        let ok = upper[pos - 1] >= lower[pos - 1]
            && lower[pos - 1] >= upper[pos]
            && is_integer(&(&upper[pos - 1] - &lower[pos - 1]));
        if !ok {
            return Err(Error::InvalidPattern(format!(
                "odd betweenness fails at position {pos}"
            )));
        }
    }
    Ok(IndexSets {
        lower_level: q,
        classical: false,
        i0,
        i0_bar,
        i1: (m + 1..=q).collect(),
    })
}

/// All data of an adjacent row pair needed by the invariants.
#[derive(Clone, Debug)]
pub struct RowPair {
    pub m: usize,
    pub lower: LevelRoots,
    pub upper: LevelRoots,
    pub sets: IndexSets,
}

impl RowPair {
    pub fn new(lower: &[Rational], upper: &[Rational], m: usize) -> Result<Self> {
        let sets = index_sets(lower, upper, m)?;
        Ok(RowPair {
            m,
            lower: level_roots(lower, m),
            upper: level_roots(upper, m),
            sets,
        })
    }

    /// The pair (level p, level p + 1) of a pattern.
    pub fn of_pattern(pat: &GTPattern, p: usize) -> Result<Self> {
        Self::new(pat.row(p), pat.row(p + 1), pat.m())
    }

    fn beta(&self, pos: usize) -> &Rational {
        self.upper.alpha_at(pos)
    }

    fn beta_bar(&self, pos: usize) -> &Rational {
        self.upper.alpha_bar_at(pos)
    }

    fn alpha(&self, pos: usize) -> &Rational {
        self.lower.alpha_at(pos)
    }

    fn alpha_bar(&self, pos: usize) -> &Rational {
        self.lower.alpha_bar_at(pos)
    }

    fn sign(&self, pos: usize) -> Rational {
        self.sets.parity_factor(pos, self.m)
    }

    fn lower_is_odd(&self, pos: usize) -> bool {
        !self.sets.classical && pos > self.m
    }
}

fn inv(x: Rational, what: &str) -> Result<Rational> {
    if x.is_zero() {
        Err(Error::ZeroDenominator(what.to_string()))
    } else {
        Ok(x.recip())
    }
}

/// c_r for an upper-level position r.
pub fn invariant_c(pair: &RowPair, r: usize) -> Result<Rational> {
    let it = pair.sets.i_tilde();
    if !it.contains(&r) {
        return Ok(Rational::zero());
    }
    let br = pair.beta(r);
    let mut v = Rational::one();
    for &k in it.iter().filter(|&&k| k != r) {
        v *= inv(br - pair.beta(k), "c")?;
    }
    for s in pair.sets.i() {
        v *= br - pair.alpha(s) - pair.sign(s);
    }
    Ok(v)
}

/// c̄_r for an upper-level position r.
pub fn invariant_c_bar(pair: &RowPair, r: usize) -> Result<Rational> {
    let it = pair.sets.i_prime_tilde();
    if !it.contains(&r) {
        return Ok(Rational::zero());
    }
    let br = pair.beta_bar(r);
    let mut v = Rational::one();
    for &k in it.iter().filter(|&&k| k != r) {
        v *= inv(br - pair.beta_bar(k), "c̄")?;
    }
    for s in pair.sets.i_prime() {
        v *= br - pair.alpha_bar(s) - pair.sign(s);
    }
    Ok(v)
}

/// δ_r for a lower-level position r.
pub fn invariant_delta(pair: &RowPair, r: usize) -> Result<Rational> {
    if !pair.sets.i_prime().contains(&r) {
        return Ok(Rational::zero());
    }
    let ar = pair.alpha(r);
    let mut v = Rational::one();
    for q in pair.sets.i().into_iter().filter(|&q| q != r) {
        v *= inv(pair.alpha(q) - ar + pair.sign(q), "δ")?;
    }
    for s in pair.sets.i_tilde() {
        v *= pair.beta(s) - ar;
    }
    Ok(v)
}

/// δ̄_r exactly as displayed, with its overall minus sign.
pub fn invariant_delta_bar_printed(pair: &RowPair, r: usize) -> Result<Rational> {
    if !pair.sets.i().contains(&r) {
        return Ok(Rational::zero());
    }
    let ar = pair.alpha_bar(r);
    let mut v = -Rational::one();
    for q in pair.sets.i_prime().into_iter().filter(|&q| q != r) {
        v *= inv(pair.alpha_bar(q) - ar + pair.sign(q), "δ̄")?;
    }
    for s in pair.sets.i_prime_tilde() {
        v *= pair.beta_bar(s) - ar;
    }
    Ok(v)
}

/// Sign relating the displayed δ̄_r to the one that squares to the
/// elementary matrix elements: −1 for even r on a super pair.
pub fn delta_bar_sign(pair: &RowPair, r: usize) -> i8 {
    if !pair.sets.classical && r <= pair.m {
        -1
    } else {
        1
    }
}

/// δ̄_r with the even super-level sign fixed (see `delta_bar_sign`).
pub fn invariant_delta_bar(pair: &RowPair, r: usize) -> Result<Rational> {
    let v = invariant_delta_bar_printed(pair, r)?;
    Ok(if delta_bar_sign(pair, r) < 0 { -v } else { v })
}

/// ρ̄_{ru}: r an upper-level position, u a lower-level position.
pub fn rho_bar(pair: &RowPair, r: usize, u: usize) -> Result<Rational> {
    if !pair.sets.i_prime_tilde().contains(&r) || !pair.sets.i().contains(&u) {
        return Ok(Rational::zero());
    }
    let cd = invariant_c_bar(pair, r)? * invariant_delta_bar(pair, u)?;
    let d = pair.beta_bar(r) - pair.alpha_bar(u);
    if pair.sets.classical {
        return Ok(cd * inv(&d - Rational::one(), "ρ̄")? * inv(d, "ρ̄")?);
    }
    if !pair.lower_is_odd(u) && u == r {
        return Ok(cd);
    }
    Ok(cd * inv(&d + Rational::one(), "ρ̄")? * inv(d, "ρ̄")?)
}

/// ρ_{ru}: r an upper-level position, u a lower-level position.
pub fn rho_inv(pair: &RowPair, r: usize, u: usize) -> Result<Rational> {
    if !pair.sets.i_tilde().contains(&r) || !pair.sets.i_prime().contains(&u) {
        return Ok(Rational::zero());
    }
    let cd = invariant_c(pair, r)? * invariant_delta(pair, u)?;
    let d = pair.beta(r) - pair.alpha(u);
    if pair.sets.classical {
        return Ok(cd * inv(&d - Rational::one(), "ρ")? * inv(d, "ρ")?);
    }
    if !pair.lower_is_odd(u) && u == r {
        return Ok(cd);
    }
    Ok(-cd * inv(&d + Rational::one(), "ρ")? * inv(d, "ρ")?)
}

/// β̄_{u_s} − ᾱ_{u_{s−1}}: `u_s` a position at level s, `u_prev` at level
/// s − 1, both read from `pat`.
pub fn root_diff_bar(pat: &GTPattern, s: usize, u_s: usize, u_prev: usize) -> Rational {
    let up = level_roots(pat.row(s), pat.m());
    let lo = level_roots(pat.row(s - 1), pat.m());
    up.alpha_bar_at(u_s) - lo.alpha_bar_at(u_prev)
}

/// β_{u_s} − α_{u_{s−1}}.
pub fn root_diff(pat: &GTPattern, s: usize, u_s: usize, u_prev: usize) -> Rational {
    let up = level_roots(pat.row(s), pat.m());
    let lo = level_roots(pat.row(s - 1), pat.m());
    up.alpha_at(u_s) - lo.alpha_at(u_prev)
}

/// Roots of level `p` of a pattern as affine forms in its labels.
fn root_forms(pat: &GTPattern, p: usize) -> (Vec<Lin>, Vec<Lin>) {
    let m = pat.m();
    let lab = |pos: usize| Lin::label(pat, p, pos);
    if p <= m {
        let a = (1..=p).map(|i| lab(i).plus((p - i) as i64)).collect();
        let b = (1..=p).map(|i| lab(i).neg().plus(i as i64 - 1)).collect();
        return (a, b);
    }
    let (k, mi) = ((p - m) as i64, m as i64);
    let mut a: Vec<Lin> = (1..=m).map(|i| lab(i).plus(mi - k - i as i64)).collect();
    a.extend((1..=k).map(|mu| lab(m + mu as usize).neg().plus(mu - k)));
    let mut b: Vec<Lin> = (1..=m).map(|i| lab(i).neg().plus(i as i64 - 1)).collect();
    b.extend((1..=k).map(|mu| lab(m + mu as usize).plus(mi + 1 - mu)));
    (a, b)
}

/// Factors of δ̄_r(p, p+1)·c̄_r(p−1, p), or None when an index set
/// excludes r and the product vanishes.
pub fn invariant_nsq_factors(
    pat: &GTPattern,
    p: usize,
    r: usize,
) -> Result<Option<FactorBreakdown>> {
    let m = pat.m();
    let pair = RowPair::of_pattern(pat, p)?;
    if !pair.sets.i().contains(&r) {
        return Ok(None);
    }
    let unit = |sets: &IndexSets, pos: usize| {
        if sets.parity_factor(pos, m).is_one() {
            1
        } else {
            -1
        }
    };
    let (_, lo) = root_forms(pat, p);
    let (_, up) = root_forms(pat, p + 1);
    let ar = &lo[r - 1];
    let mut num = Vec::new();
    let mut den = Vec::new();
    for q in pair.sets.i_prime().into_iter().filter(|&q| q != r) {
        den.push(lo[q - 1].sub(ar).plus(unit(&pair.sets, q)));
    }
    for s in pair.sets.i_prime_tilde() {
        num.push(up[s - 1].sub(ar));
    }
    let sign = -i64::from(delta_bar_sign(&pair, r));
    if p > 1 {
        let below = RowPair::of_pattern(pat, p - 1)?;
        let it = below.sets.i_prime_tilde();
        if !it.contains(&r) {
            return Ok(None);
        }
        let (_, lower) = root_forms(pat, p - 1);
        let br = &lo[r - 1];
        for &k in it.iter().filter(|&&k| k != r) {
            den.push(br.sub(&lo[k - 1]));
        }
        for s in below.sets.i_prime() {
            num.push(br.sub(&lower[s - 1]).plus(-unit(&below.sets, s)));
        }
    }
    Ok(Some(FactorBreakdown::new(sign, num, den)))
}

/// N² = δ̄_{r}(p, p+1)·c̄_{r}(p−1, p) for position r at level p. Removable
/// zeros are resolved with the same factor cancellation and limit rule as
/// the closed forms.
pub fn invariant_nsq(pat: &GTPattern, p: usize, r: usize) -> Result<Rational> {
    match invariant_nsq_factors(pat, p, r)? {
        None => Ok(Rational::zero()),
        Some(f) => f.evaluate(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn gl11_roots() {
        let r = level_roots(&row(&[1, 0]), 1);
        assert_eq!(r.alpha, row(&[0, 0]));
        assert_eq!(r.alpha_bar, row(&[-1, 1]));
        let r = level_roots(&row(&[0, 0, 0]), 3);
        assert_eq!(r.alpha_bar, row(&[0, 1, 2]));
    }

    #[test]
    fn gl11_index_sets() {
        let s = index_sets(&row(&[1]), &row(&[1, 0]), 1).unwrap();
        assert!(s.i0_bar.contains(&1) && s.i0.is_empty());
        let s = index_sets(&row(&[0]), &row(&[1, 0]), 1).unwrap();
        assert!(s.i0.contains(&1));
        let s = index_sets(&row(&[1]), &row(&[1, 0]), 2).unwrap();
        assert!(s.classical && s.i1.is_empty());
        assert!(index_sets(&row(&[3]), &row(&[1, 0]), 1).is_err());
    }

    #[test]
    fn gl11_defining_nsq() {
        let p = GTPattern::from_top_down(1, 1, vec![row(&[1, 0]), row(&[0])]).unwrap();
        assert_eq!(invariant_nsq(&p, 1, 1).unwrap(), int(1));
        let pair = RowPair::of_pattern(&p, 1).unwrap();
        assert_eq!(invariant_delta_bar_printed(&pair, 1).unwrap(), int(-1));
    }

    #[test]
    fn classical_gl2() {
        let p = GTPattern::from_top_down(2, 0, vec![row(&[1, 0]), row(&[0])]).unwrap();
        assert_eq!(invariant_nsq(&p, 1, 1).unwrap(), int(1));
    }

    #[test]
    fn rho_bar_diagonal_case() {
        let pair = RowPair::new(&row(&[1, 0, 0]), &row(&[1, 0, 0, 0]), 2).unwrap();
        let u = 2;
        if pair.sets.i().contains(&u) {
            let want = invariant_c_bar(&pair, u).unwrap() * invariant_delta_bar(&pair, u).unwrap();
            assert_eq!(rho_bar(&pair, u, u).unwrap(), want);
        }
        for u in pair.sets.i_prime().difference(&pair.sets.i()) {
            assert!(rho_bar(&pair, 1, *u).unwrap().is_zero());
        }
    }

    #[test]
    fn root_diff_even_even() {
        let p =
            GTPattern::from_top_down(3, 0, vec![row(&[2, 1, 0]), row(&[2, 0]), row(&[1])]).unwrap();
        let want = (int(1) - int(1)) - (int(0) - int(2));
        assert_eq!(root_diff_bar(&p, 2, 2, 1), want);
    }
}
