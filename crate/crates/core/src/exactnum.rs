//! Exact scalars: big rationals, signed square roots of rationals, and finite
//! rational combinations of square roots of squarefree integers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = BigRational;

/// Build a rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Build an integral rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parse `"p"`, `"-p"`, or `"p/q"` (surrounding whitespace ignored).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("malformed rational `{s}`"));
    if t.is_empty() {
        return Err(bad());
    }
    match t.split_once('/') {
        None => t
            .parse::<BigInt>()
            .map(Rational::from_integer)
            .map_err(|_| bad()),
        Some((a, b)) => {
            let n = a.trim().parse::<BigInt>().map_err(|_| bad())?;
            let d = b.trim().parse::<BigInt>().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// `true` when the rational has denominator one.
pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Sign of a rational as -1, 0 or +1.
pub fn signum(x: &Rational) -> i8 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Round-to-nearest conversion of a rational.
pub fn rational_to_f64(x: &Rational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let (n, d) = (x.numer().to_f64(), x.denom().to_f64());
    match (n, d) {
        (Some(n), Some(d)) => n / d,
        _ => f64::NAN,
    }
}

static TRIAL_BOUND: AtomicU64 = AtomicU64::new(1 << 16);

/// Current trial-division bound used by squarefree factorisation.
pub fn trial_bound() -> u64 {
    TRIAL_BOUND.load(Ordering::Relaxed)
}

/// Change the trial-division bound; cofactors left after trial division are
/// handed to a general factoriser.
pub fn set_trial_bound(bound: u64) {
    TRIAL_BOUND.store(bound.max(2), Ordering::Relaxed);
}

/// Split `n > 0` as `a² · d` with `d` squarefree; returns `(a, d)`.
pub fn squarefree_split(n: &BigUint) -> (BigUint, BigUint) {
    assert!(!n.is_zero(), "squarefree_split of zero");
    let mut rest = n.clone();
    let mut outside = BigUint::one();
    let mut inside = BigUint::one();
    let absorb = |p: BigUint, e: usize, outside: &mut BigUint, inside: &mut BigUint| {
        for _ in 0..e / 2 {
            *outside *= &p;
        }
        if e % 2 == 1 {
            *inside *= &p;
        }
    };
    let bound = trial_bound();
    let mut p = 2u64;
    while p <= bound {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0usize;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            absorb(bp, e, &mut outside, &mut inside);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return (outside, inside);
    }
    let bp = BigUint::from(p);
    if &bp * &bp > rest {
        inside *= rest;
        return (outside, inside);
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        let (o, i) = squarefree_split(&root);
        outside *= &o * &o * &i;
        return (outside, inside);
    }
    for (q, e) in num_prime::nt_funcs::factorize(rest) {
        absorb(q, e, &mut outside, &mut inside);
    }
    (outside, inside)
}

/// A real number `sign · coeff · √radicand`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedRadical {
    sign: i8,
    coeff: Rational,
    radicand: BigUint,
}

impl SignedRadical {
    pub fn zero() -> Self {
        SignedRadical {
            sign: 0,
            coeff: Rational::zero(),
            radicand: BigUint::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(&Rational::one())
    }

    pub fn from_rational(q: &Rational) -> Self {
        SignedRadical {
            sign: signum(q),
            coeff: q.abs(),
            radicand: BigUint::one(),
        }
    }

    /// Build from parts, canonicalising a non-squarefree radicand.
    pub fn new(sign: i8, coeff: Rational, radicand: BigUint) -> Self {
        assert!(!coeff.is_negative(), "coefficient must be nonnegative");
        if sign == 0 || coeff.is_zero() || radicand.is_zero() {
            return Self::zero();
        }
        let (a, d) = squarefree_split(&radicand);
        SignedRadical {
            sign: sign.signum(),
            coeff: coeff * Rational::from_integer(BigInt::from(a)),
            radicand: d,
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigUint {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Signed rational coefficient in front of the square root.
    pub fn signed_coeff(&self) -> Rational {
        match self.sign {
            1 => self.coeff.clone(),
            -1 => -self.coeff.clone(),
            _ => Rational::zero(),
        }
    }

    /// The exact square `coeff² · radicand`.
    pub fn square(&self) -> Rational {
        &self.coeff * &self.coeff * Rational::from_integer(BigInt::from(self.radicand.clone()))
    }

    pub fn abs(&self) -> Self {
        let mut out = self.clone();
        out.sign = out.sign.abs();
        out
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() || self.is_zero() {
            return Self::zero();
        }
        SignedRadical {
            sign: self.sign * signum(q),
            coeff: &self.coeff * q.abs(),
            radicand: self.radicand.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let prod = &self.radicand * &other.radicand;
        let g = self.radicand.gcd(&other.radicand);
        let d = prod / (&g * &g);
        SignedRadical {
            sign: self.sign * other.sign,
            coeff: &self.coeff * &other.coeff * Rational::from_integer(BigInt::from(g)),
            radicand: d,
        }
    }

    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign)
            * rational_to_f64(&self.coeff)
            * self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

impl fmt::Display for SignedRadical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", RadicalSum::from(self.clone()))
    }
}

/// `sign · √x` for `x ≥ 0`, with the square part of `x` pulled outside.
pub fn sqrt_rational(x: &Rational, sign: i8) -> Result<SignedRadical> {
    if x.is_negative() {
        return Err(Error::NegativeRadicand(x.clone()));
    }
    if x.is_zero() || sign == 0 {
        return Ok(SignedRadical::zero());
    }
    let n = x.numer().to_biguint().expect("positive");
    let d = x.denom().to_biguint().expect("positive");
    let (a, r) = squarefree_split(&(&n * &d));
    let coeff = Rational::new(BigInt::from(a), BigInt::from(d));
    Ok(SignedRadical {
        sign: sign.signum(),
        coeff,
        radicand: r,
    })
}

/// Finite sum `Σ c_d √d` over distinct squarefree radicands `d`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RadicalSum {
    terms: BTreeMap<BigUint, Rational>,
}

impl RadicalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Build from `(radicand, coeff)` pairs, canonicalising radicands.
    pub fn from_terms<I: IntoIterator<Item = (BigUint, Rational)>>(it: I) -> Self {
        let mut out = Self::zero();
        for (d, c) in it {
            out.add_term(d, c);
        }
        out
    }

    fn add_term(&mut self, radicand: BigUint, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let (a, d) = squarefree_split(&radicand);
        let c = coeff * Rational::from_integer(BigInt::from(a));
        let slot = self.terms.entry(d.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&d);
        }
    }

    /// The rational value when no irrational term is present.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&BigUint::one()).cloned(),
            _ => None,
        }
    }

    /// The single signed radical when the sum has at most one term.
    pub fn as_signed_radical(&self) -> Option<SignedRadical> {
        match self.terms.len() {
            0 => Some(SignedRadical::zero()),
            1 => {
                let (d, c) = self.terms.iter().next().unwrap();
                Some(SignedRadical {
                    sign: signum(c),
                    coeff: c.abs(),
                    radicand: d.clone(),
                })
            }
            _ => None,
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        RadicalSum {
            terms: self.terms.iter().map(|(d, c)| (d.clone(), c * q)).collect(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(d, c)| rational_to_f64(c) * d.to_f64().unwrap_or(f64::NAN).sqrt())
            .sum()
    }
}

impl From<Rational> for RadicalSum {
    fn from(q: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(BigUint::one(), q);
        out
    }
}

impl From<SignedRadical> for RadicalSum {
    fn from(r: SignedRadical) -> Self {
        let mut out = Self::zero();
        let c = r.signed_coeff();
        if !c.is_zero() {
            out.terms.insert(r.radicand, c);
        }
        out
    }
}

impl Add for &RadicalSum {
    type Output = RadicalSum;
    fn add(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            let slot = out.terms.entry(d.clone()).or_insert_with(Rational::zero);
            *slot += c;
            if slot.is_zero() {
                out.terms.remove(d);
            }
        }
        out
    }
}

impl Add for RadicalSum {
    type Output = RadicalSum;
    fn add(self, rhs: RadicalSum) -> RadicalSum {
        &self + &rhs
    }
}

impl Neg for &RadicalSum {
    type Output = RadicalSum;
    fn neg(self) -> RadicalSum {
        RadicalSum {
            terms: self.terms.iter().map(|(d, c)| (d.clone(), -c)).collect(),
        }
    }
}

impl Neg for RadicalSum {
    type Output = RadicalSum;
    fn neg(self) -> RadicalSum {
        -&self
    }
}

impl Sub for &RadicalSum {
    type Output = RadicalSum;
    fn sub(self, rhs: &RadicalSum) -> RadicalSum {
        self + &(-rhs)
    }
}

impl Sub for RadicalSum {
    type Output = RadicalSum;
    fn sub(self, rhs: RadicalSum) -> RadicalSum {
        &self - &rhs
    }
}

impl Mul for &RadicalSum {
    type Output = RadicalSum;
    fn mul(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = RadicalSum::zero();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &rhs.terms {
                let g = d1.gcd(d2);
                let d = d1 * d2 / (&g * &g);
                let c = c1 * c2 * Rational::from_integer(BigInt::from(g));
                let slot = out.terms.entry(d.clone()).or_insert_with(Rational::zero);
                *slot += c;
                if slot.is_zero() {
                    out.terms.remove(&d);
                }
            }
        }
        out
    }
}

impl Mul for RadicalSum {
    type Output = RadicalSum;
    fn mul(self, rhs: RadicalSum) -> RadicalSum {
        &self * &rhs
    }
}

/// Sum of two radical sums.
pub fn radsum_add(a: &RadicalSum, b: &RadicalSum) -> RadicalSum {
    a + b
}

/// Product of two radical sums.
pub fn radsum_mul(a: &RadicalSum, b: &RadicalSum) -> RadicalSum {
    a * b
}

/// Double-precision value of a radical sum.
pub fn to_float(a: &RadicalSum) -> f64 {
    a.to_f64()
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (d, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let a = c.abs();
            if d.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "√{d}")?;
            } else {
                write!(f, "{a}√{d}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    radicand: String,
    coeff: String,
}

impl Serialize for RadicalSum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(d, c)| TermRepr {
                radicand: d.to_string(),
                coeff: c.to_string(),
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RadicalSum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<TermRepr>::deserialize(d)?;
        let mut out = RadicalSum::zero();
        for t in v {
            let rad: BigUint = t.radicand.parse().map_err(D::Error::custom)?;
            if rad.is_zero() {
                return Err(D::Error::custom("radicand must be positive"));
            }
            let c = parse_rational(&t.coeff).map_err(D::Error::custom)?;
            out.add_term(rad, c);
        }
        Ok(out)
    }
}

/// Serde helper storing a rational as a `"p/q"` string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(d: u64, c: Rational) -> RadicalSum {
        RadicalSum::from_terms([(BigUint::from(d), c)])
    }

    #[test]
    fn sqrt_examples() {
        let a = sqrt_rational(&rat(4, 9), 1).unwrap();
        assert_eq!(
            (a.sign(), a.coeff().clone(), a.radicand().clone()),
            (1, rat(2, 3), BigUint::one())
        );
        let b = sqrt_rational(&int(8), 1).unwrap();
        assert_eq!(
            (b.coeff().clone(), b.radicand().clone()),
            (int(2), BigUint::from(2u8))
        );
        assert!(sqrt_rational(&int(0), 1).unwrap().is_zero());
        assert!(matches!(
            sqrt_rational(&int(-3), 1),
            Err(Error::NegativeRadicand(_))
        ));
    }

    #[test]
    fn sqrt_of_fraction_rationalises_denominator() {
        let a = sqrt_rational(&rat(1, 2), -1).unwrap();
        assert_eq!(a.sign(), -1);
        assert_eq!(a.coeff(), &rat(1, 2));
        assert_eq!(a.radicand(), &BigUint::from(2u8));
        assert_eq!(a.square(), rat(1, 2));
    }

    #[test]
    fn radsum_examples() {
        let s = &rs(2, int(1)) + &rs(8, int(1));
        assert_eq!(s, rs(2, int(3)));
        assert_eq!(&rs(2, int(1)) * &rs(2, int(1)), RadicalSum::from(int(2)));
        assert_eq!(&rs(2, int(1)) * &rs(3, int(1)), rs(6, int(1)));
        assert!((&rs(2, int(1)) - &rs(2, int(1))).is_zero());
    }

    #[test]
    fn float_examples() {
        assert!((rs(2, int(3)).to_f64() - 4.242640687119285).abs() < 1e-12);
        assert_eq!(RadicalSum::zero().to_f64(), 0.0);
        assert!((RadicalSum::from(rat(1, 3)).to_f64() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn squarefree_split_large_cofactor() {
        set_trial_bound(10);
        let p = BigUint::from(1_000_003u64);
        let q = BigUint::from(999_983u64);
        let n = &p * &p * &q * BigUint::from(12u8);
        let (a, d) = squarefree_split(&n);
        set_trial_bound(1 << 16);
        assert_eq!(a, &p * BigUint::from(2u8));
        assert_eq!(d, &q * BigUint::from(3u8));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(parse_rational(" -5/2 ").unwrap(), rat(-5, 2));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(rs(2, rat(-1, 3)).to_string(), "-1/3√2");
    }

    #[test]
    fn serde_roundtrip() {
        let s = &RadicalSum::from(int(1)) + &rs(2, rat(1, 3));
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(
            j,
            r#"[{"radicand":"1","coeff":"1"},{"radicand":"2","coeff":"1/3"}]"#
        );
        let back: RadicalSum = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
