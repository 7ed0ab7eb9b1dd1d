//! Weights of gl(m|n), the graded form, ρ, and the type 1 / type 2 unitarity
//! predicates.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{int, is_integer, parse_rational, rat, Rational};

/// A weight `Σ Λ_i ε_i + Σ Λ_μ δ_μ` in ε/δ coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    pub m: usize,
    pub n: usize,
    pub even: Vec<Rational>,
    pub odd: Vec<Rational>,
}

impl Weight {
    pub fn new(even: Vec<Rational>, odd: Vec<Rational>) -> Self {
        Weight {
            m: even.len(),
            n: odd.len(),
            even,
            odd,
        }
    }

    pub fn zero(m: usize, n: usize) -> Self {
        Weight::new(vec![Rational::zero(); m], vec![Rational::zero(); n])
    }

    /// The unit weight ε_i (1-based).
    pub fn eps(m: usize, n: usize, i: usize) -> Self {
        let mut w = Weight::zero(m, n);
        w.even[i - 1] = Rational::one();
        w
    }

    /// The unit weight δ_μ (1-based).
    pub fn delta(m: usize, n: usize, mu: usize) -> Self {
        let mut w = Weight::zero(m, n);
        w.odd[mu - 1] = Rational::one();
        w
    }

    /// ε = ω_m = (1,…,1 | 0,…,0).
    pub fn graded_eps(m: usize, n: usize) -> Self {
        Weight::new(vec![Rational::one(); m], vec![Rational::zero(); n])
    }

    /// δ = ω_n̄ = (−1,…,−1 | 1,…,1).
    pub fn graded_delta(m: usize, n: usize) -> Self {
        Weight::new(vec![-Rational::one(); m], vec![Rational::one(); n])
    }

    /// Coordinates concatenated, even block first.
    pub fn labels(&self) -> Vec<Rational> {
        self.even.iter().chain(self.odd.iter()).cloned().collect()
    }

    pub fn from_labels(m: usize, labels: &[Rational]) -> Self {
        Weight::new(labels[..m].to_vec(), labels[m..].to_vec())
    }

    fn same_shape(&self, o: &Weight) -> Result<()> {
        if self.m != o.m || self.n != o.n {
            return Err(Error::Shape(format!(
                "gl({}|{}) vs gl({}|{})",
                self.m, self.n, o.m, o.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Weight) -> Result<Weight> {
        self.same_shape(o)?;
        Ok(Weight::new(
            self.even.iter().zip(&o.even).map(|(a, b)| a + b).collect(),
            self.odd.iter().zip(&o.odd).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, o: &Weight) -> Result<Weight> {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Weight {
        Weight::new(
            self.even.iter().map(|a| a * c).collect(),
            self.odd.iter().map(|a| a * c).collect(),
        )
    }

    /// Parse `"a,b,…|c,d,…"`; whitespace is ignored and an empty or missing
    /// odd block gives n = 0.
    pub fn parse(s: &str) -> Result<Weight> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (ev, od) = match t.split_once('|') {
            Some((a, b)) => (a.to_string(), b.to_string()),
            None => (t.clone(), String::new()),
        };
        let block = |b: &str| -> Result<Vec<Rational>> {
            if b.is_empty() {
                return Ok(Vec::new());
            }
            b.split(',').map(parse_rational).collect()
        };
        let even = block(&ev)?;
        let odd = block(&od)?;
        if even.is_empty() {
            return Err(Error::Parse(format!("weight `{s}` has no even labels")));
        }
        Ok(Weight::new(even, odd))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[Rational]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}|{}", j(&self.even), j(&self.odd))
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Weight::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A dominant weight: consecutive even and consecutive odd labels differ by
/// nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Weight", into = "Weight")]
pub struct HighestWeight {
    weight: Weight,
}

impl TryFrom<Weight> for HighestWeight {
    type Error = Error;
    fn try_from(w: Weight) -> Result<Self> {
        HighestWeight::new(w)
    }
}

impl From<HighestWeight> for Weight {
    fn from(h: HighestWeight) -> Weight {
        h.weight
    }
}

/// `true` when consecutive labels descend by nonnegative integers.
pub fn is_dominant_block(v: &[Rational]) -> bool {
    v.windows(2).all(|w| {
        let d = &w[0] - &w[1];
        is_integer(&d) && !d.is_negative()
    })
}

impl HighestWeight {
    pub fn new(weight: Weight) -> Result<Self> {
        if weight.m == 0 {
            return Err(Error::Shape("m must be positive".into()));
        }
        if !is_dominant_block(&weight.even) || !is_dominant_block(&weight.odd) {
            return Err(Error::NotDominant(weight.to_string()));
        }
        Ok(HighestWeight { weight })
    }

    pub fn parse(s: &str) -> Result<Self> {
        HighestWeight::new(Weight::parse(s)?)
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn m(&self) -> usize {
        self.weight.m
    }

    pub fn n(&self) -> usize {
        self.weight.n
    }

    pub fn labels(&self) -> Vec<Rational> {
        self.weight.labels()
    }
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.weight.fmt(f)
    }
}

/// Type 1 unitarity class of a highest weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnitaryClass {
    TypicalType1,
    AtypicalType1 { mu: usize },
    NotType1,
}

impl UnitaryClass {
    pub fn is_type1(self) -> bool {
        !matches!(self, UnitaryClass::NotType1)
    }
}

impl fmt::Display for UnitaryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitaryClass::TypicalType1 => write!(f, "TypicalType1"),
            UnitaryClass::AtypicalType1 { mu } => write!(f, "AtypicalType1(mu={mu})"),
            UnitaryClass::NotType1 => write!(f, "NotType1"),
        }
    }
}

/// Graded half-sum of positive roots.
pub fn rho(m: usize, n: usize) -> Weight {
    let (mi, ni) = (m as i64, n as i64);
    Weight::new(
        (1..=mi).map(|j| rat(mi - ni - 2 * j + 1, 2)).collect(),
        (1..=ni).map(|nu| rat(mi + ni - 2 * nu + 1, 2)).collect(),
    )
}

/// `(u, v) = Σ u_i v_i − Σ u_μ v_μ`.
pub fn form(u: &Weight, v: &Weight) -> Result<Rational> {
    u.same_shape(v)?;
    let e: Rational = u.even.iter().zip(&v.even).map(|(a, b)| a * b).sum();
    let o: Rational = u.odd.iter().zip(&v.odd).map(|(a, b)| a * b).sum();
    Ok(e - o)
}

/// `(Λ+ρ, ε_i − δ_μ)` for 1-based i, μ.
pub fn rho_shifted_pairing(w: &Weight, i: usize, mu: usize) -> Rational {
    let lr = w.add(&rho(w.m, w.n)).expect("same shape");
    let root = Weight::eps(w.m, w.n, i)
        .sub(&Weight::delta(w.m, w.n, mu))
        .expect("same shape");
    form(&lr, &root).expect("same shape")
}

/// Type 1 classification. For n = 0 every dominant weight is reported typical.
pub fn classify_type1(hw: &HighestWeight) -> UnitaryClass {
    classify_type1_weight(hw.weight())
}

pub(crate) fn classify_type1_weight(w: &Weight) -> UnitaryClass {
    let (m, n) = (w.m, w.n);
    if n == 0 {
        return UnitaryClass::TypicalType1;
    }
    if rho_shifted_pairing(w, m, n).is_positive() {
        return UnitaryClass::TypicalType1;
    }
    for mu in 1..=n {
        let diff = form(
            w,
            &Weight::delta(m, n, mu)
                .sub(&Weight::delta(m, n, n))
                .unwrap(),
        )
        .unwrap();
        if rho_shifted_pairing(w, m, mu).is_zero() && diff.is_zero() {
            return UnitaryClass::AtypicalType1 { mu };
        }
    }
    UnitaryClass::NotType1
}

/// Type 2 classification result; `witness` is the smallest even index k
/// satisfying the equality condition when the strict inequality fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Type2Class {
    pub unitary: bool,
    pub witness: Option<usize>,
}

pub fn classify_type2(hw: &HighestWeight) -> Type2Class {
    let w = hw.weight();
    let (m, n) = (w.m, w.n);
    if n == 0 {
        return Type2Class {
            unitary: true,
            witness: None,
        };
    }
    if rho_shifted_pairing(w, 1, 1).is_negative() {
        return Type2Class {
            unitary: true,
            witness: None,
        };
    }
    for k in 1..=m {
        let diff = form(w, &Weight::eps(m, n, k).sub(&Weight::eps(m, n, 1)).unwrap()).unwrap();
        if rho_shifted_pairing(w, k, 1).is_zero() && diff.is_zero() {
            return Type2Class {
                unitary: true,
                witness: Some(k),
            };
        }
    }
    Type2Class {
        unitary: false,
        witness: None,
    }
}

/// `Λ = Λ₀ + γε + ωδ` with Λ₀ tensorial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub lambda0: HighestWeight,
    #[serde(with = "crate::exactnum::rational_str")]
    pub gamma: Rational,
    #[serde(with = "crate::exactnum::rational_str")]
    pub omega: Rational,
}

/// The simple root φ_j of the extended system (1-based over m+n; index m+n
/// is φ_n̄ = δ_n).
fn phi(m: usize, n: usize, j: usize) -> Weight {
    if j < m {
        Weight::eps(m, n, j).sub(&Weight::eps(m, n, j + 1)).unwrap()
    } else if j == m {
        Weight::eps(m, n, m).sub(&Weight::delta(m, n, 1)).unwrap()
    } else if j < m + n {
        let nu = j - m;
        Weight::delta(m, n, nu)
            .sub(&Weight::delta(m, n, nu + 1))
            .unwrap()
    } else {
        Weight::delta(m, n, n)
    }
}

pub fn decompose_unitary(hw: &HighestWeight) -> Result<Decomposition> {
    if !classify_type1(hw).is_type1() {
        return Err(Error::NotUnitary(hw.to_string()));
    }
    let w = hw.weight();
    let (m, n) = (w.m, w.n);
    if n == 0 {
        return Ok(Decomposition {
            lambda0: hw.clone(),
            gamma: Rational::zero(),
            omega: Rational::zero(),
        });
    }
    let mut gamma = form(w, &phi(m, n, m))?;
    for nu in 1..n {
        gamma += int(nu as i64 + 1) * form(w, &phi(m, n, m + nu))?;
    }
    let omega = -form(w, &phi(m, n, m + n))?;
    let l0 = w
        .sub(&Weight::graded_eps(m, n).scale(&gamma))?
        .sub(&Weight::graded_delta(m, n).scale(&omega))?;
    Ok(Decomposition {
        lambda0: HighestWeight::new(l0)?,
        gamma,
        omega,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hw(s: &str) -> HighestWeight {
        HighestWeight::parse(s).unwrap()
    }

    #[test]
    fn rho_values() {
        assert_eq!(
            rho(2, 2),
            Weight::new(vec![rat(-1, 2), rat(-3, 2)], vec![rat(3, 2), rat(1, 2)])
        );
        assert_eq!(rho(1, 1), Weight::new(vec![rat(-1, 2)], vec![rat(1, 2)]));
    }

    #[test]
    fn form_values() {
        let e1 = Weight::eps(2, 2, 1);
        let d1 = Weight::delta(2, 2, 1);
        assert_eq!(form(&e1, &e1).unwrap(), int(1));
        assert_eq!(form(&d1, &d1).unwrap(), int(-1));
        let r = e1.sub(&d1).unwrap();
        assert_eq!(form(&r, &r).unwrap(), int(0));
        assert!(form(&e1, &Weight::eps(1, 1, 1)).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_type1(&hw("1|0")), UnitaryClass::TypicalType1);
        assert_eq!(
            classify_type1(&hw("0|0")),
            UnitaryClass::AtypicalType1 { mu: 1 }
        );
        assert_eq!(classify_type1(&hw("3/2,3/2|0,0,0")), UnitaryClass::NotType1);
        assert_eq!(classify_type1(&hw("1|-3/2")), UnitaryClass::NotType1);
    }

    #[test]
    fn type2_examples() {
        assert!(classify_type2(&hw("0|0")).unitary);
        assert!(!classify_type2(&hw("1|0")).unitary);
        assert!(classify_type2(&hw("0,0|-5,-5")).unitary);
        assert!(classify_type2(&hw("1|-3/2")).unitary);
    }

    #[test]
    fn decompose_examples() {
        let d = decompose_unitary(&hw("3,1|-1,-1")).unwrap();
        assert_eq!(d.lambda0, hw("2,0|0,0"));
        assert_eq!((d.gamma, d.omega), (int(0), int(-1)));
        let d = decompose_unitary(&hw("5/2,5/2|0,0")).unwrap();
        assert_eq!(d.lambda0, hw("0,0|0,0"));
        assert_eq!((d.gamma, d.omega), (rat(5, 2), int(0)));
        let d = decompose_unitary(&hw("-7/3,-7/3|7/3,7/3")).unwrap();
        assert_eq!(d.lambda0, hw("0,0|0,0"));
        assert_eq!((d.gamma, d.omega), (int(0), rat(7, 3)));
        assert!(decompose_unitary(&hw("1|-3/2")).is_err());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(
            Weight::parse(" 5/2, 5/2 | 0 ,0").unwrap().to_string(),
            "5/2,5/2|0,0"
        );
        assert_eq!(Weight::parse("3,1").unwrap().n, 0);
        assert!(Weight::parse("|1").is_err());
        assert!(Weight::parse("1,a|0").is_err());
        assert!(matches!(
            HighestWeight::parse("0,1|0"),
            Err(Error::NotDominant(_))
        ));
        assert!(matches!(
            HighestWeight::parse("1/2,0|0"),
            Err(Error::NotDominant(_))
        ));
    }
}
