//! Hard-coded closed forms for the raising generators of gl(2|2) and their
//! comparison against the engine.
//!
//! Labels are written `aPL` for the even label at position P of level L and
//! `bML` for the odd label with odd index M at level L.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{int, sqrt_rational, Rational, SignedRadical};
use crate::matels::{FactorBreakdown, Kernels, Lin, ShiftPath};
use crate::patterns::{BasisIndex, GTPattern};

/// One displayed formula: `sign · ∏ √(∏num / ∏den)` over its groups.
#[derive(Clone, Copy, Debug)]
pub struct FixtureFormula {
    pub id: &'static str,
    pub l: usize,
    /// Positions shifted at levels l, l+1, ….
    pub u: &'static [usize],
    pub sign: i8,
    pub groups: &'static [(&'static [&'static str], &'static [&'static str])],
}

impl FixtureFormula {
    pub fn path(&self) -> ShiftPath {
        ShiftPath {
            l: self.l,
            u: self.u.to_vec(),
        }
    }

    pub fn generator(&self) -> (usize, usize) {
        (self.l, self.l + self.u.len())
    }
}

pub const GL22_FORMULAS: &[FixtureFormula] = &[
    FixtureFormula {
        id: "N1_1",
        l: 1,
        u: &[1],
        sign: 1,
        groups: &[(&["a12 - a11", "a11 - a22 + 1"], &[])],
    },
    FixtureFormula {
        id: "N2_1",
        l: 2,
        u: &[1],
        sign: 1,
        groups: &[(&["b13 + a13 + 1", "a11 - a13"], &["a23 - a13 - 1"])],
    },
    FixtureFormula {
        id: "N2_2",
        l: 2,
        u: &[2],
        sign: 1,
        groups: &[(&["b13 + a23", "a11 - a23 + 1"], &["a13 - a23 + 1"])],
    },
    FixtureFormula {
        id: "N3_1",
        l: 3,
        u: &[1],
        sign: 1,
        groups: &[(
            &[
                "a23 - a13 - 2",
                "a23 - a13 - 1",
                "b14 + a13 + 2",
                "b24 + a13 + 1",
            ],
            &[
                "a22 - a13 - 1",
                "a24 - a13 - 2",
                "b13 + a13 + 2",
                "b13 + a13 + 1",
            ],
        )],
    },
    FixtureFormula {
        id: "N3_2",
        l: 3,
        u: &[2],
        sign: 1,
        groups: &[(
            &["a13 - a23", "a13 - a23 + 1", "-b14 - a23 - 1", "-b24 - a23"],
            &["a12 - a23 + 1", "a14 - a23", "-b13 - a23 - 1", "-b13 - a23"],
        )],
    },
    FixtureFormula {
        id: "N3_3",
        l: 3,
        u: &[3],
        sign: 1,
        groups: &[(
            &[
                "a13 + b13 + 1",
                "a13 + b13 + 2",
                "a23 + b13",
                "a23 + b13 + 1",
                "b14 - b13",
                "b24 - b13 - 1",
            ],
            &[
                "a12 + b13 + 2",
                "a14 + b13 + 1",
                "a22 + b13 + 1",
                "a24 + b13",
            ],
        )],
    },
    FixtureFormula {
        id: "N21_11",
        l: 1,
        u: &[1, 1],
        sign: 1,
        groups: &[(
            &["a11 - a22 + 1", "b13 + a13 + 1", "a11 - a13"],
            &["a23 - a13 - 1", "a11 - a12 + 1"],
        )],
    },
    FixtureFormula {
        id: "N21_21",
        l: 1,
        u: &[1, 2],
        sign: -1,
        groups: &[(
            &["a12 - a11", "b13 + a23", "a11 - a23 + 1"],
            &["a13 - a23 + 1", "a11 - a22"],
        )],
    },
    FixtureFormula {
        id: "N32_11",
        l: 2,
        u: &[1, 1],
        sign: 1,
        groups: &[(
            &["a11 - a13", "a23 - a13", "b14 + a13 + 1", "b24 + a13"],
            &["a22 - a13", "a24 - a13 - 1", "b13 + a13"],
        )],
    },
    FixtureFormula {
        id: "N32_21",
        l: 2,
        u: &[1, 2],
        sign: 1,
        groups: &[(
            &[
                "b13 + a13 + 1",
                "a13 - a11",
                "a13 - a23",
                "b14 + a23 + 1",
                "b24 + a23",
            ],
            &[
                "a12 - a23 + 1",
                "a14 - a23",
                "b13 + a23 + 1",
                "b13 + a23",
                "a12 - a23 + 2",
                "a12 - a23 + 1",
            ],
        )],
    },
    FixtureFormula {
        id: "N32_31",
        l: 2,
        u: &[1, 3],
        sign: 1,
        groups: &[
            (
                &[
                    "b13 + a13 + 1",
                    "b13 + a13 + 1",
                    "a11 - a13",
                    "a13 + b13 + 2",
                    "a23 + b13",
                    "a23 + b13 + 1",
                ],
                &[
                    "a23 - a13 - 1",
                    "a12 + b13 + 2",
                    "a14 + b13 + 1",
                    "a22 + b13 + 1",
                    "a24 + b13",
                ],
            ),
            (
                &["-b14 + b13", "-b24 + b13 + 1"],
                &["a12 - b13 + 3", "a12 - b13 + 2"],
            ),
        ],
    },
    FixtureFormula {
        id: "N32_12",
        l: 2,
        u: &[2, 1],
        sign: -1,
        groups: &[(
            &[
                "b13 + a23",
                "a11 - a23 + 1",
                "a13 - a23",
                "b14 + a13 + 1",
                "b24 + a13",
            ],
            &[
                "a22 - a13",
                "a22 - a13",
                "a24 - a13 - 1",
                "b13 + a13 + 1",
                "b13 + a13",
                "a22 - a13 - 1",
            ],
        )],
    },
    FixtureFormula {
        id: "N32_22",
        l: 2,
        u: &[2, 2],
        sign: 1,
        groups: &[(
            &["a11 - a23 + 1", "a13 - a23", "b14 + a23 + 1", "b24 + a23"],
            &["a12 - a23 + 1", "a14 - a23", "b13 + a23 + 1"],
        )],
    },
    FixtureFormula {
        id: "N32_32",
        l: 2,
        u: &[2, 3],
        sign: 1,
        groups: &[
            (
                &[
                    "b13 + a23",
                    "b13 + a23",
                    "a11 - a23 + 1",
                    "a13 + b13 + 1",
                    "a13 + b13 + 2",
                    "a23 + b13 + 1",
                ],
                &[
                    "a13 - a23 + 1",
                    "a12 + b13 + 2",
                    "a14 + b13 + 1",
                    "a22 + b13 + 1",
                    "a24 + b13",
                ],
            ),
            (
                &["b14 - b13", "b24 - b13 - 1"],
                &["a22 - b13 + 2", "a22 - b13 + 1"],
            ),
        ],
    },
    FixtureFormula {
        id: "N321_111",
        l: 1,
        u: &[1, 1, 1],
        sign: 1,
        groups: &[(
            &[
                "a11 - a22 + 1",
                "a11 - a13",
                "a23 - a13 - 2",
                "b14 + a13 + 2",
                "b24 + a13 + 1",
            ],
            &[
                "a22 - a13 - 1",
                "a13 - a24 + 2",
                "b13 + a13 + 2",
                "a11 - a12 - 1",
            ],
        )],
    },
    FixtureFormula {
        id: "N321_211",
        l: 1,
        u: &[1, 1, 2],
        sign: 1,
        groups: &[
            (
                &["a11 - a22 + 1", "b13 + a13 + 1", "a11 - a13", "a13 - a23"],
                &[
                    "a12 - a23 + 1",
                    "a14 - a23",
                    "b13 + a23 + 1",
                    "b13 + a23",
                    "a11 - a12 - 1",
                ],
            ),
            (
                &["b14 + a23 + 1", "b24 + a23"],
                &["a12 - a23", "a12 - a23 - 1"],
            ),
        ],
    },
    FixtureFormula {
        id: "N321_311",
        l: 1,
        u: &[1, 1, 3],
        sign: 1,
        groups: &[
            (
                &[
                    "a11 - a22 + 1",
                    "b13 + a13 + 1",
                    "b13 + a13 + 1",
                    "a13 - a11",
                    "a13 + b13 + 2",
                    "a23 + b13",
                ],
                &[
                    "a23 - a13 - 1",
                    "a12 + b13 + 2",
                    "a14 + b13 + 1",
                    "a22 + b13 + 1",
                    "a24 + b13",
                ],
            ),
            (
                &["a23 + b13 + 1", "b13 - b14", "b24 - b13 - 1"],
                &["a11 - a12 - 1", "a12 + b13 + 3", "a12 + b13 + 2"],
            ),
        ],
    },
    FixtureFormula {
        id: "N321_121",
        l: 1,
        u: &[1, 2, 1],
        sign: 1,
        groups: &[
            (
                &["a12 - a11", "b13 + a23", "a11 - a23 + 1", "a23 - a13 - 2"],
                &[
                    "a13 - a23 + 1",
                    "a22 - a13 - 1",
                    "a24 - a13 - 2",
                    "b13 + a13 + 2",
                ],
            ),
            (
                &["a23 - a13 - 1", "b14 + a13 + 2", "b24 + a13 + 1"],
                &[
                    "b13 + a13 + 1",
                    "a11 - a22",
                    "a22 + b13 + 3",
                    "a22 + b13 + 2",
                ],
            ),
        ],
    },
    FixtureFormula {
        id: "N321_221",
        l: 1,
        u: &[1, 2, 2],
        sign: -1,
        groups: &[(
            &[
                "a12 - a11",
                "a11 - a23 + 1",
                "a13 - a23",
                "a13 - a23 + 1",
                "b14 + a23 + 1",
                "b24 + a23",
            ],
            &[
                "a13 - a23 + 1",
                "a12 - a23 + 1",
                "a14 - a23",
                "b13 + a23 + 1",
                "a11 - a22",
            ],
        )],
    },
    FixtureFormula {
        id: "N321_321",
        l: 1,
        u: &[1, 2, 3],
        sign: -1,
        groups: &[
            (
                &[
                    "a12 - a11",
                    "a13 + b13 + 1",
                    "a13 + b13 + 2",
                    "a23 + b13",
                    "a23 + b13 + 1",
                ],
                &[
                    "a12 + b13 + 2",
                    "a14 + b13 + 1",
                    "a22 + b13 + 1",
                    "a24 + b13",
                ],
            ),
            (
                &["b13 + a23", "a11 - a23 + 1", "b14 - b13", "b24 - b13 - 1"],
                &[
                    "a13 - a23 + 1",
                    "a11 - a22",
                    "a22 + b13 + 2",
                    "a22 + b13 + 1",
                ],
            ),
        ],
    },
];

/// Outcome of one fixture-versus-engine comparison on a valid shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FixtureOutcome {
    Match,
    SignMismatch,
    Magnitude,
    Singular,
    Imaginary,
}

impl fmt::Display for FixtureOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Known discrepancies between the displayed formulas and the engine
/// (mirrored in docs/CORRECTIONS.md). Anything else is unclassified.
pub const GL22_CORRECTIONS: &[(&str, &[FixtureOutcome])] = {
    use FixtureOutcome::*;
    &[
        ("N2_2", &[SignMismatch]),
        ("N3_1", &[SignMismatch]),
        ("N3_2", &[SignMismatch]),
        ("N3_3", &[Imaginary]),
        ("N21_11", &[Singular, Imaginary]),
        ("N21_21", &[SignMismatch, Magnitude]),
        ("N32_11", &[SignMismatch, Magnitude]),
        ("N32_12", &[Magnitude]),
        ("N32_21", &[SignMismatch]),
        ("N32_22", &[SignMismatch, Magnitude]),
        ("N32_31", &[Imaginary]),
        ("N32_32", &[Imaginary]),
        ("N321_111", &[SignMismatch, Magnitude]),
        ("N321_121", &[Magnitude, Imaginary]),
        ("N321_211", &[Magnitude, Singular]),
        ("N321_221", &[SignMismatch, Magnitude, Singular]),
        ("N321_311", &[Imaginary]),
        ("N321_321", &[Magnitude, Imaginary]),
    ]
};

/// Outcomes tolerated for `id`; `Match` is always allowed.
pub fn allowed_outcomes(id: &str) -> &'static [FixtureOutcome] {
    GL22_CORRECTIONS
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, v)| *v)
        .unwrap_or(&[])
}

/// Parse `aPL` / `bML` into a (level, position) pair of a gl(2|2) pattern.
fn label_key(pat: &GTPattern, name: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("bad label {name}"));
    let mut ch = name.chars();
    let kind = ch.next().ok_or_else(bad)?;
    let digits: Vec<u32> = ch
        .map(|c| c.to_digit(10).ok_or_else(bad))
        .collect::<Result<_>>()?;
    let [idx, level] = digits[..] else {
        return Err(bad());
    };
    let (idx, level) = (idx as usize, level as usize);
    let pos = match kind {
        'a' => idx,
        'b' => pat.m() + idx,
        _ => return Err(bad()),
    };
    if level == 0 || level > pat.levels() || pos == 0 || pos > level {
        return Err(bad());
    }
    Ok((level, pos))
}

/// Parse an affine expression such as `-b14 - a23 - 1` into coefficients
/// and a constant.
fn parse_affine(expr: &str, pat: &GTPattern) -> Result<(BTreeMap<(usize, usize), i64>, Rational)> {
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let mut coef: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    let mut constant = Rational::zero();
    let mut sign = 1i64;
    let mut tok = String::new();
    let mut flush = |tok: &mut String, sign: i64| -> Result<()> {
        if tok.is_empty() {
            return Ok(());
        }
        if tok.chars().all(|c| c.is_ascii_digit()) {
            constant += int(tok
                .parse::<i64>()
                .map_err(|e| Error::Parse(e.to_string()))?
                * sign);
        } else {
            *coef.entry(label_key(pat, tok)?).or_insert(0) += sign;
        }
        tok.clear();
        Ok(())
    };
    for c in s.chars() {
        match c {
            '+' | '-' => {
                flush(&mut tok, sign)?;
                sign = if c == '-' { -1 } else { 1 };
            }
            _ => tok.push(c),
        }
    }
    flush(&mut tok, sign)?;
    coef.retain(|_, v| *v != 0);
    Ok((coef, constant))
}

fn affine_form(expr: &str, pat: &GTPattern) -> Result<Lin> {
    let (coef, constant) = parse_affine(expr, pat)?;
    let mut value = constant.clone();
    for (&(lvl, pos), &c) in &coef {
        value += pat.label(lvl, pos) * int(c);
    }
    Ok(Lin::new(coef, constant, value, pat.m()))
}

/// Evaluate an affine expression such as `-b14 - a23 - 1`.
pub fn eval_affine(expr: &str, pat: &GTPattern) -> Result<Rational> {
    Ok(affine_form(expr, pat)?.value().clone())
}

/// Fixture value on `pat`, or the outcome that prevents evaluation. A
/// vanishing denominator is first resolved by cancelling common factors
/// across the whole radicand.
pub fn evaluate_formula(
    f: &FixtureFormula,
    pat: &GTPattern,
) -> std::result::Result<SignedRadical, FixtureOutcome> {
    let form = |e: &str| affine_form(e, pat).expect("fixture expressions are well formed");
    let mut out = SignedRadical::from_rational(&int(f.sign as i64));
    let mut singular = false;
    for (num, den) in f.groups {
        let n: Rational = num.iter().map(|e| form(e).value().clone()).product();
        let d: Rational = den.iter().map(|e| form(e).value().clone()).product();
        if d.is_zero() {
            singular = true;
            continue;
        }
        let q = n / d;
        if q.is_negative() {
            return Err(FixtureOutcome::Imaginary);
        }
        out = out.mul(&sqrt_rational(&q, 1).expect("nonnegative"));
    }
    if !singular {
        return Ok(out);
    }
    let num: Vec<Lin> = f
        .groups
        .iter()
        .flat_map(|(n, _)| n.iter().map(|e| form(e)))
        .collect();
    let den: Vec<Lin> = f
        .groups
        .iter()
        .flat_map(|(_, d)| d.iter().map(|e| form(e)))
        .collect();
    match FactorBreakdown::new(1, num, den).evaluate() {
        Err(_) => Err(FixtureOutcome::Singular),
        Ok(q) if q.is_negative() => Err(FixtureOutcome::Imaginary),
        Ok(q) => Ok(sqrt_rational(&q, f.sign).expect("nonnegative")),
    }
}

/// Compare one formula with the engine on one source pattern. Returns None
/// when the shift leaves the module (both sides vanish by convention).
pub fn compare_formula(
    f: &FixtureFormula,
    basis: &BasisIndex,
    pat: &GTPattern,
) -> Result<Option<(FixtureOutcome, SignedRadical, Option<SignedRadical>)>> {
    let path = f.path();
    if !basis.contains(&pat.shifted_many(&path.shifts(), 1)) {
        let e = Kernels::new(basis).nonelem_raise(pat, &path)?;
        if !e.is_zero() {
            return Err(Error::Kernel(format!(
                "engine nonzero on invalid shift {path}"
            )));
        }
        return Ok(None);
    }
    let engine = Kernels::new(basis).nonelem_raise(pat, &path)?;
    let outcome = match evaluate_formula(f, pat) {
        Err(o) => return Ok(Some((o, engine, None))),
        Ok(v) => v,
    };
    let kind = if outcome == engine {
        FixtureOutcome::Match
    } else if outcome.abs() == engine.abs() {
        FixtureOutcome::SignMismatch
    } else {
        FixtureOutcome::Magnitude
    };
    Ok(Some((kind, engine, Some(outcome))))
}

/// Tally of outcomes per formula id.
pub type OutcomeTable = BTreeMap<&'static str, BTreeMap<FixtureOutcome, usize>>;

pub fn is_classified(id: &str, outcome: FixtureOutcome) -> bool {
    outcome == FixtureOutcome::Match || allowed_outcomes(id).contains(&outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::enumerate_basis;
    use crate::weights::HighestWeight;

    #[test]
    fn affine_parser() {
        let b = enumerate_basis(&HighestWeight::parse("2,1|0,0").unwrap()).unwrap();
        let p = b.get(0);
        assert_eq!(eval_affine("a14 - a24 + 1", p).unwrap(), int(2));
        assert_eq!(eval_affine("-b14 - a13 - 1", p).unwrap(), int(-3));
    }

    #[test]
    fn first_formula_matches_on_top_pattern_below() {
        let b = enumerate_basis(&HighestWeight::parse("2,1|0,0").unwrap()).unwrap();
        for p in b.iter() {
            if let Some((kind, _, _)) = compare_formula(&GL22_FORMULAS[0], &b, p).unwrap() {
                assert_eq!(kind, FixtureOutcome::Match);
            }
        }
    }

    #[test]
    fn generators_cover_raising_set() {
        let gens: std::collections::BTreeSet<_> =
            GL22_FORMULAS.iter().map(|f| f.generator()).collect();
        assert_eq!(gens.len(), 6);
    }
}
