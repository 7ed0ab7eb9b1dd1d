//! Sparse exact generator matrices on an enumerated basis.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{int, RadicalSum};
use crate::matels::{Kernels, ShiftPath};
use crate::patterns::{pattern_weight, BasisIndex};

/// Parity of generator index `a` (1-based) in gl(m|n).
pub fn index_parity(a: usize, m: usize) -> u8 {
    u8::from(a > m)
}

/// One generator E_pq on one module; no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseRepMatrix {
    pub dim: usize,
    pub p: usize,
    pub q: usize,
    pub parity: u8,
    pub entries: BTreeMap<(usize, usize), RadicalSum>,
}

impl SparseRepMatrix {
    pub fn zero(dim: usize, p: usize, q: usize, parity: u8) -> Self {
        SparseRepMatrix {
            dim,
            p,
            q,
            parity,
            entries: BTreeMap::new(),
        }
    }

    pub fn get(&self, row: usize, col: usize) -> RadicalSum {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(RadicalSum::zero)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn insert(&mut self, row: usize, col: usize, v: RadicalSum) {
        if v.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), v);
        }
    }

    fn accumulate(&mut self, row: usize, col: usize, v: &RadicalSum) {
        let cur = self.get(row, col);
        self.insert(row, col, &cur + v);
    }

    pub fn transpose(&self) -> SparseRepMatrix {
        SparseRepMatrix {
            dim: self.dim,
            p: self.q,
            q: self.p,
            parity: self.parity,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| ((c, r), v.clone()))
                .collect(),
        }
    }

    /// Plain matrix product `self · other`.
    pub fn matmul(&self, other: &SparseRepMatrix) -> SparseRepMatrix {
        let mut by_row: BTreeMap<usize, Vec<(usize, &RadicalSum)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out =
            SparseRepMatrix::zero(self.dim, self.p, other.q, (self.parity + other.parity) % 2);
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    out.accumulate(i, j, &(a * b));
                }
            }
        }
        out
    }

    /// `self + c·other` with matching dimension; the tag of `self` is kept.
    pub fn add_scaled(&self, other: &SparseRepMatrix, c: i64) -> SparseRepMatrix {
        let mut out = self.clone();
        let s = int(c);
        for (&(r, col), v) in &other.entries {
            out.accumulate(r, col, &v.scale(&s));
        }
        out
    }

    /// Graded commutator [self, other].
    pub fn graded_commutator(&self, other: &SparseRepMatrix) -> SparseRepMatrix {
        let sign = if self.parity == 1 && other.parity == 1 {
            1
        } else {
            -1
        };
        let mut out = self.matmul(other).add_scaled(&other.matmul(self), sign);
        out.p = self.p;
        out.q = other.q;
        out
    }

    /// Entries in f64, row-major dense.
    pub fn to_dense_f64(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.dim]; self.dim];
        for (&(r, c), v) in &self.entries {
            d[r][c] = v.to_f64();
        }
        d
    }

    /// Matrix Market coordinate real general, 1-based.
    pub fn write_matrix_market<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(w, "% E_{{{},{}}}", self.p, self.q)?;
        writeln!(w, "{} {} {}", self.dim, self.dim, self.nnz())?;
        for (&(r, c), v) in &self.entries {
            writeln!(w, "{} {} {:.17e}", r + 1, c + 1, v.to_f64())?;
        }
        Ok(())
    }

    pub fn to_matrix_market(&self) -> String {
        let mut buf = Vec::new();
        self.write_matrix_market(&mut buf).expect("write to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialises")
    }
}

impl Serialize for SparseRepMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            row: usize,
            col: usize,
            terms: &'a RadicalSum,
        }
        let entries: Vec<Entry> = self
            .entries
            .iter()
            .map(|(&(row, col), terms)| Entry { row, col, terms })
            .collect();
        let mut st = s.serialize_struct("SparseRepMatrix", 4)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// Diagonal E_pp: row-sum of level p minus row-sum of level p − 1.
pub fn cartan_matrix(basis: &BasisIndex, p: usize) -> SparseRepMatrix {
    let mut out = SparseRepMatrix::zero(basis.len(), p, p, 0);
    for (i, pat) in basis.iter().enumerate() {
        let w = pattern_weight(pat);
        let v = w.labels()[p - 1].clone();
        out.insert(i, i, RadicalSum::from(v));
    }
    out
}

fn column_entries(
    basis: &BasisIndex,
    p: usize,
    q: usize,
    col: usize,
) -> Result<Vec<(usize, RadicalSum)>> {
    let k = Kernels::new(basis);
    let src = basis.get(col);
    let (l, top, raise) = if p < q { (p, q, true) } else { (q, p, false) };
    let mut out: BTreeMap<usize, RadicalSum> = BTreeMap::new();
    for path in ShiftPath::all(l, top) {
        let delta = if raise { 1 } else { -1 };
        let tgt = src.shifted_many(&path.shifts(), delta);
        let Some(row) = basis.index_of(&tgt) else {
            continue;
        };
        let v = if raise {
            k.nonelem_raise(src, &path)?
        } else {
            k.nonelem_lower(src, &path)?
        };
        let cur = out.remove(&row).unwrap_or_else(RadicalSum::zero);
        let next = cur + RadicalSum::from(v);
        if !next.is_zero() {
            out.insert(row, next);
        }
    }
    Ok(out.into_iter().collect())
}

/// Columns computed independently, merged in column order.
fn assemble_columns(
    basis: &BasisIndex,
    p: usize,
    q: usize,
) -> Result<Vec<Vec<(usize, RadicalSum)>>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..basis.len())
            .into_par_iter()
            .map(|c| column_entries(basis, p, q, c))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        assemble_columns_sequential(basis, p, q)
    }
}

fn assemble_columns_sequential(
    basis: &BasisIndex,
    p: usize,
    q: usize,
) -> Result<Vec<Vec<(usize, RadicalSum)>>> {
    (0..basis.len())
        .map(|c| column_entries(basis, p, q, c))
        .collect()
}

fn tagged(basis: &BasisIndex, p: usize, q: usize) -> Result<SparseRepMatrix> {
    let big = basis.m() + basis.n();
    if p == 0 || q == 0 || p > big || q > big {
        return Err(Error::Shape(format!(
            "generator E_{{{p},{q}}} outside gl({}|{})",
            basis.m(),
            basis.n()
        )));
    }
    let m = basis.m();
    Ok(SparseRepMatrix::zero(
        basis.len(),
        p,
        q,
        (index_parity(p, m) + index_parity(q, m)) % 2,
    ))
}

/// E_pq on the module; uses the rayon pool when the `parallel` feature is on.
pub fn generator_matrix(basis: &BasisIndex, p: usize, q: usize) -> Result<SparseRepMatrix> {
    let mut out = tagged(basis, p, q)?;
    if p == q {
        return Ok(cartan_matrix(basis, p));
    }
    for (col, entries) in assemble_columns(basis, p, q)?.into_iter().enumerate() {
        for (row, v) in entries {
            out.insert(row, col, v);
        }
    }
    Ok(out)
}

/// E_pq assembled on the calling thread only.
pub fn generator_matrix_sequential(
    basis: &BasisIndex,
    p: usize,
    q: usize,
) -> Result<SparseRepMatrix> {
    let mut out = tagged(basis, p, q)?;
    if p == q {
        return Ok(cartan_matrix(basis, p));
    }
    for (col, entries) in assemble_columns_sequential(basis, p, q)?
        .into_iter()
        .enumerate()
    {
        for (row, v) in entries {
            out.insert(row, col, v);
        }
    }
    Ok(out)
}

pub type GeneratorSet = BTreeMap<(usize, usize), SparseRepMatrix>;

/// All (m+n)² generators.
pub fn all_generators(basis: &BasisIndex) -> Result<GeneratorSet> {
    let big = basis.m() + basis.n();
    let pairs: Vec<(usize, usize)> = (1..=big)
        .flat_map(|p| (1..=big).map(move |q| (p, q)))
        .collect();
    #[cfg(feature = "parallel")]
    let mats: Result<Vec<SparseRepMatrix>> = {
        use rayon::prelude::*;
        pairs
            .par_iter()
            .map(|&(p, q)| generator_matrix(basis, p, q))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let mats: Result<Vec<SparseRepMatrix>> = pairs
        .iter()
        .map(|&(p, q)| generator_matrix(basis, p, q))
        .collect();
    Ok(pairs.into_iter().zip(mats?).collect())
}

pub fn all_generators_sequential(basis: &BasisIndex) -> Result<GeneratorSet> {
    let big = basis.m() + basis.n();
    let mut out = BTreeMap::new();
    for p in 1..=big {
        for q in 1..=big {
            out.insert((p, q), generator_matrix_sequential(basis, p, q)?);
        }
    }
    Ok(out)
}

/// Trace of a matrix as an exact sum.
pub fn trace(m: &SparseRepMatrix) -> RadicalSum {
    let mut t = RadicalSum::zero();
    for (&(r, c), v) in &m.entries {
        if r == c {
            t = t + v.clone();
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use crate::patterns::enumerate_basis;
    use crate::weights::HighestWeight;

    fn basis(s: &str) -> BasisIndex {
        enumerate_basis(&HighestWeight::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn gl11_lowering() {
        let b = basis("1|0");
        let e21 = generator_matrix(&b, 2, 1).unwrap();
        assert_eq!(e21.nnz(), 1);
        assert_eq!(e21.get(1, 0), RadicalSum::one());
    }

    #[test]
    fn defining_rep_counts() {
        let b = basis("1,0|0,0");
        let all = all_generators(&b).unwrap();
        let off: usize = all
            .iter()
            .filter(|((p, q), _)| p != q)
            .map(|(_, m)| m.nnz())
            .sum();
        assert_eq!(off, 12);
        assert_eq!(trace(&all[&(1, 1)]), RadicalSum::from(int(1)));
    }

    #[test]
    fn sequential_matches_parallel() {
        let b = basis("5/2,5/2|0,0");
        assert_eq!(
            all_generators(&b).unwrap(),
            all_generators_sequential(&b).unwrap()
        );
    }

    #[test]
    fn exact_json_shape() {
        let b = basis("1|0");
        let j = generator_matrix(&b, 2, 1).unwrap().to_json();
        assert_eq!(
            j,
            r#"{"dim":2,"p":2,"q":1,"entries":[{"row":1,"col":0,"terms":[{"radicand":"1","coeff":"1"}]}]}"#
        );
    }

    #[test]
    fn matrix_market_export() {
        let b = basis("1|0");
        let s = generator_matrix(&b, 1, 2).unwrap().to_matrix_market();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "%%MatrixMarket matrix coordinate real general");
        assert_eq!(lines[2], "2 2 1");
        assert!(lines[3].starts_with("1 2 1.0"));
    }
}
