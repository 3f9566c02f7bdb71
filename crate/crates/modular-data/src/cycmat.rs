//! Dense matrices over a single cyclotomic field, with opaque row and column
//! labels.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloError, CyclotomicNumber};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("exterior power {n} out of range for a {size}x{size} matrix")]
    PowerOutOfRange { n: usize, size: usize },
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error(transparent)]
    Field(#[from] CycloError),
}

pub type Result<T> = std::result::Result<T, MatrixError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycMatrix {
    rows: Vec<String>,
    cols: Vec<String>,
    modulus: u32,
    entries: Vec<CyclotomicNumber>,
}

/// A matrix that equals `scalar` times a signed permutation matrix:
/// row i has its only nonzero entry `signs[i]·scalar` in column `perm[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
    pub scalar: CyclotomicNumber,
}

impl CycMatrix {
    pub fn new(
        rows: Vec<String>,
        cols: Vec<String>,
        modulus: u32,
        entries: Vec<CyclotomicNumber>,
    ) -> Result<Self> {
        if entries.len() != rows.len() * cols.len() {
            return Err(MatrixError::Shape(format!(
                "{} entries for a {}x{} grid",
                entries.len(),
                rows.len(),
                cols.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| e.modulus() != modulus) {
            return Err(CycloError::ModulusMismatch(modulus, e.modulus()).into());
        }
        Ok(CycMatrix { rows, cols, modulus, entries })
    }

    /// Builds a matrix from a generator; entries are rebased to `modulus`.
    pub fn from_fn<F>(rows: Vec<String>, cols: Vec<String>, modulus: u32, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> CyclotomicNumber,
    {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for i in 0..rows.len() {
            for j in 0..cols.len() {
                entries.push(f(i, j).rebase(modulus)?);
            }
        }
        Self::new(rows, cols, modulus, entries)
    }

    pub fn identity(labels: Vec<String>, modulus: u32) -> Self {
        let n = labels.len();
        Self::diagonal(labels, modulus, vec![CyclotomicNumber::one(modulus); n]).unwrap()
    }

    pub fn diagonal(labels: Vec<String>, modulus: u32, diag: Vec<CyclotomicNumber>) -> Result<Self> {
        let n = labels.len();
        if diag.len() != n {
            return Err(MatrixError::Shape(format!("{} diagonal entries for {n} labels", diag.len())));
        }
        let mut entries = vec![CyclotomicNumber::zero(modulus); n * n];
        for (i, d) in diag.into_iter().enumerate() {
            entries[i * n + i] = d.rebase(modulus)?;
        }
        Self::new(labels.clone(), labels, modulus, entries)
    }

    pub fn rows(&self) -> &[String] {
        &self.rows
    }

    pub fn cols(&self) -> &[String] {
        &self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicNumber {
        &self.entries[i * self.cols.len() + j]
    }

    pub fn row(&self, i: usize) -> &[CyclotomicNumber] {
        let c = self.cols.len();
        &self.entries[i * c..(i + 1) * c]
    }

    pub fn entries(&self) -> &[CyclotomicNumber] {
        &self.entries
    }

    pub fn diag(&self) -> Vec<CyclotomicNumber> {
        (0..self.nrows().min(self.ncols())).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.rows.iter().position(|l| l == label)
    }

    pub fn col_index(&self, label: &str) -> Option<usize> {
        self.cols.iter().position(|l| l == label)
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols.len()
    }

    /// Re-embeds every entry into Q(ζ_M).
    pub fn rebase(&self, m: u32) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.rebase(m)).collect::<std::result::Result<_, _>>()?;
        Self::new(self.rows.clone(), self.cols.clone(), m, entries)
    }

    pub fn map<F: Fn(&CyclotomicNumber) -> CyclotomicNumber>(&self, f: F) -> Self {
        let entries: Vec<_> = self.entries.iter().map(f).collect();
        let modulus = entries.first().map_or(self.modulus, |e| e.modulus());
        Self::new(self.rows.clone(), self.cols.clone(), modulus, entries).expect("map preserves shape")
    }

    pub fn with_labels(mut self, rows: Vec<String>, cols: Vec<String>) -> Result<Self> {
        if rows.len() != self.rows.len() || cols.len() != self.cols.len() {
            return Err(MatrixError::Shape("relabeling changes the shape".into()));
        }
        self.rows = rows;
        self.cols = cols;
        Ok(self)
    }

    pub fn scalar_mul(&self, c: &CyclotomicNumber) -> Result<Self> {
        let c = c.rebase(self.modulus)?;
        Ok(self.map(|e| e * &c))
    }

    pub fn transpose(&self) -> Self {
        let (r, c) = (self.nrows(), self.ncols());
        let mut entries = Vec::with_capacity(r * c);
        for j in 0..c {
            for i in 0..r {
                entries.push(self.get(i, j).clone());
            }
        }
        CycMatrix { rows: self.cols.clone(), cols: self.rows.clone(), modulus: self.modulus, entries }
    }

    pub fn conj_transpose(&self) -> Self {
        self.transpose().map(|e| e.conjugate())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect::<std::result::Result<_, _>>()?;
        Self::new(self.rows.clone(), self.cols.clone(), self.modulus, entries)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect::<std::result::Result<_, _>>()?;
        Self::new(self.rows.clone(), self.cols.clone(), self.modulus, entries)
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.nrows() != other.nrows() || self.ncols() != other.ncols() {
            return Err(MatrixError::Shape(format!(
                "{}x{} vs {}x{}",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        if self.modulus != other.modulus {
            return Err(CycloError::ModulusMismatch(self.modulus, other.modulus).into());
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.ncols() != other.nrows() {
            return Err(MatrixError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        if self.modulus != other.modulus {
            return Err(CycloError::ModulusMismatch(self.modulus, other.modulus).into());
        }
        let t = other.transpose();
        let mut entries = Vec::with_capacity(self.nrows() * other.ncols());
        for i in 0..self.nrows() {
            let a = self.row(i);
            for j in 0..other.ncols() {
                let b = t.row(j);
                let terms = a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| (false, x, y));
                entries.push(CyclotomicNumber::sum_of_products(self.modulus, terms)?);
            }
        }
        Self::new(self.rows.clone(), other.cols.clone(), self.modulus, entries)
    }

    /// Multiplies on the right by a diagonal matrix given as its diagonal.
    pub fn mul_diag_right(&self, diag: &[CyclotomicNumber]) -> Result<Self> {
        if diag.len() != self.ncols() {
            return Err(MatrixError::Shape("diagonal length".into()));
        }
        let c = self.ncols();
        let entries = self.entries.iter().enumerate().map(|(k, e)| e.mul(&diag[k % c])).collect::<std::result::Result<_, _>>()?;
        Self::new(self.rows.clone(), self.cols.clone(), self.modulus, entries)
    }

    pub fn submatrix(&self, row_subset: &[usize], col_subset: &[usize]) -> Result<Self> {
        if let Some(&i) = row_subset.iter().find(|&&i| i >= self.nrows()) {
            return Err(MatrixError::Shape(format!("row index {i} out of range")));
        }
        if let Some(&j) = col_subset.iter().find(|&&j| j >= self.ncols()) {
            return Err(MatrixError::Shape(format!("column index {j} out of range")));
        }
        let mut entries = Vec::with_capacity(row_subset.len() * col_subset.len());
        for &i in row_subset {
            for &j in col_subset {
                entries.push(self.get(i, j).clone());
            }
        }
        Self::new(
            row_subset.iter().map(|&i| self.rows[i].clone()).collect(),
            col_subset.iter().map(|&j| self.cols[j].clone()).collect(),
            self.modulus,
            entries,
        )
    }

    pub fn submatrix_by_labels(&self, rows: &[String], cols: &[String]) -> Result<Self> {
        let ri = rows.iter().map(|l| self.row_index(l).ok_or_else(|| MatrixError::UnknownLabel(l.clone()))).collect::<Result<Vec<_>>>()?;
        let ci = cols.iter().map(|l| self.col_index(l).ok_or_else(|| MatrixError::UnknownLabel(l.clone()))).collect::<Result<Vec<_>>>()?;
        self.submatrix(&ri, &ci)
    }

    /// Kronecker product with labels "(a,b)" rendered as `a/b`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        self.kron_with(other, |a, b| format!("{a}/{b}"))
    }

    /// Kronecker product with a caller-supplied label combiner.
    pub fn kron_with<F: Fn(&str, &str) -> String>(&self, other: &Self, label: F) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(CycloError::ModulusMismatch(self.modulus, other.modulus).into());
        }
        let rows = self.rows.iter().flat_map(|a| other.rows.iter().map(|b| label(a, b)).collect::<Vec<_>>()).collect();
        let cols = self.cols.iter().flat_map(|a| other.cols.iter().map(|b| label(a, b)).collect::<Vec<_>>()).collect();
        let mut entries = Vec::with_capacity(self.entries.len() * other.entries.len());
        for i in 0..self.nrows() {
            for k in 0..other.nrows() {
                for j in 0..self.ncols() {
                    let a = self.get(i, j);
                    for l in 0..other.ncols() {
                        entries.push(a * other.get(k, l));
                    }
                }
            }
        }
        Self::new(rows, cols, self.modulus, entries)
    }

    /// The n-th compound matrix: minors indexed by increasing n-subsets of the
    /// labels in lexicographic order, labels joined with commas.
    pub fn exterior_power(&self, n: usize) -> Result<Self> {
        if !self.is_square() {
            return Err(MatrixError::Shape("exterior power of a non-square matrix".into()));
        }
        let size = self.nrows();
        if n == 0 || n > size {
            return Err(MatrixError::PowerOutOfRange { n, size });
        }
        let subsets = subsets_lex(size, n);
        let rank: HashMap<u64, usize> = subsets.iter().enumerate().map(|(i, s)| (mask(s), i)).collect();
        let mut entries = vec![CyclotomicNumber::zero(self.modulus); subsets.len() * subsets.len()];
        let mut dp = MinorTable::new(self);
        for (ri, rset) in subsets.iter().enumerate() {
            let minors = dp.minors_for_rows(rset);
            for (m, v) in minors {
                entries[ri * subsets.len() + rank[m]] = v.clone();
            }
        }
        let labels = |s: &Vec<usize>, src: &[String]| s.iter().map(|&i| src[i].as_str()).collect::<Vec<_>>().join(",");
        let rows = subsets.iter().map(|s| labels(s, &self.rows)).collect();
        let cols = subsets.iter().map(|s| labels(s, &self.cols)).collect();
        Self::new(rows, cols, self.modulus, entries)
    }

    /// Determinant by cofactor expansion over column subsets.
    pub fn determinant(&self) -> Result<CyclotomicNumber> {
        if !self.is_square() {
            return Err(MatrixError::Shape("determinant of a non-square matrix".into()));
        }
        let size = self.nrows();
        if size == 0 {
            return Ok(CyclotomicNumber::one(self.modulus));
        }
        let rows: Vec<usize> = (0..size).collect();
        let mut dp = MinorTable::new(self);
        let minors = dp.minors_for_rows(&rows);
        Ok(minors.get(&mask(&rows)).cloned().unwrap_or_else(|| CyclotomicNumber::zero(self.modulus)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.nrows()).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar_times_identity().is_some_and(|c| c.is_one())
    }

    /// Returns c when the matrix equals c·id.
    pub fn is_scalar_times_identity(&self) -> Option<CyclotomicNumber> {
        if !self.is_square() || self.nrows() == 0 {
            return None;
        }
        let c = self.get(0, 0);
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                let e = self.get(i, j);
                if (i == j && e != c) || (i != j && !e.is_zero()) {
                    return None;
                }
            }
        }
        Some(c.clone())
    }

    /// Returns c when self = c·other (other must be nonzero).
    pub fn proportionality(&self, other: &Self) -> Option<CyclotomicNumber> {
        if self.nrows() != other.nrows() || self.ncols() != other.ncols() || self.modulus != other.modulus {
            return None;
        }
        let k = other.entries.iter().position(|e| !e.is_zero())?;
        let c = self.entries[k].div(&other.entries[k]).ok()?;
        self.entries.iter().zip(&other.entries).all(|(a, b)| *a == b * &c).then_some(c)
    }

    pub fn is_unitary(&self) -> bool {
        self.is_square() && self.matmul(&self.conj_transpose()).is_ok_and(|p| p.is_identity())
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (0..self.nrows()).all(|i| (0..self.ncols()).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Recognizes scalar·(signed permutation); signs are relative to the
    /// scalar, which is taken from the first row.
    pub fn as_signed_permutation(&self) -> Option<SignedPermutation> {
        if !self.is_square() || self.nrows() == 0 {
            return None;
        }
        let n = self.nrows();
        let mut perm = Vec::with_capacity(n);
        let mut vals = Vec::with_capacity(n);
        for i in 0..n {
            let mut nz = (0..n).filter(|&j| !self.get(i, j).is_zero());
            let j = nz.next()?;
            if nz.next().is_some() {
                return None;
            }
            perm.push(j);
            vals.push(self.get(i, j).clone());
        }
        let mut seen = vec![false; n];
        for &j in &perm {
            if std::mem::replace(&mut seen[j], true) {
                return None;
            }
        }
        let scalar = vals[0].clone();
        let neg = -&scalar;
        let signs = vals.iter().map(|v| if *v == scalar { Some(1) } else if *v == neg { Some(-1) } else { None }).collect::<Option<Vec<i8>>>()?;
        Some(SignedPermutation { perm, signs, scalar })
    }

    /// Largest |(M·M^* − I)_{ij}| computed in floating point.
    pub fn float_unitarity_defect(&self) -> f64 {
        let n = self.nrows();
        let f: Vec<num_complex::Complex64> = self.entries.iter().map(|e| e.embed()).collect();
        let c = self.ncols();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut s = num_complex::Complex64::new(0.0, 0.0);
                for k in 0..c {
                    s += f[i * c + k] * f[j * c + k].conj();
                }
                if i == j {
                    s -= 1.0;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = (0..self.nrows())
            .map(|i| serde_json::Value::Array(self.row(i).iter().map(|e| e.to_json()).collect()))
            .collect();
        serde_json::json!({
            "rows": self.rows,
            "cols": self.cols,
            "N": self.modulus,
            "entries": entries,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> std::result::Result<Self, String> {
        let labels = |key: &str| -> std::result::Result<Vec<String>, String> {
            v.get(key)
                .and_then(|r| r.as_array())
                .ok_or(format!("missing {key}"))?
                .iter()
                .map(|l| l.as_str().map(str::to_owned).ok_or(format!("non-string label in {key}")))
                .collect()
        };
        let rows = labels("rows")?;
        let cols = labels("cols")?;
        let modulus = v.get("N").and_then(|n| n.as_u64()).ok_or("missing N")? as u32;
        let grid = v.get("entries").and_then(|e| e.as_array()).ok_or("missing entries")?;
        let mut entries = Vec::new();
        for row in grid {
            for e in row.as_array().ok_or("entries must be a grid")? {
                entries.push(CyclotomicNumber::from_json(e).map_err(|e| e.to_string())?);
            }
        }
        Self::new(rows, cols, modulus, entries).map_err(|e| e.to_string())
    }
}

impl Serialize for CycMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        Self::from_json(&v).map_err(serde::de::Error::custom)
    }
}

fn mask(s: &[usize]) -> u64 {
    s.iter().fold(0u64, |m, &i| m | (1 << i))
}

/// All increasing k-subsets of 0..n, lexicographically.
pub fn subsets_lex(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        go(0, n, k, &mut cur, &mut out);
    }
    out
}

/// Memoized minors of a fixed matrix: for a row prefix r_1 < … < r_k, the
/// determinants of all k×k submatrices on those rows, keyed by column mask.
/// Each level extends the previous one by Laplace expansion along the new
/// last row, so no division is ever needed.
struct MinorTable<'a> {
    m: &'a CycMatrix,
    cache: HashMap<Vec<usize>, HashMap<u64, CyclotomicNumber>>,
}

impl<'a> MinorTable<'a> {
    fn new(m: &'a CycMatrix) -> Self {
        MinorTable { m, cache: HashMap::new() }
    }

    fn minors_for_rows(&mut self, rows: &[usize]) -> &HashMap<u64, CyclotomicNumber> {
        if !self.cache.contains_key(rows) {
            let table = if rows.len() == 1 {
                (0..self.m.ncols())
                    .filter(|&j| !self.m.get(rows[0], j).is_zero())
                    .map(|j| (1u64 << j, self.m.get(rows[0], j).clone()))
                    .collect()
            } else {
                let prev = self.minors_for_rows(&rows[..rows.len() - 1]).clone();
                self.extend(&prev, rows[rows.len() - 1], rows.len())
            };
            self.cache.insert(rows.to_vec(), table);
        }
        &self.cache[rows]
    }

    fn extend(&self, prev: &HashMap<u64, CyclotomicNumber>, r: usize, k: usize) -> HashMap<u64, CyclotomicNumber> {
        let cols = self.m.ncols();
        let modulus = self.m.modulus();
        let mut out = HashMap::new();
        for set in subsets_lex(cols, k) {
            let full = mask(&set);
            let mut terms = Vec::with_capacity(k);
            for (pos, &j) in set.iter().enumerate() {
                let a = self.m.get(r, j);
                if a.is_zero() {
                    continue;
                }
                if let Some(minor) = prev.get(&(full & !(1 << j))) {
                    // sign (−1)^{k + pos + 1} with 1-based row k and column pos+1
                    terms.push(((k + pos + 1) % 2 == 1, a, minor));
                }
            }
            if terms.is_empty() {
                continue;
            }
            let v = CyclotomicNumber::sum_of_products(modulus, terms.iter().copied()).expect("single modulus");
            if !v.is_zero() {
                out.insert(full, v);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    fn dft(d: u32) -> CycMatrix {
        let n = 4 * d;
        let s = CyclotomicNumber::sqrt_integer(d as u64, n).unwrap().inv().unwrap();
        CycMatrix::from_fn(labels(d as usize), labels(d as usize), n, |i, j| {
            &CyclotomicNumber::root_of_unity(d, (i * j) as i64).rebase(n).unwrap() * &s
        })
        .unwrap()
    }

    fn int_matrix(n: u32, rows: &[&[i64]]) -> CycMatrix {
        let r = rows.len();
        CycMatrix::from_fn(labels(r), labels(rows[0].len()), n, |i, j| CyclotomicNumber::from_integer(n, rows[i][j])).unwrap()
    }

    #[test]
    fn kron_basics() {
        let one = CycMatrix::identity(vec!["*".into()], 8);
        let b = dft(2);
        let k = one.kron(&b).unwrap();
        assert_eq!(k.entries(), b.entries());
        assert_eq!(k.rows()[1], "*/1");
        let a = CycMatrix::diagonal(labels(2), 8, vec![CyclotomicNumber::from_integer(8, 2), CyclotomicNumber::from_integer(8, 3)]).unwrap();
        let c = CycMatrix::diagonal(labels(2), 8, vec![CyclotomicNumber::from_integer(8, 5), CyclotomicNumber::from_integer(8, 7)]).unwrap();
        let p = a.kron(&c).unwrap();
        assert!(p.is_diagonal());
        let d: Vec<_> = p.diag().iter().map(|e| e.is_integer().unwrap()).collect();
        assert_eq!(d, [10, 14, 15, 21].map(BigInt::from));
        let s2 = b.kron(&b).unwrap();
        let half = CyclotomicNumber::from_rational(8, &BigRational::new(1.into(), 2.into()));
        assert!(s2.entries().iter().all(|e| *e == half || *e == -&half));
    }

    #[test]
    fn exterior_powers() {
        let s = dft(3);
        assert_eq!(s.exterior_power(1).unwrap().entries(), s.entries());
        let top = s.exterior_power(3).unwrap();
        assert_eq!(top.nrows(), 1);
        assert_eq!(top.get(0, 0), &s.determinant().unwrap());
        let e2 = s.exterior_power(2).unwrap();
        assert_eq!(e2.rows()[0], "0,1");
        let want = (&CyclotomicNumber::root_of_unity(3, 1) - &CyclotomicNumber::one(3))
            .scale(&BigRational::new(1.into(), 3.into()))
            .rebase(12)
            .unwrap();
        assert_eq!(e2.get(0, 0), &want);
        assert!(matches!(s.exterior_power(4), Err(MatrixError::PowerOutOfRange { .. })));
        assert!(matches!(s.exterior_power(0), Err(MatrixError::PowerOutOfRange { .. })));
    }

    #[test]
    fn determinant_against_leibniz() {
        let m = int_matrix(1, &[&[2, -1, 0, 3], &[1, 4, 2, 0], &[0, 5, -3, 1], &[7, 0, 1, 1]]);
        // Leibniz expansion as an independent oracle
        let rows: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| m.get(i, j).is_integer().unwrap().try_into().unwrap()).collect()).collect();
        let mut want = 0i64;
        for p in itertools_perms(4) {
            let inv = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let prod: i64 = (0..4).map(|i| rows[i][p[i]]).product();
            want += if inv % 2 == 0 { prod } else { -prod };
        }
        assert_eq!(m.determinant().unwrap().is_integer().unwrap(), BigInt::from(want));
    }

    fn itertools_perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in itertools_perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn sylvester_franke() {
        // det(∧^k M) = det(M)^{C(m-1, k-1)}
        let m = int_matrix(5, &[&[1, 2, 0, 1], &[3, -1, 2, 2], &[0, 1, 1, -2], &[2, 0, 1, 3]]);
        let zeta = CyclotomicNumber::root_of_unity(5, 1);
        let m = m.map(|e| &(e + &zeta) * &zeta);
        let det = m.determinant().unwrap();
        for (k, e) in [(1, 1), (2, 3), (3, 3), (4, 1)] {
            let lhs = m.exterior_power(k).unwrap().determinant().unwrap();
            assert_eq!(lhs, det.pow(e).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn unitary_exterior_powers() {
        for d in 2..=6u32 {
            let s = dft(d);
            assert!(s.is_unitary() && s.is_symmetric());
            for n in 1..=d.min(3) as usize {
                let e = s.exterior_power(n).unwrap();
                assert!(e.is_unitary(), "d={d} n={n}");
            }
        }
    }

    #[test]
    fn predicates() {
        let s = dft(4);
        let sq = s.matmul(&s).unwrap();
        let sp = sq.as_signed_permutation().unwrap();
        assert_eq!(sp.perm, vec![0, 3, 2, 1]);
        assert!(sp.signs.iter().all(|&x| x == 1));
        assert!(sp.scalar.is_one());
        assert!(s.as_signed_permutation().is_none());
        let d = CycMatrix::diagonal(labels(3), 4, vec![CyclotomicNumber::root_of_unity(4, 1); 3]).unwrap();
        assert!(d.is_symmetric());
        assert_eq!(d.is_scalar_times_identity(), Some(CyclotomicNumber::root_of_unity(4, 1)));
        let id = CycMatrix::identity(labels(4), 16);
        assert_eq!(s.matmul(&id).unwrap(), s);
        assert_eq!(s.conj_transpose().conj_transpose(), s);
        let mut bad = s.entries().to_vec();
        bad[0] = &bad[0] + &CyclotomicNumber::from_integer(16, 1);
        let bad = CycMatrix::new(s.rows().to_vec(), s.cols().to_vec(), 16, bad).unwrap();
        assert!(!bad.is_unitary());
        assert!(s.float_unitarity_defect() < 1e-12);
    }

    #[test]
    fn shapes_are_checked() {
        let a = int_matrix(1, &[&[1, 2, 3]]);
        assert!(matches!(a.matmul(&a), Err(MatrixError::Shape(_))));
        assert!(CycMatrix::new(labels(2), labels(2), 1, vec![]).is_err());
        let sub = dft(3).submatrix(&[0, 2], &[1]).unwrap();
        assert_eq!(sub.rows(), &["0".to_string(), "2".to_string()]);
        assert_eq!(sub.cols(), &["1".to_string()]);
    }

    #[test]
    fn json_round_trip() {
        let s = dft(3).exterior_power(2).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: CycMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
