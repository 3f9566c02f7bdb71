//! S and T for Z/d, the index sets I_{n,d}, the special tuples i^(p) and the
//! exterior powers ∧^nS, ∧^nT with their structure constants.

use std::fmt;

use num_bigint::BigInt;

use crate::cycmat::{subsets_lex, CycMatrix, MatrixError};
use crate::cyclo::{working_modulus, CyclotomicNumber};
use crate::fusion::{verlinde_scaled, FusionError, FusionRing, ModularDatum};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TablesError {
    #[error("need 1 <= n <= d, got n = {n}, d = {d}")]
    Range { n: usize, d: u32 },
    #[error("{0:?} is not a strictly increasing tuple in [0, {1})")]
    NotStrict(Vec<u32>, u32),
    #[error("malformed tuple label {0:?}")]
    BadLabel(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
}

pub type Result<T> = std::result::Result<T, TablesError>;

/// An element of I_{n,d}: 0 <= a_1 < ... < a_n < d.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrictTuple {
    d: u32,
    entries: Vec<u32>,
}

impl StrictTuple {
    pub fn new(d: u32, entries: Vec<u32>) -> Result<Self> {
        let ok = entries.windows(2).all(|w| w[0] < w[1]) && entries.iter().all(|&a| a < d);
        if !ok {
            return Err(TablesError::NotStrict(entries, d));
        }
        Ok(StrictTuple { d, entries })
    }

    /// Reduces mod d and sorts; fails on repeated residues.
    pub fn from_residues(d: u32, values: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut v: Vec<u32> = values.into_iter().map(|x| x.rem_euclid(d as i64) as u32).collect();
        v.sort_unstable();
        Self::new(d, v)
    }

    pub fn parse(d: u32, label: &str) -> Result<Self> {
        let entries = label
            .split(',')
            .map(|s| s.trim().parse::<u32>().map_err(|_| TablesError::BadLabel(label.into())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, entries)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn sum(&self) -> i64 {
        self.entries.iter().map(|&a| a as i64).sum()
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for StrictTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|a| a.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

fn check_range(n: usize, d: u32) -> Result<()> {
    if n == 0 || d == 0 || n > d as usize {
        return Err(TablesError::Range { n, d });
    }
    Ok(())
}

fn base_labels(d: u32) -> Vec<String> {
    (0..d).map(|i| i.to_string()).collect()
}

/// Exponent of ζ_N realizing ξ^e = ζ_{2d}^e.
fn xi_exponent(d: u32, n: u32, e: i64) -> i64 {
    e * (n / (2 * d)) as i64
}

/// The character table (ζ^{ij}) of Z/d without normalization, at modulus d.
pub fn base_s_hat(d: u32) -> CycMatrix {
    let labels = base_labels(d);
    CycMatrix::from_fn(labels.clone(), labels, d, |i, j| CyclotomicNumber::root_of_unity(d, (i * j) as i64))
        .expect("modulus d")
}

/// S_{ij} = ζ^{ij}/√d at the working modulus.
pub fn base_s(d: u32) -> CycMatrix {
    normalized(&base_s_hat(d), d, 1)
}

/// T_a = ζ_24^{d-1} ξ^{a² + da}.
pub fn base_t(d: u32) -> CycMatrix {
    let n = working_modulus(d);
    let diag = (0..d as i64)
        .map(|a| {
            let e = (d as i64 - 1) * (n / 24) as i64 + xi_exponent(d, n, a * a + d as i64 * a);
            CyclotomicNumber::root_of_unity(n, e)
        })
        .collect();
    CycMatrix::diagonal(base_labels(d), n, diag).expect("labels match")
}

fn normalized(s_hat: &CycMatrix, d: u32, n: usize) -> CycMatrix {
    let m = working_modulus(d);
    let root = CyclotomicNumber::sqrt_integer((d as u64).pow(n as u32), m).expect("4d divides the working modulus");
    let inv = root.inv().expect("nonzero");
    s_hat.rebase(m).and_then(|x| x.scalar_mul(&inv)).expect("working modulus is a multiple of d")
}

/// I_{n,d} in lexicographic order.
pub fn index_set(n: usize, d: u32) -> Result<Vec<StrictTuple>> {
    check_range(n, d)?;
    Ok(subsets_lex(d as usize, n)
        .into_iter()
        .map(|s| StrictTuple { d, entries: s.into_iter().map(|a| a as u32).collect() })
        .collect())
}

/// i^(p): the tuple (p, p+1, ..., p+n-1) reduced mod d and sorted.
pub fn special_tuple(p: i64, n: usize, d: u32) -> Result<StrictTuple> {
    check_range(n, d)?;
    StrictTuple::from_residues(d, (0..n as i64).map(|j| p + j))
}

/// √d^n·∧^nS = ∧^n(ζ^{ij}), with entries in Z[ζ_d], at modulus d.
pub fn ext_s_hat(n: usize, d: u32) -> Result<CycMatrix> {
    check_range(n, d)?;
    Ok(base_s_hat(d).exterior_power(n)?)
}

/// ∧^nS at the working modulus.
pub fn ext_s(n: usize, d: u32) -> Result<CycMatrix> {
    Ok(normalized(&ext_s_hat(n, d)?, d, n))
}

/// Diagonal of ∧^nT: ζ_24^{n(d-1)} ξ^{Σ(a_i² + d a_i)}.
pub fn ext_t_diag(n: usize, d: u32) -> Result<Vec<CyclotomicNumber>> {
    let m = working_modulus(d);
    let di = d as i64;
    Ok(index_set(n, d)?
        .iter()
        .map(|a| {
            let q: i64 = a.entries.iter().map(|&x| (x as i64) * (x as i64) + di * x as i64).sum();
            let e = n as i64 * (di - 1) * (m / 24) as i64 + xi_exponent(d, m, q);
            CyclotomicNumber::root_of_unity(m, e)
        })
        .collect())
}

pub fn ext_t(n: usize, d: u32) -> Result<CycMatrix> {
    let labels = index_set(n, d)?.iter().map(StrictTuple::label).collect();
    Ok(CycMatrix::diagonal(labels, working_modulus(d), ext_t_diag(n, d)?)?)
}

/// Position of i^(p) in I_{n,d}.
pub fn special_index(p: i64, n: usize, d: u32) -> Result<usize> {
    let target = special_tuple(p, n, d)?;
    Ok(index_set(n, d)?.iter().position(|a| *a == target).expect("i^(p) lies in I_{n,d}"))
}

/// The ring A_{n,p}: Verlinde constants of ∧^nS with unit i^(p).
pub fn structure_constants(n: usize, d: u32, p: i64) -> Result<FusionRing> {
    let unit = special_index(p, n, d)?;
    let s_hat = ext_s_hat(n, d)?;
    Ok(verlinde_scaled(&s_hat, &BigInt::from(d).pow(n as u32), unit)?)
}

/// Verlinde constants of ∧^nS with an arbitrary unit tuple. Experimental:
/// integrality is only known for units of the form i^(p), so a
/// `NonIntegral` error here is an answer, not a bug.
pub fn structure_constants_with_unit(n: usize, d: u32, unit: &StrictTuple) -> Result<FusionRing> {
    let idx = index_set(n, d)?
        .iter()
        .position(|a| a == unit)
        .ok_or_else(|| TablesError::NotStrict(unit.entries.clone(), d))?;
    let s_hat = ext_s_hat(n, d)?;
    Ok(verlinde_scaled(&s_hat, &BigInt::from(d).pow(n as u32), idx)?)
}

/// (∧^nS, ∧^nT) with unit i^(p) and the integral form attached.
pub fn modular_datum(n: usize, d: u32, p: i64) -> Result<ModularDatum> {
    let s_hat = ext_s_hat(n, d)?;
    let s = normalized(&s_hat, d, n);
    let md = ModularDatum::new(s, ext_t_diag(n, d)?, special_index(p, n, d)?)?;
    Ok(md.with_integral_form(s_hat, BigInt::from(d).pow(n as u32))?)
}

/// The base datum (S, T) of Z/d with unit 0.
pub fn base_datum(d: u32) -> ModularDatum {
    let s = base_s(d);
    let md = ModularDatum::new(s, base_t(d).diag(), 0).expect("square");
    md.with_integral_form(base_s_hat(d), BigInt::from(d)).expect("√d·S = (ζ^{ij})")
}

/// Whether every entry of every row i^(p) of ∧^nS is nonzero.
pub fn special_rows_nonvanishing(n: usize, d: u32) -> Result<bool> {
    let s_hat = ext_s_hat(n, d)?;
    for p in 0..d as i64 {
        let row = special_index(p, n, d)?;
        if s_hat.row(row).iter().any(CyclotomicNumber::is_zero) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::check_modular_axioms;

    fn c(n: u32, k: i64) -> CyclotomicNumber {
        CyclotomicNumber::root_of_unity(n, k)
    }

    #[test]
    fn special_tuples_follow_both_branches() {
        assert_eq!(special_tuple(1, 2, 5).unwrap().entries(), &[1, 2]);
        assert_eq!(special_tuple(4, 2, 5).unwrap().entries(), &[0, 4]);
        for d in 1..=7u32 {
            for n in 1..=d as usize {
                for p in -7..7 {
                    assert_eq!(special_tuple(p, n, d).unwrap(), special_tuple(p + d as i64, n, d).unwrap());
                }
            }
        }
    }

    #[test]
    fn index_sets() {
        let i13: Vec<String> = index_set(1, 3).unwrap().iter().map(|a| a.label()).collect();
        assert_eq!(i13, ["0", "1", "2"]);
        let i24 = index_set(2, 4).unwrap();
        assert_eq!(i24.len(), 6);
        assert_eq!(i24[0].entries(), &[0, 1]);
        assert_eq!(i24[5].entries(), &[2, 3]);
        assert_eq!(index_set(3, 6).unwrap().len(), 20);
        assert!(matches!(index_set(3, 2), Err(TablesError::Range { .. })));
        assert!(StrictTuple::new(4, vec![2, 1]).is_err());
        assert_eq!(StrictTuple::parse(5, "0,3").unwrap().entries(), &[0, 3]);
    }

    #[test]
    fn base_matrices() {
        let t = base_t(5);
        let n = working_modulus(5);
        assert_eq!(*t.get(0, 0), c(24, 4).rebase(n).unwrap());
        assert_eq!(base_s(1).entries(), &[CyclotomicNumber::one(working_modulus(1))]);
        let s = base_s(4);
        let sp = s.matmul(&s).unwrap().as_signed_permutation().unwrap();
        assert_eq!(sp.perm, vec![0, 3, 2, 1]);
        assert!(sp.signs.iter().all(|&x| x == 1));
        assert!(sp.scalar.is_one());
    }

    #[test]
    fn exterior_powers() {
        let d = 3;
        assert_eq!(ext_s(1, d).unwrap(), base_s(d));
        let m = ext_s(2, d).unwrap();
        let third = num_rational::BigRational::new(1.into(), 3.into());
        let expected = (&c(3, 1) - &CyclotomicNumber::one(3)).rebase(m.modulus()).unwrap().scale(&third);
        assert_eq!(*m.get(0, 0), expected);
        let full = ext_s(3, 3).unwrap();
        assert_eq!(full.nrows(), 1);
        assert_eq!(*full.get(0, 0), base_s(3).determinant().unwrap());
    }

    #[test]
    fn ext_t_is_product_of_base_entries() {
        for d in 1..=6u32 {
            let base = base_t(d).diag();
            for n in 1..=d as usize {
                let t = ext_t_diag(n, d).unwrap();
                for (a, v) in index_set(n, d).unwrap().iter().zip(&t) {
                    let prod = a.entries().iter().fold(CyclotomicNumber::one(v.modulus()), |acc, &x| &acc * &base[x as usize]);
                    assert_eq!(*v, prod);
                }
            }
        }
    }

    #[test]
    fn small_exterior_data_are_modular() {
        for d in 2..=5u32 {
            for n in 1..=d as usize {
                let md = modular_datum(n, d, 0).unwrap();
                let rep = check_modular_axioms(&md);
                assert!(rep.passes(), "d={d} n={n}: {:?}", rep.failures());
                assert!(rep.st_cubed.unwrap().is_one());
            }
        }
    }

    #[test]
    fn rank_one_rings_are_shifted_group_rings() {
        for d in 1..=7u32 {
            for p in 0..d as i64 {
                let r = structure_constants(1, d, p).unwrap();
                for a in 0..d as i64 {
                    for b in 0..d as i64 {
                        for cc in 0..d as i64 {
                            let want = ((a + b - cc - p).rem_euclid(d as i64) == 0) as i64;
                            assert_eq!(r.get(a as usize, b as usize, cc as usize), want);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn special_rows_never_vanish() {
        for d in 1..=7u32 {
            for n in 1..=d as usize {
                assert!(special_rows_nonvanishing(n, d).unwrap());
            }
        }
    }

    #[test]
    fn arbitrary_units_are_accepted_when_rows_do_not_vanish() {
        let unit = special_tuple(2, 2, 5).unwrap();
        let a = structure_constants_with_unit(2, 5, &unit).unwrap();
        assert_eq!(a, structure_constants(2, 5, 2).unwrap());
    }
}
