//! Modular data, the Verlinde construction of fusion rings, sign rescaling,
//! the positivity search, and the doubled and absolute-value rings.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::cycmat::{CycMatrix, MatrixError};
use crate::cyclo::{CycloError, CyclotomicNumber};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FusionError {
    #[error("Verlinde constant N[{i},{j}]^{k} = {value} is not an integer")]
    NonIntegral { i: String, j: String, k: String, value: CyclotomicNumber },
    #[error("unit row vanishes at column {0}")]
    ZeroInUnitRow(String),
    #[error("associativity fails at ({i},{j},{k}) -> {l}")]
    NotAssociative { i: String, j: String, k: String, l: String },
    #[error("negative constant N[{i},{j}]^{k} = {n}")]
    Negative { i: String, j: String, k: String, n: i64 },
    #[error("{0} is not a two-sided unit")]
    NotUnit(String),
    #[error("not commutative at ({i},{j}) -> {k}")]
    NotCommutative { i: String, j: String, k: String },
    #[error("{size} basis elements exceed the exhaustive search bound {bound}; use the categorically derived signs instead")]
    TooLarge { size: usize, bound: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Field(#[from] CycloError),
}

pub type Result<T> = std::result::Result<T, FusionError>;

/// A based ring with integer structure constants N_{i,j}^k stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionRing {
    basis: Vec<String>,
    unit: usize,
    constants: Vec<i64>,
}

impl FusionRing {
    pub fn from_dense(basis: Vec<String>, unit: usize, constants: Vec<i64>) -> Result<Self> {
        let m = basis.len();
        if constants.len() != m * m * m {
            return Err(FusionError::Invalid(format!("{} constants for rank {m}", constants.len())));
        }
        if unit >= m {
            return Err(FusionError::Invalid("unit index out of range".into()));
        }
        Ok(FusionRing { basis, unit, constants })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == label)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> i64 {
        let m = self.basis.len();
        self.constants[(i * m + j) * m + k]
    }

    fn set(&mut self, i: usize, j: usize, k: usize, v: i64) {
        let m = self.basis.len();
        self.constants[(i * m + j) * m + k] = v;
    }

    /// Nonzero constants as (i, j, k, N) in index order.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize, i64)> {
        let m = self.rank();
        let mut out = Vec::new();
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let v = self.get(i, j, k);
                    if v != 0 {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }

    pub fn is_nonnegative(&self) -> bool {
        self.constants.iter().all(|&c| c >= 0)
    }

    pub fn has_negative(&self) -> bool {
        !self.is_nonnegative()
    }

    pub fn min_constant(&self) -> i64 {
        self.constants.iter().copied().min().unwrap_or(0)
    }

    pub fn check_unit(&self) -> Result<()> {
        let m = self.rank();
        let u = self.unit;
        for j in 0..m {
            for k in 0..m {
                let want = i64::from(j == k);
                if self.get(u, j, k) != want || self.get(j, u, k) != want {
                    return Err(FusionError::NotUnit(self.basis[u].clone()));
                }
            }
        }
        Ok(())
    }

    pub fn check_commutative(&self) -> Result<()> {
        let m = self.rank();
        for i in 0..m {
            for j in 0..i {
                for k in 0..m {
                    if self.get(i, j, k) != self.get(j, i, k) {
                        return Err(FusionError::NotCommutative {
                            i: self.basis[i].clone(),
                            j: self.basis[j].clone(),
                            k: self.basis[k].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn products(&self) -> Vec<Vec<(usize, i64)>> {
        let m = self.rank();
        let mut out = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                out.push((0..m).filter_map(|k| Some((k, self.get(i, j, k))).filter(|p| p.1 != 0)).collect());
            }
        }
        out
    }

    /// (b_i b_j) b_k = b_i (b_j b_k) for all triples.
    pub fn check_associative(&self) -> Result<()> {
        let m = self.rank();
        let prod = self.products();
        let mut lhs = vec![0i64; m];
        let mut rhs = vec![0i64; m];
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    lhs.iter_mut().for_each(|x| *x = 0);
                    rhs.iter_mut().for_each(|x| *x = 0);
                    for &(mid, a) in &prod[i * m + j] {
                        for &(l, b) in &prod[mid * m + k] {
                            lhs[l] += a * b;
                        }
                    }
                    for &(mid, a) in &prod[j * m + k] {
                        for &(l, b) in &prod[i * m + mid] {
                            rhs[l] += a * b;
                        }
                    }
                    if let Some(l) = (0..m).find(|&l| lhs[l] != rhs[l]) {
                        return Err(FusionError::NotAssociative {
                            i: self.basis[i].clone(),
                            j: self.basis[j].clone(),
                            k: self.basis[k].clone(),
                            l: self.basis[l].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Unit, commutativity and associativity.
    pub fn validate(&self) -> Result<()> {
        self.check_unit()?;
        self.check_commutative()?;
        self.check_associative()
    }

    pub fn first_negative(&self) -> Option<FusionError> {
        self.nonzero().into_iter().find(|c| c.3 < 0).map(|(i, j, k, n)| FusionError::Negative {
            i: self.basis[i].clone(),
            j: self.basis[j].clone(),
            k: self.basis[k].clone(),
            n,
        })
    }

    /// The ring expressed in another labeling: `map[a]` is the index in the
    /// new basis of old element a.
    pub fn relabel(&self, map: &[usize], basis: Vec<String>) -> Result<Self> {
        let m = self.rank();
        if map.len() != m || basis.len() != m {
            return Err(FusionError::Invalid("relabeling has the wrong size".into()));
        }
        let mut seen = vec![false; m];
        for &t in map {
            if t >= m || std::mem::replace(&mut seen[t], true) {
                return Err(FusionError::Invalid("relabeling is not a bijection".into()));
            }
        }
        let mut out = FusionRing { basis, unit: map[self.unit], constants: vec![0; m * m * m] };
        for (i, j, k, v) in self.nonzero() {
            out.set(map[i], map[j], map[k], v);
        }
        Ok(out)
    }

    /// The sorted multiset of nonzero constants.
    pub fn constant_multiset(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.constants.iter().copied().filter(|&c| c != 0).collect();
        v.sort_unstable();
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        let constants: Vec<serde_json::Value> = self
            .nonzero()
            .into_iter()
            .map(|(i, j, k, n)| {
                serde_json::json!({"i": self.basis[i], "j": self.basis[j], "k": self.basis[k], "n": n})
            })
            .collect();
        serde_json::json!({"basis": self.basis, "unit": self.basis[self.unit], "constants": constants})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |s: &str| FusionError::Invalid(s.to_string());
        let basis: Vec<String> = v
            .get("basis")
            .and_then(|b| b.as_array())
            .ok_or_else(|| bad("missing basis"))?
            .iter()
            .map(|l| l.as_str().map(str::to_owned).ok_or_else(|| bad("non-string basis label")))
            .collect::<Result<_>>()?;
        let index = |l: &serde_json::Value| -> Result<usize> {
            let s = l.as_str().ok_or_else(|| bad("label must be a string"))?;
            basis.iter().position(|b| b == s).ok_or_else(|| bad(&format!("unknown label {s}")))
        };
        let unit = index(v.get("unit").ok_or_else(|| bad("missing unit"))?)?;
        let m = basis.len();
        let mut ring = FusionRing { basis: basis.clone(), unit, constants: vec![0; m * m * m] };
        for c in v.get("constants").and_then(|c| c.as_array()).ok_or_else(|| bad("missing constants"))? {
            let field = |k: &str| c.get(k).ok_or_else(|| bad(&format!("constant without {k}")));
            let n = field("n")?.as_i64().ok_or_else(|| bad("constant must be an integer"))?;
            ring.set(index(field("i")?)?, index(field("j")?)?, index(field("k")?)?, n);
        }
        Ok(ring)
    }
}

impl Serialize for FusionRing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FusionRing {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        Self::from_json(&v).map_err(serde::de::Error::custom)
    }
}

fn to_i64(v: &BigInt) -> Result<i64> {
    v.to_i64().ok_or_else(|| FusionError::Invalid(format!("structure constant {v} exceeds 64 bits")))
}

/// N_{i,j}^k = Σ_l S_il S_jl conj(S_kl) / S_{unit,l}.
pub fn verlinde(s: &CycMatrix, unit: usize) -> Result<FusionRing> {
    verlinde_scaled(s, &BigInt::from(1), unit)
}

/// Verlinde constants of S/√norm computed from S: the triple-product sum is
/// divided by `norm`. With S = √d^n·∧^nS this keeps every entry in Z[ζ_d].
pub fn verlinde_scaled(s: &CycMatrix, norm: &BigInt, unit: usize) -> Result<FusionRing> {
    if !s.is_square() {
        return Err(MatrixError::Shape("Verlinde formula needs a square matrix".into()).into());
    }
    let m = s.nrows();
    if unit >= m {
        return Err(FusionError::Invalid("unit index out of range".into()));
    }
    if !norm.is_positive() {
        return Err(FusionError::Invalid("normalization must be positive".into()));
    }
    let n = s.modulus();
    let inv_unit: Vec<CyclotomicNumber> = (0..m)
        .map(|l| s.get(unit, l).inv().map_err(|_| FusionError::ZeroInUnitRow(s.cols()[l].clone())))
        .collect::<Result<_>>()?;
    let conj = s.conj_transpose().transpose();
    let inv_norm = num_rational::BigRational::new(1.into(), norm.clone());
    let mut constants = vec![0i64; m * m * m];
    let mut u = Vec::with_capacity(m);
    for i in 0..m {
        for j in i..m {
            u.clear();
            for l in 0..m {
                u.push(&(s.get(i, l) * s.get(j, l)) * &inv_unit[l]);
            }
            for k in 0..m {
                let terms = u.iter().zip(conj.row(k)).map(|(a, b)| (false, a, b));
                let mut v = CyclotomicNumber::sum_of_products(n, terms)?;
                if !norm.is_one() {
                    v = v.scale(&inv_norm);
                }
                let c = v.is_integer().ok_or_else(|| FusionError::NonIntegral {
                    i: s.rows()[i].clone(),
                    j: s.rows()[j].clone(),
                    k: s.rows()[k].clone(),
                    value: v.clone(),
                })?;
                let c = to_i64(&c)?;
                constants[(i * m + j) * m + k] = c;
                constants[(j * m + i) * m + k] = c;
            }
        }
    }
    let ring = FusionRing { basis: s.rows().to_vec(), unit, constants };
    ring.validate()?;
    Ok(ring)
}

/// S given through an integral multiple: S·root = s_hat with root² = norm.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralForm {
    pub s_hat: CycMatrix,
    pub norm: BigInt,
}

/// A modular datum (I, i0, S, T); T is stored as its diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularDatum {
    pub s: CycMatrix,
    pub t: Vec<CyclotomicNumber>,
    pub unit: usize,
    pub integral: Option<IntegralForm>,
}

impl ModularDatum {
    pub fn new(s: CycMatrix, t: Vec<CyclotomicNumber>, unit: usize) -> Result<Self> {
        if !s.is_square() || t.len() != s.nrows() || unit >= t.len() {
            return Err(FusionError::Invalid("S must be square with T and the unit matching".into()));
        }
        let n = s.modulus();
        let t = t.iter().map(|x| x.rebase(n)).collect::<std::result::Result<_, _>>()?;
        Ok(ModularDatum { s, t, unit, integral: None })
    }

    /// Attaches an integral presentation after checking S·√norm = Ŝ exactly.
    pub fn with_integral_form(mut self, s_hat: CycMatrix, norm: BigInt) -> Result<Self> {
        let n = self.s.modulus();
        let small = norm.to_u64().ok_or_else(|| FusionError::Invalid("norm too large".into()))?;
        let root = CyclotomicNumber::sqrt_integer(small, n)?;
        let lifted = s_hat.rebase(n)?;
        let scaled = self.s.scalar_mul(&root)?;
        if scaled.entries() != lifted.entries() {
            return Err(FusionError::Invalid("integral form does not match S".into()));
        }
        self.integral = Some(IntegralForm { s_hat, norm });
        Ok(self)
    }

    pub fn labels(&self) -> &[String] {
        self.s.rows()
    }

    pub fn t_matrix(&self) -> CycMatrix {
        CycMatrix::diagonal(self.labels().to_vec(), self.s.modulus(), self.t.clone()).expect("T matches S")
    }

    pub fn fusion_ring(&self) -> Result<FusionRing> {
        match &self.integral {
            Some(f) => verlinde_scaled(&f.s_hat, &f.norm, self.unit),
            None => verlinde(&self.s, self.unit),
        }
    }
}

/// Exact verdicts on the modular-datum axioms.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub symmetric: bool,
    pub unitary: bool,
    /// c with S⁴ = c·id, if S⁴ is scalar.
    pub s_fourth: Option<CyclotomicNumber>,
    /// ξ with (ST)³ = ξ·id, if it exists.
    pub st_cubed: Option<CyclotomicNumber>,
    /// ξ' with (ST)³ = ξ'·S², if it exists.
    pub st_cubed_over_s_squared: Option<CyclotomicNumber>,
    pub s_squared_commutes_with_t: bool,
    pub unit_row_nonzero: bool,
    pub t_roots_of_unity: bool,
    /// `None` when the Verlinde check was skipped.
    pub verlinde: Option<std::result::Result<(), String>>,
}

impl AxiomReport {
    /// All axioms on the nose: S⁴ = id and (ST)³ scalar.
    pub fn passes(&self) -> bool {
        self.symmetric
            && self.unitary
            && self.s_fourth.as_ref().is_some_and(|c| c.is_one())
            && self.st_cubed.is_some()
            && self.s_squared_commutes_with_t
            && self.unit_row_nonzero
            && self.t_roots_of_unity
            && !matches!(self.verlinde, Some(Err(_)))
    }

    /// Axioms up to global scalars.
    pub fn passes_projectively(&self) -> bool {
        self.symmetric
            && self.unitary
            && self.s_fourth.is_some()
            && (self.st_cubed.is_some() || self.st_cubed_over_s_squared.is_some())
            && self.s_squared_commutes_with_t
            && self.unit_row_nonzero
            && self.t_roots_of_unity
            && !matches!(self.verlinde, Some(Err(_)))
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let checks: [(&'static str, bool); 8] = [
            ("symmetric", self.symmetric),
            ("unitary", self.unitary),
            ("S^4 = id", self.s_fourth.as_ref().is_some_and(|c| c.is_one())),
            ("(ST)^3 scalar", self.st_cubed.is_some()),
            ("S^2 T = T S^2", self.s_squared_commutes_with_t),
            ("unit row nonzero", self.unit_row_nonzero),
            ("T roots of unity", self.t_roots_of_unity),
            ("Verlinde integral", !matches!(self.verlinde, Some(Err(_)))),
        ];
        for (name, ok) in checks {
            if !ok {
                out.push(name);
            }
        }
        out
    }
}

pub fn check_modular_axioms(md: &ModularDatum) -> AxiomReport {
    check_modular_axioms_with(md, true)
}

pub fn check_modular_axioms_with(md: &ModularDatum, with_verlinde: bool) -> AxiomReport {
    let s = &md.s;
    let n = s.modulus();
    let symmetric = s.is_symmetric();
    let unitary = s.is_unitary();
    let s2 = s.matmul(s).expect("square");
    let s4 = s2.matmul(&s2).expect("square");
    let st = s.mul_diag_right(&md.t).expect("T matches S");
    let st3 = st.matmul(&st).and_then(|x| x.matmul(&st)).expect("square");
    let s2t = s2.mul_diag_right(&md.t).expect("T matches S");
    let ts2 = s2.transpose().mul_diag_right(&md.t).expect("T matches S").transpose();
    let unit_row_nonzero = s.row(md.unit).iter().all(|e| !e.is_zero());
    let order = if n.is_multiple_of(2) { n as i64 } else { 2 * n as i64 };
    let t_roots_of_unity = md.t.iter().all(|x| x.pow(order).is_ok_and(|p| p.is_one()));
    let verlinde = (with_verlinde && unit_row_nonzero).then(|| md.fusion_ring().map(|_| ()).map_err(|e| e.to_string()));
    let verlinde = if with_verlinde && !unit_row_nonzero { Some(Err("unit row has a zero".into())) } else { verlinde };
    AxiomReport {
        symmetric,
        unitary,
        s_fourth: s4.is_scalar_times_identity(),
        st_cubed: st3.is_scalar_times_identity(),
        st_cubed_over_s_squared: st3.proportionality(&s2),
        s_squared_commutes_with_t: s2t == ts2,
        unit_row_nonzero,
        t_roots_of_unity,
        verlinde,
    }
}

/// N'_{i,j}^k = σ_i σ_j σ_k σ_{unit} N_{i,j}^k.
pub fn rescale_signs(ring: &FusionRing, sigma: &[i8]) -> Result<FusionRing> {
    if sigma.len() != ring.rank() || sigma.iter().any(|&s| s != 1 && s != -1) {
        return Err(FusionError::Invalid("sigma must assign ±1 to every basis element".into()));
    }
    let mut out = ring.clone();
    let su = sigma[ring.unit] as i64;
    for (i, j, k, v) in ring.nonzero() {
        out.set(i, j, k, v * sigma[i] as i64 * sigma[j] as i64 * sigma[k] as i64 * su);
    }
    Ok(out)
}

pub const DEFAULT_SIGN_SEARCH_BOUND: usize = 20;

/// Exhaustive search, in Gray-code order with σ_unit = +1, for signs making
/// every constant non-negative. Returns the first vector found.
pub fn find_positive_signs(ring: &FusionRing, bound: usize) -> Result<Option<Vec<i8>>> {
    let m = ring.rank();
    if m > bound {
        return Err(FusionError::TooLarge { size: m, bound });
    }
    // Every nonzero constant c imposes sign(c)·σ_i σ_j σ_k σ_u = +1.
    let free: Vec<usize> = (0..m).filter(|&i| i != ring.unit).collect();
    let bit = |i: usize| -> u64 { free.iter().position(|&f| f == i).map_or(0, |p| 1 << p) };
    let mut constraints: Vec<(u64, bool)> = Vec::new();
    for (i, j, k, v) in ring.nonzero() {
        let mask = bit(i) ^ bit(j) ^ bit(k);
        constraints.push((mask, v < 0));
    }
    constraints.sort_unstable();
    constraints.dedup();
    // A constraint with an empty mask is decided independently of σ.
    if constraints.iter().any(|&(mask, neg)| mask == 0 && neg) {
        return Ok(None);
    }
    constraints.retain(|&(mask, _)| mask != 0);
    let total: u64 = 1 << free.len();
    let mut state: u64 = 0;
    let mut last_bad = 0usize;
    for step in 0..total {
        if step > 0 {
            state ^= 1 << step.trailing_zeros();
        }
        // σ_x = -1 for bits set in state; the product over a mask is the parity.
        let ok = |&(mask, neg): &(u64, bool)| ((state & mask).count_ones() % 2 == 1) == neg;
        if !constraints.is_empty() && !ok(&constraints[last_bad]) {
            continue;
        }
        match constraints.iter().position(|c| !ok(c)) {
            Some(p) => last_bad = p,
            None => {
                let mut sigma = vec![1i8; m];
                for (p, &i) in free.iter().enumerate() {
                    if state & (1 << p) != 0 {
                        sigma[i] = -1;
                    }
                }
                return Ok(Some(sigma));
            }
        }
    }
    Ok(None)
}

fn primed(label: &str) -> String {
    format!("{label}'")
}

/// The ring on {b_a, b'_a} with x·y = φ(π(x)π(y)), where π(b'_a) = −b_a and
/// φ sends positive coefficients to b and negative ones to b'.
pub fn double_ring(ring: &FusionRing) -> Result<FusionRing> {
    let m = ring.rank();
    let mut basis = ring.basis.clone();
    basis.extend(ring.basis.iter().map(|b| primed(b)));
    let mut out = FusionRing { basis, unit: ring.unit, constants: vec![0; 8 * m * m * m] };
    for (i, j, k, v) in ring.nonzero() {
        for si in 0..2 {
            for sj in 0..2 {
                let signed = if (si + sj) % 2 == 0 { v } else { -v };
                let target = if signed > 0 { k } else { k + m };
                out.set(i + si * m, j + sj * m, target, signed.abs());
            }
        }
    }
    if let Some(e) = out.first_negative() {
        return Err(e);
    }
    out.check_unit()?;
    out.check_associative()?;
    Ok(out)
}

/// The ring with constants |N_{i,j}^k|.
pub fn abs_ring(ring: &FusionRing) -> Result<FusionRing> {
    let mut out = ring.clone();
    for c in out.constants.iter_mut() {
        *c = c.abs();
    }
    out.check_unit()?;
    out.check_associative()?;
    Ok(out)
}

/// The quotient of a doubled ring by b_a = b'_a.
pub fn identify_primes(doubled: &FusionRing) -> Result<FusionRing> {
    let m2 = doubled.rank();
    if !m2.is_multiple_of(2) {
        return Err(FusionError::Invalid("not a doubled basis".into()));
    }
    let m = m2 / 2;
    let mut out = FusionRing { basis: doubled.basis[..m].to_vec(), unit: doubled.unit % m, constants: vec![0; m * m * m] };
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                out.set(i, j, k, doubled.get(i, j, k) + doubled.get(i, j, k + m));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
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

    /// (1/d) Σ_k ζ^{(a+b−c)k}, evaluated by brute force.
    fn geometric_oracle(d: u32, a: usize, b: usize, c: usize, shift: usize) -> i64 {
        let e = (a + b + d as usize - (c + shift) % d as usize) as i64;
        let s = (0..d).fold(CyclotomicNumber::zero(d), |acc, k| &acc + &CyclotomicNumber::root_of_unity(d, e * k as i64));
        let v = s.scale(&BigRational::new(1.into(), (d as i64).into()));
        v.is_integer().unwrap().try_into().unwrap()
    }

    fn group_ring(d: usize) -> FusionRing {
        let mut c = vec![0; d * d * d];
        for a in 0..d {
            for b in 0..d {
                c[(a * d + b) * d + (a + b) % d] = 1;
            }
        }
        FusionRing::from_dense(labels(d), 0, c).unwrap()
    }

    #[test]
    fn verlinde_of_dft_is_the_group_ring() {
        for d in 1..=7u32 {
            let ring = verlinde(&dft(d), 0).unwrap();
            let du = d as usize;
            for a in 0..du {
                for b in 0..du {
                    for c in 0..du {
                        assert_eq!(ring.get(a, b, c), geometric_oracle(d, a, b, c, 0));
                    }
                }
            }
            // shifted unit p: N_{a,b}^c = [a + b ≡ c + p]
            let p = du / 2;
            let shifted = verlinde(&dft(d), p).unwrap();
            for a in 0..du {
                for b in 0..du {
                    for c in 0..du {
                        assert_eq!(shifted.get(a, b, c), geometric_oracle(d, a, b, c, p));
                    }
                }
            }
        }
        let trivial = CycMatrix::identity(vec!["x".into()], 1);
        let ring = verlinde(&trivial, 0).unwrap();
        assert_eq!(ring.nonzero(), vec![(0, 0, 0, 1)]);
    }

    #[test]
    fn global_phase_invariance() {
        let s = dft(5);
        let base = verlinde(&s, 0).unwrap();
        for k in 0..4 {
            let w = CyclotomicNumber::root_of_unity(4, k).rebase(20).unwrap();
            assert_eq!(verlinde(&s.scalar_mul(&w).unwrap(), 0).unwrap(), base);
        }
    }

    #[test]
    fn non_integral_constants_are_reported() {
        let s = dft(3).map(|e| e.scale(&BigRational::new(1.into(), 2.into())));
        match verlinde(&s, 0) {
            Err(FusionError::NonIntegral { .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let z = CycMatrix::from_fn(labels(2), labels(2), 1, |i, j| CyclotomicNumber::from_integer(1, (i * j) as i64)).unwrap();
        assert!(matches!(verlinde(&z, 0), Err(FusionError::ZeroInUnitRow(_))));
    }

    #[test]
    fn axioms_of_the_cyclic_group() {
        for d in 2..=6u32 {
            let n = 24 * d;
            let s = dft(d).rebase(n).unwrap();
            let xi = |k: i64| CyclotomicNumber::root_of_unity(2 * d, k).rebase(n).unwrap();
            let z24 = CyclotomicNumber::root_of_unity(24, d as i64 - 1).rebase(n).unwrap();
            let t = (0..d as i64).map(|a| &z24 * &xi(a * a + d as i64 * a)).collect();
            let md = ModularDatum::new(s, t, 0).unwrap();
            let r = check_modular_axioms(&md);
            assert!(r.passes(), "d={d}: {:?}", r.failures());
            assert!(r.st_cubed.unwrap().is_one());
        }
        let s = dft(3);
        let mut bad = s.entries().to_vec();
        bad[4] = bad[4].scale_int(2);
        let bad = CycMatrix::new(s.rows().to_vec(), s.cols().to_vec(), 12, bad).unwrap();
        let md = ModularDatum::new(bad, vec![CyclotomicNumber::one(12); 3], 0).unwrap();
        let r = check_modular_axioms(&md);
        assert!(!r.unitary && !r.passes());
    }

    #[test]
    fn sign_rescaling() {
        let ring = verlinde(&dft(4), 0).unwrap();
        assert_eq!(rescale_signs(&ring, &[1; 4]).unwrap(), ring);
        assert_eq!(rescale_signs(&ring, &[-1; 4]).unwrap(), ring);
        let sigma = [1, -1, 1, -1];
        let once = rescale_signs(&ring, &sigma).unwrap();
        once.validate().unwrap();
        assert_eq!(rescale_signs(&once, &sigma).unwrap(), ring);
    }

    #[test]
    fn positivity_search() {
        let g = group_ring(5);
        assert_eq!(find_positive_signs(&g, 20).unwrap(), Some(vec![1; 5]));
        let flipped = rescale_signs(&g, &[1, -1, 1, 1, -1]).unwrap();
        let found = find_positive_signs(&flipped, 20).unwrap().unwrap();
        assert!(rescale_signs(&flipped, &found).unwrap().is_nonnegative());
        assert!(matches!(find_positive_signs(&group_ring(21), 20), Err(FusionError::TooLarge { .. })));
    }

    #[test]
    fn doubled_group_ring_is_z_d_times_z_2() {
        let d = 4;
        let g = group_ring(d);
        let dbl = double_ring(&g).unwrap();
        // b_{(a,s)} b_{(b,t)} = b_{(a+b, s+t)}
        for a in 0..2 * d {
            for b in 0..2 * d {
                let target = (a % d + b % d) % d + d * ((a / d + b / d) % 2);
                for c in 0..2 * d {
                    assert_eq!(dbl.get(a, b, c), i64::from(c == target));
                }
            }
        }
        assert_eq!(dbl.basis()[d + 1], "1'");
        // b_a · b'_{unit} = b'_a
        assert_eq!(dbl.get(2, d, d + 2), 1);
        assert_eq!(abs_ring(&g).unwrap(), g);
        assert_eq!(identify_primes(&dbl).unwrap(), abs_ring(&g).unwrap());
    }

    #[test]
    fn ring_json_round_trip() {
        let ring = rescale_signs(&group_ring(3), &[1, -1, 1]).unwrap();
        let j = ring.to_json();
        assert_eq!(j["constants"].as_array().unwrap().len(), 9);
        assert_eq!(FusionRing::from_json(&j).unwrap(), ring);
    }

    #[test]
    fn relabeling() {
        let g = group_ring(3);
        let r = g.relabel(&[1, 2, 0], vec!["x".into(), "y".into(), "z".into()]).unwrap();
        assert_eq!(r.unit(), 1);
        r.validate().unwrap();
        assert!(g.relabel(&[0, 0, 1], labels(3)).is_err());
    }
}
