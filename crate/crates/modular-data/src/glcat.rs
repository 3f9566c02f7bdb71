//! Decategorified invariants of the modularized quantum gl_n category at
//! ξ = exp(iπ/d) with pivotal structure a_{2p+d}: the normalized S-matrix on
//! the box, twists, quantum dimensions, the object 1̄, and the match with
//! (∧^nS, ∧^nT).

use num_bigint::BigInt;
use serde_json::json;

use crate::cycmat::{CycMatrix, MatrixError};
use crate::cyclic_tables::{self, special_index, TablesError};
use crate::cyclo::{working_modulus, CycloError, CyclotomicNumber};
use crate::fusion::{
    check_modular_axioms_with, rescale_signs, verlinde_scaled, AxiomReport, FusionError, FusionRing, ModularDatum,
};
use crate::glweights::{
    canonical_rep, canonical_rep_with_exponent, enumerate_box, iota_tilde, tensor_with_fundamental,
    twist_exponent, AlcoveWeight, Weight, WeightError,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GlcatError {
    #[error("need 1 <= n <= d, got n = {n}, d = {d}")]
    Range { n: usize, d: u32 },
    #[error("n = {n} and d = {d} have different parity; the category is not slightly degenerate")]
    NotSuper { n: usize, d: u32 },
    #[error("{what} fails at ({row}, {col})")]
    Mismatch { what: String, row: String, col: String },
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Tables(#[from] TablesError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Field(#[from] CycloError),
}

pub type Result<T> = std::result::Result<T, GlcatError>;

fn mismatch(what: &str, row: impl ToString, col: impl ToString) -> GlcatError {
    GlcatError::Mismatch { what: what.into(), row: row.to_string(), col: col.to_string() }
}

/// Whether formulas are evaluated at ξ or at ξ⁻¹.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }
}

/// ξ^e = ζ_{2d}^e.
fn xi(d: u32, e: i64) -> CyclotomicNumber {
    CyclotomicNumber::root_of_unity(2 * d, e)
}

/// Σ_w (-1)^{l(w)} ξ^{±2⟨w(λ+ρ), μ+ρ⟩}, as det(ξ^{±2 a_i b_j}) with
/// a = λ+ρ, b = μ+ρ. Lives in Q(ζ_{2d}).
pub fn weyl_sum(lambda: &Weight, mu: &Weight, d: u32, orientation: Orientation) -> CyclotomicNumber {
    let n = lambda.n();
    let rho = Weight::rho(n);
    let a = lambda.add(&rho);
    let b = mu.add(&rho);
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let o = orientation.sign();
    let m = CycMatrix::from_fn(labels.clone(), labels, 2 * d, |i, j| {
        xi(d, 2 * o * a.coords()[i] * b.coords()[j])
    })
    .expect("modulus 2d");
    m.determinant().expect("square")
}

/// The unnormalized S_{X(λ),X(μ)} of the category before modularization,
/// for any alcove weights: ξ^{⟨λ+μ,(2p+d)ϖ_n⟩} W(λ,μ)/W(0,0).
pub fn raw_s(lambda: &Weight, mu: &Weight, d: u32, p: i64, orientation: Orientation) -> CyclotomicNumber {
    let n = lambda.n();
    let o = orientation.sign();
    let k = 2 * p + d as i64;
    let w = weyl_sum(lambda, mu, d, orientation);
    let w0 = weyl_sum(&Weight::zero(n), &Weight::zero(n), d, orientation);
    let phase = xi(d, o * k * (lambda.size() + mu.size()));
    (&phase * &w).div(&w0).expect("Weyl denominator is nonzero")
}

/// θ_{X(λ)} = ξ^{±⟨λ, λ + 2ρ + (2p+d)ϖ_n⟩}.
pub fn twist(lambda: &Weight, d: u32, p: i64, orientation: Orientation) -> CyclotomicNumber {
    xi(d, orientation.sign() * twist_exponent(lambda, 2 * p + d as i64))
}

/// 𝕊, twists and flags of the modularized category on the box, with the
/// unspecified fourth root of unity set to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoricalDatum {
    pub d: u32,
    pub n: usize,
    pub p: i64,
    pub orientation: Orientation,
    pub weights: Vec<AlcoveWeight>,
    /// √d^n·𝕊, entries in Z[ζ_{2d}].
    pub s_hat: CycMatrix,
    /// 𝕊 at the working modulus.
    pub s: CycMatrix,
    pub twists: Vec<CyclotomicNumber>,
    /// n ≡ d mod 2: the symmetric center is sVect.
    pub is_super: bool,
    /// Super case that splits off sVect (both odd, or n = d).
    pub splits: bool,
}

/// 𝕊_{λμ} = ξ^{⟨λ+μ,(2p+d)ϖ_n⟩ + 2pn(p+n-1)} W(λ,μ)/√d^n on the box.
pub fn s_matrix(d: u32, n: usize, p: i64, orientation: Orientation) -> Result<CategoricalDatum> {
    if n == 0 || n > d as usize {
        return Err(GlcatError::Range { n, d });
    }
    let weights = enumerate_box(n, d)?;
    let labels: Vec<String> = weights.iter().map(AlcoveWeight::label).collect();
    let o = orientation.sign();
    let k = 2 * p + d as i64;
    let extra = 2 * p * n as i64 * (p + n as i64 - 1);
    let m = weights.len();
    let mut entries = vec![CyclotomicNumber::zero(2 * d); m * m];
    for i in 0..m {
        for j in i..m {
            let (l, u) = (weights[i].weight(), weights[j].weight());
            let phase = xi(d, o * (k * (l.size() + u.size()) + extra));
            let v = &phase * &weyl_sum(l, u, d, orientation);
            entries[i * m + j] = v.clone();
            entries[j * m + i] = v;
        }
    }
    let s_hat = CycMatrix::new(labels.clone(), labels, 2 * d, entries)?;
    let big = working_modulus(d);
    let root = CyclotomicNumber::sqrt_integer((d as u64).pow(n as u32), big)?;
    let s = s_hat.rebase(big)?.scalar_mul(&root.inv()?)?;
    let twists = weights
        .iter()
        .map(|w| twist(w.weight(), d, p, orientation).rebase(big))
        .collect::<std::result::Result<_, _>>()?;
    let is_super = (n as u32 + d).is_multiple_of(2);
    let splits = is_super && (n as u32 == d || (n % 2 == 1 && d % 2 == 1));
    Ok(CategoricalDatum { d, n, p, orientation, weights, s_hat, s, twists, is_super, splits })
}

impl CategoricalDatum {
    pub fn labels(&self) -> &[String] {
        self.s.rows()
    }

    pub fn index_of(&self, w: &AlcoveWeight) -> Option<usize> {
        self.weights.iter().position(|x| x == w)
    }

    /// Position of the unit X(0).
    pub fn unit(&self) -> usize {
        0
    }

    /// The datum (𝕊, θ) with unit X(0) and its integral form.
    pub fn modular_datum(&self) -> Result<ModularDatum> {
        let md = ModularDatum::new(self.s.clone(), self.twists.clone(), self.unit())?;
        Ok(md.with_integral_form(self.s_hat.clone(), BigInt::from(self.d).pow(self.n as u32))?)
    }

    /// Modular axioms up to global scalars (ω is not pinned).
    pub fn axioms(&self) -> Result<AxiomReport> {
        Ok(check_modular_axioms_with(&self.modular_datum()?, false))
    }

    /// Verlinde ring of 𝕊 with unit X(0).
    pub fn fusion_ring(&self) -> Result<FusionRing> {
        Ok(verlinde_scaled(&self.s_hat, &BigInt::from(self.d).pow(self.n as u32), self.unit())?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "d": self.d,
            "n": self.n,
            "p": self.p,
            "orientation": self.orientation.sign(),
            "S": self.s.to_json(),
            "twists": self.twists.iter().map(CyclotomicNumber::to_json).collect::<Vec<_>>(),
            "super": self.is_super,
            "splits": self.splits,
        })
    }
}

/// dim(X(λ)) = 𝕊_{λ,0}/𝕊_{0,0} for a box weight.
pub fn qdim(lambda: &AlcoveWeight, datum: &CategoricalDatum) -> Result<CyclotomicNumber> {
    let i = datum.index_of(lambda).ok_or_else(|| mismatch("box membership", lambda, "qdim"))?;
    Ok(datum.s.get(i, 0).div(datum.s.get(0, 0))?)
}

/// Σ |dim X(λ)|² over the box against (-1)^{n(n-1)/2} d^n / (∏_{i<n}(ξ^i - ξ^{-i})^{n-i})².
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionReport {
    pub summed: CyclotomicNumber,
    pub closed_form: CyclotomicNumber,
}

impl DimensionReport {
    pub fn passes(&self) -> bool {
        self.summed == self.closed_form
    }
}

pub fn categorical_dimension_check(d: u32, n: usize) -> Result<DimensionReport> {
    let datum = s_matrix(d, n, 0, Orientation::Positive)?;
    let big = datum.s.modulus();
    let mut summed = CyclotomicNumber::zero(big);
    for w in &datum.weights {
        let q = qdim(w, &datum)?;
        summed = &summed + &(&q * &q.conjugate());
    }
    let mut denom = CyclotomicNumber::one(2 * d);
    for i in 1..n {
        let f = &xi(d, i as i64) - &xi(d, -(i as i64));
        denom = &denom * &f.pow((n - i) as i64)?;
    }
    let denom = (&denom * &denom).rebase(big)?;
    let sign = if (n * (n - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
    let num = CyclotomicNumber::from_bigint(big, &(BigInt::from(d).pow(n as u32) * sign));
    let closed_form = num.div(&denom)?;
    Ok(DimensionReport { summed, closed_form })
}

/// The box weight of 1̄ = det^{-(2p+n-1)}, with the observed sign of its
/// quantum dimension relative to ξ^{-2⟨(2p+n-1)ϖ_n, ρ+pϖ_n⟩}.
#[derive(Debug, Clone, PartialEq)]
pub struct OneBar {
    pub weight: AlcoveWeight,
    pub dim: CyclotomicNumber,
    /// +1 or -1; the sign is not predicted in closed form.
    pub dim_sign: i8,
}

pub fn one_bar(d: u32, n: usize, p: i64) -> Result<OneBar> {
    if n == 0 || n > d as usize {
        return Err(GlcatError::Range { n, d });
    }
    let o = Orientation::Positive;
    let m = 2 * p + n as i64 - 1;
    let raw = AlcoveWeight::new(Weight::varpi(n, n).scale(-m), d)?;
    let weight = canonical_rep(&raw);
    let zero = Weight::zero(n);
    let dim = raw_s(weight.weight(), &zero, d, p, o);
    // S_{1̄,λ} = dim(1̄) dim(λ*) for every box λ
    for l in enumerate_box(n, d)? {
        let dual = l.weight().w0().scale(-1);
        let lhs = raw_s(weight.weight(), l.weight(), d, p, o);
        let rhs = &dim * &raw_s(&dual, &zero, d, p, o);
        if lhs != rhs {
            return Err(mismatch("1̄ row identity", &weight, &l));
        }
    }
    let expected = xi(d, -2 * Weight::varpi(n, n).scale(m).dot(&Weight::rho(n).add(&Weight::varpi(n, n).scale(p))));
    let dim_sign = if dim == expected {
        1
    } else if dim == expected.neg() {
        -1
    } else {
        return Err(mismatch("1̄ dimension up to sign", &weight, dim));
    };
    Ok(OneBar { weight, dim, dim_sign })
}

/// ω, σ and ζ_* with 𝕊 ∘ ι̃ = ω σσᵀ ∧^nS and θ ∘ ι̃ = ζ_* ∧^nT.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport {
    pub omega: CyclotomicNumber,
    pub sigma: Vec<i8>,
    pub zeta_star: CyclotomicNumber,
    /// unit_map[a] = box index of ι̃(a).
    pub unit_map: Vec<usize>,
}

impl MatchReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "omega": self.omega.to_json(),
            "omega_display": self.omega.to_string(),
            "sigma": self.sigma,
            "zeta_star": self.zeta_star.to_json(),
            "unit_map": self.unit_map,
        })
    }
}

fn as_sign(x: &CyclotomicNumber) -> Option<i8> {
    if x.is_one() {
        Some(1)
    } else if x.neg().is_one() {
        Some(-1)
    } else {
        None
    }
}

/// Recovers ω and σ from the unit row and verifies the full matrix identity
/// and the twist identity θ_{ι̃(a)} = ζ_*·T_a exactly.
pub fn match_modular_data(
    cat_s: &CycMatrix,
    cat_twists: &[CyclotomicNumber],
    target_s: &CycMatrix,
    target_t: &[CyclotomicNumber],
    unit: usize,
    unit_map: &[usize],
    zeta_star: &CyclotomicNumber,
) -> Result<MatchReport> {
    let m = target_s.nrows();
    if unit_map.len() != m || cat_s.nrows() != m || target_t.len() != m || cat_twists.len() != m {
        return Err(mismatch("index bijection", m, cat_s.nrows()));
    }
    let big = crate::cyclo::lcm_u32(cat_s.modulus(), target_s.modulus());
    let s = cat_s.rebase(big)?;
    let target = target_s.rebase(big)?;
    let rows = target.rows();
    let u = unit_map[unit];
    let omega = s.get(u, u).div(target.get(unit, unit))?;
    if !omega.pow(4)?.is_one() {
        return Err(mismatch("ω⁴ = 1", &rows[unit], &rows[unit]));
    }
    let mut sigma = Vec::with_capacity(m);
    for a in 0..m {
        let ratio = s.get(u, unit_map[a]).div(&(&omega * target.get(unit, a)))?;
        sigma.push(as_sign(&ratio).ok_or_else(|| mismatch("σ ∈ {±1}", &rows[unit], &rows[a]))?);
    }
    let neg_omega = omega.neg();
    for a in 0..m {
        for b in a..m {
            let w = if sigma[a] == sigma[b] { &omega } else { &neg_omega };
            if *s.get(unit_map[a], unit_map[b]) != w * target.get(a, b) {
                return Err(mismatch("𝕊 = ω σσᵀ S", &rows[a], &rows[b]));
            }
        }
    }
    let zeta_star = zeta_star.rebase(big)?;
    for a in 0..m {
        let lhs = cat_twists[unit_map[a]].rebase(big)?;
        if lhs != &zeta_star * &target_t[a].rebase(big)? {
            return Err(mismatch("θ = ζ_* T", &rows[a], &rows[a]));
        }
    }
    Ok(MatchReport { omega, sigma, zeta_star, unit_map: unit_map.to_vec() })
}

/// ζ_* = ζ_24^{n(1-d)} ξ^{-⟨ρ,ρ⟩ - pn(p+d) - (2p+d)n(n-1)/2}.
pub fn zeta_star(d: u32, n: usize, p: i64) -> CyclotomicNumber {
    let big = working_modulus(d);
    let (di, ni) = (d as i64, n as i64);
    let rho = Weight::rho(n);
    let e = -rho.dot(&rho) - p * ni * (p + di) - (2 * p + di) * ni * (ni - 1) / 2;
    let a = CyclotomicNumber::root_of_unity(24, ni * (1 - di)).rebase(big).expect("24 | N");
    &a * &xi(d, e).rebase(big).expect("2d | N")
}

/// Box index of ι̃_p(a) for every a ∈ I_{n,d}.
pub fn iota_tilde_map(datum: &CategoricalDatum) -> Result<Vec<usize>> {
    cyclic_tables::index_set(datum.n, datum.d)?
        .iter()
        .map(|a| {
            let w = iota_tilde(datum.p, a);
            datum.index_of(&w).ok_or_else(|| mismatch("ι̃ lands in the box", a, &w))
        })
        .collect()
}

/// The full comparison of the categorical datum for (d, n, p) with ∧^nS, ∧^nT.
pub fn categorify(d: u32, n: usize, p: i64) -> Result<(CategoricalDatum, MatchReport)> {
    let datum = s_matrix(d, n, p, Orientation::Positive)?;
    let target = cyclic_tables::ext_s(n, d)?;
    let t = cyclic_tables::ext_t_diag(n, d)?;
    let map = iota_tilde_map(&datum)?;
    let unit = special_index(p, n, d)?;
    let report = match_modular_data(&datum.s, &datum.twists, &target, &t, unit, &map, &zeta_star(d, n, p))?;
    if report.sigma[unit] != 1 {
        return Err(mismatch("σ at the unit", unit, unit));
    }
    Ok((datum, report))
}

/// The Verlinde ring of 𝕊, pulled back along ι̃, equals the σ-rescaled ring
/// of ∧^nS with unit i^(p).
pub fn check_fusion_consistency(datum: &CategoricalDatum, report: &MatchReport) -> Result<()> {
    let cat = datum.fusion_ring()?;
    let ext = cyclic_tables::structure_constants(datum.n, datum.d, datum.p)?;
    let rescaled = rescale_signs(&ext, &report.sigma)?;
    let map = &report.unit_map;
    let m = map.len();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                if rescaled.get(a, b, c) != cat.get(map[a], map[b], map[c]) {
                    return Err(mismatch("Verlinde of 𝕊 vs rescaled ring", format!("{},{}", ext.basis()[a], ext.basis()[b]), &ext.basis()[c]));
                }
            }
        }
    }
    Ok(())
}

/// Whether a super category splits off sVect: n and d both odd, or n = d.
pub fn splits_off_svect(n: usize, d: u32) -> Result<bool> {
    if !(n as u32 + d).is_multiple_of(2) {
        return Err(GlcatError::NotSuper { n, d });
    }
    Ok(n as u32 == d || (n % 2 == 1 && d % 2 == 1))
}

/// Signs making the ring of ∧^nS with unit i^(p) non-negative, read off the
/// categorical match. Ordinary case: σ. Split super case: σ twisted by the
/// parity of |ι̃_p(a)|, which selects the even-degree half of the super
/// category. Non-split super case: none exist.
pub fn positive_witness(datum: &CategoricalDatum, report: &MatchReport) -> Option<Vec<i8>> {
    if !datum.is_super {
        return Some(report.sigma.clone());
    }
    if !datum.splits {
        return None;
    }
    Some(
        report
            .unit_map
            .iter()
            .zip(&report.sigma)
            .map(|(&i, &s)| if datum.weights[i].weight().size() % 2 == 0 { s } else { -s })
            .collect(),
    )
}

/// Compares the Verlinde row of [X(ϖ_i)]·[X(λ)] with the tensor rule. In
/// the super case each summand X(μ) is read as (-1)^j X(canon μ), where
/// μ ∼ canon μ with exponent j, and likewise for X(ϖ_i).
pub fn fusion_vs_fundamental(datum: &CategoricalDatum, ring: &FusionRing, i: usize, lambda: &AlcoveWeight) -> Result<()> {
    let n = datum.n;
    let d = datum.d;
    let fund = AlcoveWeight::new(Weight::varpi(n, i), d)?;
    let (fc, fj) = canonical_rep_with_exponent(&fund);
    let li = datum.index_of(lambda).ok_or_else(|| mismatch("box membership", lambda, ""))?;
    let fi = datum.index_of(&fc).expect("canonical reps lie in the box");
    let m = datum.weights.len();
    let sign = |j: i64| if datum.is_super && j.rem_euclid(2) == 1 { -1 } else { 1 };
    let mut expected = vec![0i64; m];
    for mu in tensor_with_fundamental(i, lambda)? {
        let (c, j) = canonical_rep_with_exponent(&mu);
        expected[datum.index_of(&c).expect("box")] += sign(j);
    }
    for (g, e) in expected.iter_mut().enumerate() {
        *e *= sign(fj);
        if ring.get(fi, li, g) != *e {
            return Err(mismatch("X(ϖ_i) ⊗ X(λ)", format!("ϖ_{i} ⊗ {lambda}"), &datum.weights[g]));
        }
    }
    Ok(())
}

/// The ring of the category before the ε-quotient, on box × {1, ε}: the
/// product of (λ,e) and (μ,f) lands in (ν,g) with g fixed by the Z/2d
/// grading deg(λ,e) = |λ| + ed. Constants are |N'| where N' is the
/// Verlinde constant of 𝕊; the sign of N' must be (-1)^{g-e-f} in the super
/// case and + otherwise. Index of (λ,e) is e·|box| + idx(λ).
pub fn pre_quotient_ring(datum: &CategoricalDatum, quotient: &FusionRing) -> Result<FusionRing> {
    let m = datum.weights.len();
    let d = datum.d as i64;
    let deg: Vec<i64> = datum.weights.iter().map(|w| w.weight().size()).collect();
    let mut constants = vec![0i64; 8 * m * m * m];
    let size = 2 * m;
    for (a, b, c, v) in quotient.nonzero() {
        let diff = deg[a] + deg[b] - deg[c];
        if diff.rem_euclid(d) != 0 {
            return Err(mismatch("grading of Verlinde constants", format!("{},{}", datum.labels()[a], datum.labels()[b]), &datum.labels()[c]));
        }
        let t = (diff / d).rem_euclid(2) as usize;
        let expected_sign = if datum.is_super && t == 1 { -1 } else { 1 };
        if v.signum() != expected_sign {
            return Err(mismatch("sign of Verlinde constants vs grading", format!("{},{}", datum.labels()[a], datum.labels()[b]), &datum.labels()[c]));
        }
        for e in 0..2 {
            for f in 0..2 {
                let g = (e + f + t) % 2;
                constants[((e * m + a) * size + f * m + b) * size + g * m + c] = v.abs();
            }
        }
    }
    let mut basis: Vec<String> = datum.labels().to_vec();
    basis.extend(datum.labels().iter().map(|l| format!("{l}*eps")));
    let ring = FusionRing::from_dense(basis, 0, constants)?;
    ring.validate()?;
    Ok(ring)
}

/// N^Z · N^{Z⊗ε} = 0 on the pre-quotient ring.
pub fn vanishing_pattern_holds(pre: &FusionRing) -> bool {
    let size = pre.rank();
    let m = size / 2;
    let flip = |z: usize| if z < m { z + m } else { z - m };
    (0..size).all(|x| (0..size).all(|y| (0..m).all(|z| pre.get(x, y, z) * pre.get(x, y, flip(z)) == 0)))
}

/// The isomorphism A_{n,p} ≅ A_{n,0}: a ↦ ι̃_0⁻¹(ι̃_p(a)) with sign
/// τ_a = σ^p_a σ^0_{φ(a)}; verified on every constant.
pub fn unit_change_isomorphism(n: usize, d: u32, p: i64) -> Result<(Vec<usize>, Vec<i8>)> {
    let (dp, rp) = categorify(d, n, p)?;
    let (_, r0) = categorify(d, n, 0)?;
    let m = rp.unit_map.len();
    let mut inv0 = vec![0usize; m];
    for (a, &i) in r0.unit_map.iter().enumerate() {
        inv0[i] = a;
    }
    let phi: Vec<usize> = rp.unit_map.iter().map(|&i| inv0[i]).collect();
    let tau: Vec<i8> = (0..m).map(|a| rp.sigma[a] * r0.sigma[phi[a]]).collect();
    let ap = cyclic_tables::structure_constants(n, d, p)?;
    let a0 = cyclic_tables::structure_constants(n, d, 0)?;
    let image = rescale_signs(&ap, &tau)?;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                if image.get(a, b, c) != a0.get(phi[a], phi[b], phi[c]) {
                    return Err(mismatch("unit change isomorphism", format!("{},{}", a, b), c));
                }
            }
        }
    }
    debug_assert_eq!(dp.weights.len(), m);
    Ok((phi, tau))
}

#[cfg(test)]
mod tests {
    use itertools::Itertools;

    use super::*;
    use crate::fusion::find_positive_signs;

    fn weyl_sum_by_permutations(l: &Weight, m: &Weight, d: u32, o: Orientation) -> CyclotomicNumber {
        let n = l.n();
        let rho = Weight::rho(n);
        let a = l.add(&rho);
        let b = m.add(&rho);
        let mut total = CyclotomicNumber::zero(2 * d);
        for perm in (0..n).permutations(n) {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
            let e: i64 = (0..n).map(|i| a.coords()[perm[i]] * b.coords()[i]).sum();
            let term = xi(d, 2 * o.sign() * e);
            total = if inversions % 2 == 0 { &total + &term } else { &total - &term };
        }
        total
    }

    #[test]
    fn weyl_sum_matches_permutation_sum() {
        for d in 2..=6u32 {
            for n in 1..=d.min(4) as usize {
                let bx = enumerate_box(n, d).unwrap();
                for l in bx.iter().take(6) {
                    for m in bx.iter().rev().take(4) {
                        for o in [Orientation::Positive, Orientation::Negative] {
                            assert_eq!(weyl_sum(l.weight(), m.weight(), d, o), weyl_sum_by_permutations(l.weight(), m.weight(), d, o));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn weyl_denominator() {
        for d in 2..=7u32 {
            for n in 1..=d as usize {
                let z = Weight::zero(n);
                let mut rhs = xi(d, (n as i64 - 1) * Weight::rho(n).size());
                for i in 1..n {
                    let f = &xi(d, i as i64) - &xi(d, -(i as i64));
                    rhs = &rhs * &f.pow((n - i) as i64).unwrap();
                }
                assert_eq!(weyl_sum(&z, &z, d, Orientation::Positive), rhs, "d={d} n={n}");
            }
        }
        let z = Weight::zero(2);
        assert_eq!(weyl_sum(&z, &z, 3, Orientation::Positive), &xi(3, 1) * &(&xi(3, 1) - &xi(3, -1)));
    }

    #[test]
    fn s_matrix_basics() {
        for d in 1..=6u32 {
            for n in 1..=d as usize {
                for p in 0..3 {
                    let dt = s_matrix(d, n, p, Orientation::Positive).unwrap();
                    assert!(dt.s.is_symmetric());
                    assert!(dt.s.is_unitary(), "d={d} n={n} p={p}");
                    assert!(dt.twists[0].is_one());
                    let rep = dt.axioms().unwrap();
                    assert!(rep.passes_projectively(), "d={d} n={n} p={p}: {:?}", rep.failures());
                }
            }
        }
        let one = s_matrix(4, 4, 1, Orientation::Positive).unwrap();
        let e = one.s.get(0, 0);
        assert!((e * &e.conjugate()).is_one());
    }

    #[test]
    fn dimension_formula() {
        for d in 1..=6u32 {
            for n in 1..=d as usize {
                let r = categorical_dimension_check(d, n).unwrap();
                assert!(r.passes(), "d={d} n={n}: {} vs {}", r.summed, r.closed_form);
            }
        }
        let r = categorical_dimension_check(4, 2).unwrap();
        assert_eq!(r.summed.is_integer(), Some(8.into()));
    }

    #[test]
    fn one_bar_examples() {
        // (-1,-1) ∼ (3,3) = (-1,-1) + 4ϖ_2, whose box representative is (2,0)
        let ob = one_bar(4, 2, 0).unwrap();
        assert_eq!(ob.weight.weight().coords(), &[2, 0]);
        let up = AlcoveWeight::new(Weight::new(vec![3, 3]), 4).unwrap();
        assert_eq!(canonical_rep(&up), ob.weight);
        assert_eq!(one_bar(5, 1, 0).unwrap().weight.weight().coords(), &[0]);
        for d in 1..=6u32 {
            for n in 1..=d as usize {
                for p in 0..3 {
                    let ob = one_bar(d, n, p).unwrap();
                    assert!(ob.weight.in_box());
                }
            }
        }
    }

    #[test]
    fn categorification_small() {
        for d in 1..=5u32 {
            for n in 1..=d as usize {
                for p in 0..3 {
                    let (dt, rep) = categorify(d, n, p).unwrap();
                    assert!(rep.omega.pow(4).unwrap().is_one());
                    check_fusion_consistency(&dt, &rep).unwrap();
                }
            }
        }
    }

    #[test]
    fn fundamental_tensor_rule_matches_verlinde() {
        for d in 2..=6u32 {
            for n in 1..d as usize {
                let dt = s_matrix(d, n, 0, Orientation::Positive).unwrap();
                let ring = dt.fusion_ring().unwrap();
                for l in &dt.weights {
                    for i in 1..=n {
                        fusion_vs_fundamental(&dt, &ring, i, l).unwrap_or_else(|e| panic!("d={d} n={n}: {e}"));
                    }
                }
            }
        }
        let dt = s_matrix(4, 2, 0, Orientation::Positive).unwrap();
        assert!(dt.fusion_ring().unwrap().has_negative());
    }

    #[test]
    fn positivity_follows_the_parity_dichotomy() {
        for d in 3..=6u32 {
            for n in 2..d as usize {
                let (dt, rep) = categorify(d, n, 0).unwrap();
                let ring = cyclic_tables::structure_constants(n, d, 0).unwrap();
                let searched = find_positive_signs(&ring, 20).unwrap();
                let both_even = n % 2 == 0 && d % 2 == 0;
                assert_eq!(searched.is_some(), !both_even, "d={d} n={n}");
                match positive_witness(&dt, &rep) {
                    Some(w) => assert!(rescale_signs(&ring, &w).unwrap().is_nonnegative()),
                    None => assert!(both_even),
                }
            }
        }
        assert!(splits_off_svect(3, 5).unwrap());
        assert!(!splits_off_svect(2, 4).unwrap());
        assert!(splits_off_svect(4, 4).unwrap());
        assert!(splits_off_svect(2, 5).is_err());
    }

    #[test]
    fn pre_quotient_rings() {
        for d in 3..=6u32 {
            for n in 2..d as usize {
                let dt = s_matrix(d, n, 0, Orientation::Positive).unwrap();
                let q = dt.fusion_ring().unwrap();
                let pre = pre_quotient_ring(&dt, &q).unwrap_or_else(|e| panic!("d={d} n={n}: {e}"));
                assert!(pre.is_nonnegative());
                assert!(vanishing_pattern_holds(&pre));
            }
        }
    }

    #[test]
    fn unit_change() {
        for d in 2..=5u32 {
            for n in 1..=d as usize {
                for p in 1..d as i64 {
                    let (phi, _) = unit_change_isomorphism(n, d, p).unwrap();
                    assert_eq!(phi[special_index(p, n, d).unwrap()], special_index(0, n, d).unwrap());
                }
            }
        }
    }
}
