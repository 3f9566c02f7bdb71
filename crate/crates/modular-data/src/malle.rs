//! Families of unipotent characters of G(d,1,n): symbols Ξ, the Fourier
//! matrix 𝒮 and Frobenius eigenvalues, the special symbol f_0, the match with
//! a Deligne product of gl_{n_i} categories at ξ⁻¹, and Ennola d-ality.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cycmat::{CycMatrix, MatrixError};
use crate::cyclic_tables::{self, index_set, StrictTuple, TablesError};
use crate::cyclo::{lcm_u32, working_modulus, CycloError, CyclotomicNumber};
use crate::fusion::{check_modular_axioms_with, verlinde_scaled, AxiomReport, FusionError, FusionRing, ModularDatum};
use crate::glcat::{self, match_modular_data, GlcatError, Orientation};
use crate::glweights::{
    canonical_rep, enumerate_box, is_invertible_class, iota, iota_tilde, AlcoveWeight, Weight, WeightError,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MalleError {
    #[error("invalid family spec: {0}")]
    Spec(String),
    #[error("internal check failed: {0}")]
    Check(String),
    #[error(transparent)]
    Tables(#[from] TablesError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Glcat(#[from] GlcatError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Field(#[from] CycloError),
}

pub type Result<T> = std::result::Result<T, MalleError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub w: u64,
    pub n: usize,
}

/// The data (d, m, (w_i, n_i)) of a family, with an optional total order
/// on Y given as the block index of each position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub d: u32,
    pub m: usize,
    pub blocks: Vec<Block>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrangement: Option<Vec<usize>>,
}

impl FamilySpec {
    pub fn new(d: u32, m: usize, blocks: &[(u64, usize)]) -> Result<Self> {
        let spec = FamilySpec {
            d,
            m,
            blocks: blocks.iter().map(|&(w, n)| Block { w, n }).collect(),
            arrangement: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_arrangement(mut self, arrangement: Vec<usize>) -> Result<Self> {
        self.arrangement = Some(arrangement);
        self.validate()?;
        Ok(self)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let spec: FamilySpec = serde_json::from_str(s).map_err(|e| MalleError::Spec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(MalleError::Spec(msg));
        if self.d == 0 {
            return bad("d must be positive".into());
        }
        if self.blocks.is_empty() {
            return bad("at least one block is required".into());
        }
        if !self.blocks.windows(2).all(|b| b[0].w < b[1].w) {
            return bad("block weights w must be strictly increasing".into());
        }
        if let Some(b) = self.blocks.iter().find(|b| b.n == 0 || b.n > self.d as usize) {
            return bad(format!("block size {} outside 1..={}", b.n, self.d));
        }
        let total: usize = self.blocks.iter().map(|b| b.n).sum();
        if total != self.size_of_y() {
            return bad(format!("block sizes sum to {total}, expected md+1 = {}", self.size_of_y()));
        }
        if let Some(arr) = &self.arrangement {
            if arr.len() != total {
                return bad(format!("arrangement has {} positions, expected {total}", arr.len()));
            }
            for (i, b) in self.blocks.iter().enumerate() {
                if arr.iter().filter(|&&x| x == i).count() != b.n {
                    return bad(format!("arrangement assigns the wrong number of positions to block {i}"));
                }
            }
        }
        Ok(())
    }

    /// |Y| = md + 1.
    pub fn size_of_y(&self) -> usize {
        self.m * self.d as usize + 1
    }

    pub fn ns(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.n).collect()
    }

    /// Block index of each position of Y; blocks contiguous by default.
    pub fn arrangement(&self) -> Vec<usize> {
        match &self.arrangement {
            Some(a) => a.clone(),
            None => self.blocks.iter().enumerate().flat_map(|(i, b)| std::iter::repeat_n(i, b.n)).collect(),
        }
    }

    /// Σ w_k n_k.
    pub fn weighted_size(&self) -> i64 {
        self.blocks.iter().map(|b| b.w as i64 * b.n as i64).sum()
    }

    fn target_residue(&self) -> i64 {
        let d = self.d as i64;
        (self.m as i64 * d * (d - 1) / 2).rem_euclid(d)
    }
}

/// f ∈ Ξ given by its rows f_i ∈ I_{n_i,d}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub rows: Vec<StrictTuple>,
}

impl Symbol {
    pub fn total(&self) -> i64 {
        self.rows.iter().map(StrictTuple::sum).sum()
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rows.iter().map(|r| r.label()).collect();
        f.write_str(&parts.join(";"))
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

/// Ξ in lexicographic order of rows; its size is checked against
/// (1/d) ∏ C(d, n_i).
pub fn enumerate_symbols(spec: &FamilySpec) -> Result<Vec<Symbol>> {
    spec.validate()?;
    let d = spec.d;
    let sets: Vec<Vec<StrictTuple>> = spec.ns().iter().map(|&n| index_set(n, d)).collect::<std::result::Result<_, _>>()?;
    let target = spec.target_residue();
    let mut out = Vec::new();
    let mut idx = vec![0usize; sets.len()];
    'outer: loop {
        let rows: Vec<StrictTuple> = idx.iter().zip(&sets).map(|(&i, s)| s[i].clone()).collect();
        let f = Symbol { rows };
        if f.total().rem_euclid(d as i64) == target {
            out.push(f);
        }
        for pos in (0..idx.len()).rev() {
            idx[pos] += 1;
            if idx[pos] < sets[pos].len() {
                continue 'outer;
            }
            idx[pos] = 0;
        }
        break;
    }
    let expected: BigInt = spec.ns().iter().map(|&n| binomial(d as u64, n as u64)).product::<BigInt>() / d;
    if BigInt::from(out.len()) != expected {
        return Err(MalleError::Check(format!("|Ξ| = {} but the closed form gives {expected}", out.len())));
    }
    Ok(out)
}

/// ε(f) = (-1)^{#{(y, y') : y < y', f(y) < f(y')}} for the order on Y fixed by the arrangement.
pub fn epsilon_sign(spec: &FamilySpec, f: &Symbol) -> i8 {
    let mut cursors = vec![0usize; f.rows.len()];
    let values: Vec<u32> = spec
        .arrangement()
        .into_iter()
        .map(|b| {
            let v = f.rows[b].entries()[cursors[b]];
            cursors[b] += 1;
            v
        })
        .collect();
    let mut count = 0usize;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] < values[j] {
                count += 1;
            }
        }
    }
    if count.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Lookup of ∧^{n}S entries by tuple, at modulus d (unnormalized).
struct ExtTable {
    s_hat: CycMatrix,
    index: HashMap<StrictTuple, usize>,
}

impl ExtTable {
    fn new(n: usize, d: u32) -> Result<Self> {
        let index = index_set(n, d)?.into_iter().enumerate().map(|(i, a)| (a, i)).collect();
        Ok(ExtTable { s_hat: cyclic_tables::ext_s_hat(n, d)?, index })
    }

    fn get(&self, a: &StrictTuple, b: &StrictTuple) -> &CyclotomicNumber {
        self.s_hat.get(self.index[a], self.index[b])
    }
}

/// d^{md/2}·𝒮, with entries in Z[ζ_{lcm(4,d)}], and the norm d^{md}.
pub fn fourier_matrix_hat(spec: &FamilySpec) -> Result<(CycMatrix, BigInt)> {
    let xi_set = enumerate_symbols(spec)?;
    let d = spec.d;
    let modulus = lcm_u32(4, d);
    let tables: Vec<ExtTable> = spec.ns().iter().map(|&n| ExtTable::new(n, d)).collect::<Result<_>>()?;
    let m = spec.m as i64;
    let di = d as i64;
    let sign = if (m * (di - 1)) % 2 == 0 { 1 } else { -1 };
    let c = CyclotomicNumber::root_of_unity(4, -m * (di - 1) * (di - 2) / 2).rebase(modulus)?.scale_int(sign);
    let eps: Vec<i8> = xi_set.iter().map(|f| epsilon_sign(spec, f)).collect();
    let labels: Vec<String> = xi_set.iter().map(Symbol::label).collect();
    let k = xi_set.len();
    let mut entries = vec![CyclotomicNumber::zero(modulus); k * k];
    for a in 0..k {
        for b in a..k {
            let mut v = c.clone();
            for (i, t) in tables.iter().enumerate() {
                let e = t.get(&xi_set[a].rows[i], &xi_set[b].rows[i]).conjugate().rebase(modulus)?;
                v = &v * &e;
            }
            if eps[a] * eps[b] < 0 {
                v = v.neg();
            }
            entries[a * k + b] = v.clone();
            entries[b * k + a] = v;
        }
    }
    let norm = BigInt::from(d).pow((spec.m * d as usize) as u32);
    Ok((CycMatrix::new(labels.clone(), labels, modulus, entries)?, norm))
}

fn normalize(hat: &CycMatrix, norm: &BigInt, modulus: u32) -> Result<CycMatrix> {
    let small: u64 = norm.try_into().map_err(|_| MalleError::Check("normalization exceeds 64 bits".into()))?;
    let root = CyclotomicNumber::sqrt_integer(small, modulus)?;
    Ok(hat.rebase(modulus)?.scalar_mul(&root.inv()?)?)
}

/// 𝒮_{f,g} = (-1)^{m(d-1)} i^{-m·C(d-1,2)} √d ε(f)ε(g) ∏ conj((∧^{n_i}S)_{f_i,g_i}).
pub fn fourier_matrix(spec: &FamilySpec) -> Result<CycMatrix> {
    let (hat, norm) = fourier_matrix_hat(spec)?;
    normalize(&hat, &norm, working_modulus(spec.d))
}

/// Fr(f) = ζ_12^{m(1-d²)} ∏_y ξ^{-(f(y)² + d f(y))}.
pub fn frobenius(spec: &FamilySpec, f: &Symbol) -> CyclotomicNumber {
    let big = working_modulus(spec.d);
    let d = spec.d as i64;
    let m = spec.m as i64;
    let q: i64 = f.rows.iter().flat_map(|r| r.entries()).map(|&y| (y as i64) * (y as i64) + d * y as i64).sum();
    let e = m * (1 - d * d) * (big / 12) as i64 - q * (big as i64 / (2 * d));
    CyclotomicNumber::root_of_unity(big, e)
}

pub fn frobenius_diag(spec: &FamilySpec) -> Result<Vec<CyclotomicNumber>> {
    Ok(enumerate_symbols(spec)?.iter().map(|f| frobenius(spec, f)).collect())
}

pub fn frobenius_matrix(spec: &FamilySpec) -> Result<CycMatrix> {
    let labels = enumerate_symbols(spec)?.iter().map(Symbol::label).collect();
    Ok(CycMatrix::diagonal(labels, working_modulus(spec.d), frobenius_diag(spec)?)?)
}

/// Lexicographically smallest p ∈ [0,d)^r with Σ(p_i n_i + C(n_i,2)) ≡ m·C(d,2)
/// mod d, and the symbol f_0 with rows i^(p_i).
pub fn choose_special(spec: &FamilySpec) -> Result<(Vec<i64>, Symbol)> {
    spec.validate()?;
    let d = spec.d as i64;
    let ns: Vec<i64> = spec.ns().iter().map(|&n| n as i64).collect();
    let base: i64 = ns.iter().map(|n| n * (n - 1) / 2).sum();
    let mut residue = (spec.target_residue() - base).rem_euclid(d);
    // gcd of d with the remaining block sizes, for each suffix
    let mut tail_gcd = vec![d; ns.len() + 1];
    for i in (0..ns.len()).rev() {
        tail_gcd[i] = tail_gcd[i + 1].gcd(&ns[i]);
    }
    let mut ps = Vec::with_capacity(ns.len());
    for i in 0..ns.len() {
        let p = (0..d)
            .find(|&p| (residue - p * ns[i]).rem_euclid(d) % tail_gcd[i + 1] == 0)
            .ok_or_else(|| MalleError::Check("special symbol congruence has no solution".into()))?;
        residue = (residue - p * ns[i]).rem_euclid(d);
        ps.push(p);
    }
    debug_assert_eq!(residue, 0);
    let rows = ps
        .iter()
        .zip(spec.ns())
        .map(|(&p, n)| cyclic_tables::special_tuple(p, n, spec.d))
        .collect::<std::result::Result<_, _>>()?;
    let f0 = Symbol { rows };
    if f0.total().rem_euclid(d) != spec.target_residue() {
        return Err(MalleError::Check(format!("f_0 = {f0} is not in Ξ")));
    }
    Ok((ps, f0))
}

fn symbol_index(xi_set: &[Symbol], f: &Symbol) -> Result<usize> {
    xi_set.iter().position(|g| g == f).ok_or_else(|| MalleError::Check(format!("{f} is not in Ξ")))
}

/// The modular datum (𝒮, 𝒯) with unit f_0, integral form attached.
pub fn family_datum(spec: &FamilySpec, f0: &Symbol) -> Result<ModularDatum> {
    let xi_set = enumerate_symbols(spec)?;
    let (hat, norm) = fourier_matrix_hat(spec)?;
    let s = normalize(&hat, &norm, working_modulus(spec.d))?;
    let md = ModularDatum::new(s, frobenius_diag(spec)?, symbol_index(&xi_set, f0)?)?;
    Ok(md.with_integral_form(hat, norm)?)
}

/// Exact verdicts on symmetry, unitarity, 𝒮⁴ = id, (𝒮𝒯)³ = id and 𝒮²𝒯 = 𝒯𝒮².
pub fn check_fourier_axioms(spec: &FamilySpec) -> Result<AxiomReport> {
    let (_, f0) = choose_special(spec)?;
    Ok(check_modular_axioms_with(&family_datum(spec, &f0)?, false))
}

/// Verlinde ring of 𝒮 with unit f_0.
pub fn family_fusion(spec: &FamilySpec, f0: &Symbol) -> Result<FusionRing> {
    let xi_set = enumerate_symbols(spec)?;
    let (hat, norm) = fourier_matrix_hat(spec)?;
    Ok(verlinde_scaled(&hat, &norm, symbol_index(&xi_set, f0)?)?)
}

/// 𝕊 and twists of the modularized Deligne product at ξ⁻¹ on Ẽ.
#[derive(Debug, Clone, PartialEq)]
pub struct DeligneDatum {
    pub p: Vec<i64>,
    pub elements: Vec<Vec<AlcoveWeight>>,
    pub s: CycMatrix,
    pub twists: Vec<CyclotomicNumber>,
}

fn tilde_label(ws: &[AlcoveWeight]) -> String {
    ws.iter().map(AlcoveWeight::label).collect::<Vec<_>>().join(";")
}

/// √d ∏_i 𝕊^{(i)}_{λ_i μ_i} over Ẽ = {λ : Σ⟨λ_i, ϖ_{n_i}⟩ ≡ 0 mod d}, with each
/// factor the gl_{n_i} matrix at ξ⁻¹ and pivotal parameter 2p_i + d.
pub fn deligne_s_matrix(spec: &FamilySpec, p: &[i64]) -> Result<DeligneDatum> {
    spec.validate()?;
    let d = spec.d;
    if p.len() != spec.blocks.len() {
        return Err(MalleError::Spec("one p_i per block is required".into()));
    }
    let factors: Vec<glcat::CategoricalDatum> = spec
        .ns()
        .iter()
        .zip(p)
        .map(|(&n, &pi)| glcat::s_matrix(d, n, pi, Orientation::Negative))
        .collect::<std::result::Result<_, _>>()?;
    let boxes: Vec<Vec<AlcoveWeight>> = spec.ns().iter().map(|&n| enumerate_box(n, d)).collect::<std::result::Result<_, _>>()?;
    let mut elements: Vec<Vec<usize>> = vec![vec![]];
    for b in &boxes {
        elements = elements.into_iter().flat_map(|e| (0..b.len()).map(move |i| [e.clone(), vec![i]].concat())).collect();
    }
    elements.retain(|e| e.iter().enumerate().map(|(i, &j)| boxes[i][j].weight().size()).sum::<i64>().rem_euclid(d as i64) == 0);
    let expected: BigInt = spec.ns().iter().map(|&n| binomial(d as u64, n as u64)).product::<BigInt>() / d;
    if BigInt::from(elements.len()) != expected {
        return Err(MalleError::Check(format!("|Ẽ| = {} but expected {expected}", elements.len())));
    }
    let big = working_modulus(d);
    let root_d = CyclotomicNumber::sqrt_integer(d as u64, big)?;
    let k = elements.len();
    let mut entries = vec![CyclotomicNumber::zero(big); k * k];
    for a in 0..k {
        for b in a..k {
            let mut v = root_d.clone();
            for (i, f) in factors.iter().enumerate() {
                v = &v * f.s.get(elements[a][i], elements[b][i]);
            }
            entries[a * k + b] = v.clone();
            entries[b * k + a] = v;
        }
    }
    let twists = elements
        .iter()
        .map(|e| e.iter().enumerate().fold(CyclotomicNumber::one(big), |acc, (i, &j)| &acc * &factors[i].twists[j]))
        .collect();
    let elements: Vec<Vec<AlcoveWeight>> =
        elements.iter().map(|e| e.iter().enumerate().map(|(i, &j)| boxes[i][j].clone()).collect()).collect();
    let labels: Vec<String> = elements.iter().map(|e| tilde_label(e)).collect();
    Ok(DeligneDatum { p: p.to_vec(), elements, s: CycMatrix::new(labels.clone(), labels, big, entries)?, twists })
}

/// Outcome of the categorical match for a family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMatch {
    pub p: Vec<i64>,
    pub f0: Symbol,
    pub omega: CyclotomicNumber,
    pub sigma: Vec<i8>,
    pub fr_f0: CyclotomicNumber,
    /// unit_map[f] = index in Ẽ of ι̃(f).
    pub unit_map: Vec<usize>,
}

impl FamilyMatch {
    pub fn fr_f0_is_one(&self) -> bool {
        self.fr_f0.is_one()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "p": self.p,
            "f0": self.f0.label(),
            "omega": self.omega.to_json(),
            "omega_display": self.omega.to_string(),
            "sigma": self.sigma,
            "fr_f0": self.fr_f0.to_json(),
            "fr_f0_is_one": self.fr_f0_is_one(),
        })
    }
}

/// ι̃(f)_i = ι̃_{p_i}(f_i).
pub fn iota_tilde_family(p: &[i64], f: &Symbol) -> Vec<AlcoveWeight> {
    f.rows.iter().zip(p).map(|(r, &pi)| iota_tilde(pi, r)).collect()
}

/// Verifies 𝕊∘ι̃ = ω σσᵀ 𝒮 and θ∘ι̃ = Fr(f_0)⁻¹ 𝒯 exactly, with σ_{f_0} = 1.
pub fn match_family(spec: &FamilySpec) -> Result<FamilyMatch> {
    let (p, f0) = choose_special(spec)?;
    let xi_set = enumerate_symbols(spec)?;
    let target = fourier_matrix(spec)?;
    let fr = frobenius_diag(spec)?;
    let deligne = deligne_s_matrix(spec, &p)?;
    let position: HashMap<&Vec<AlcoveWeight>, usize> = deligne.elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let unit_map = xi_set
        .iter()
        .map(|f| {
            let img = iota_tilde_family(&p, f);
            position.get(&img).copied().ok_or_else(|| MalleError::Check(format!("ι̃({f}) = {} is not in Ẽ", tilde_label(&img))))
        })
        .collect::<Result<Vec<_>>>()?;
    let unit = symbol_index(&xi_set, &f0)?;
    let fr_f0 = fr[unit].clone();
    let report = match_modular_data(&deligne.s, &deligne.twists, &target, &fr, unit, &unit_map, &fr_f0.inv()?)?;
    if report.sigma[unit] != 1 {
        return Err(MalleError::Check("σ at f_0 is not +1".into()));
    }
    Ok(FamilyMatch { p, f0, omega: report.omega, sigma: report.sigma, fr_f0, unit_map })
}

/// E(f)_i = sort((f_i + w_i - Σ w_k n_k) mod d).
pub fn ennola(spec: &FamilySpec, f: &Symbol) -> Result<Symbol> {
    let shift_all = spec.weighted_size();
    let rows = f
        .rows
        .iter()
        .zip(&spec.blocks)
        .map(|(r, b)| StrictTuple::from_residues(spec.d, r.entries().iter().map(|&x| x as i64 + b.w as i64 - shift_all)))
        .collect::<std::result::Result<_, _>>()?;
    Ok(Symbol { rows })
}

/// Ennola permutation of Ξ and its orbits.
#[derive(Debug, Clone, PartialEq)]
pub struct EnnolaReport {
    /// perm[f] = index of E(f).
    pub perm: Vec<usize>,
    pub orbits: Vec<Vec<usize>>,
    /// Order of E; divides d.
    pub order: usize,
}

/// Checks E(f) ∈ Ξ, E^d = id, that each η_i = (w_i - Σ w_k n_k)ϖ_{n_i} is an
/// invertible class, and that canonical_rep(ι_{p_i}(f_i) + η_i) = ι̃_{p_i}(E(f)_i).
pub fn check_ennola(spec: &FamilySpec) -> Result<EnnolaReport> {
    let xi_set = enumerate_symbols(spec)?;
    let (p, _) = choose_special(spec)?;
    let d = spec.d;
    let shift_all = spec.weighted_size();
    let mut perm = Vec::with_capacity(xi_set.len());
    for f in &xi_set {
        let e = ennola(spec, f)?;
        perm.push(symbol_index(&xi_set, &e)?);
        for (i, b) in spec.blocks.iter().enumerate() {
            let eta = Weight::varpi(b.n, b.n).scale(b.w as i64 - shift_all);
            let eta_class = AlcoveWeight::new(eta.clone(), d)?;
            if is_invertible_class(&eta_class).is_none() {
                return Err(MalleError::Check(format!("η_{i} is not invertible")));
            }
            let moved = AlcoveWeight::new(iota(p[i], &f.rows[i]).weight().add(&eta), d)?;
            if canonical_rep(&moved) != iota_tilde(p[i], &e.rows[i]) {
                return Err(MalleError::Check(format!("ι({f})_{i} + η_{i} is not equivalent to ι(E(f))_{i}")));
            }
        }
    }
    let k = perm.len();
    let mut seen = vec![false; k];
    let mut orbits = Vec::new();
    for s in 0..k {
        if seen[s] {
            continue;
        }
        let mut orbit = vec![s];
        seen[s] = true;
        let mut x = perm[s];
        while x != s {
            seen[x] = true;
            orbit.push(x);
            x = perm[x];
        }
        orbits.push(orbit);
    }
    let order = orbits.iter().fold(1usize, |acc, o| acc.lcm(&o.len()));
    if !(d as usize).is_multiple_of(order) {
        return Err(MalleError::Check(format!("E has order {order}, which does not divide d = {d}")));
    }
    Ok(EnnolaReport { perm, orbits, order })
}

/// ε(f)ε'(f) for two arrangements of the same family: 𝒮' = D𝒮D with D = diag of these signs.
pub fn arrangement_signs(spec: &FamilySpec, other: &FamilySpec) -> Result<Vec<i8>> {
    Ok(enumerate_symbols(spec)?.iter().map(|f| epsilon_sign(spec, f) * epsilon_sign(other, f)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::rescale_signs;

    fn d3() -> FamilySpec {
        FamilySpec::new(3, 1, &[(0, 2), (1, 2)]).unwrap()
    }

    fn d4() -> FamilySpec {
        FamilySpec::new(4, 1, &[(0, 3), (1, 2)]).unwrap()
    }

    fn small_specs() -> Vec<FamilySpec> {
        vec![
            d3(),
            d4(),
            FamilySpec::new(3, 0, &[(0, 1)]).unwrap(),
            FamilySpec::new(2, 1, &[(0, 1), (1, 1), (2, 1)]).unwrap(),
            FamilySpec::new(5, 1, &[(0, 2), (1, 4)]).unwrap(),
            FamilySpec::new(4, 1, &[(0, 1), (1, 2), (2, 2)]).unwrap(),
            FamilySpec::new(3, 1, &[(0, 1), (2, 3)]).unwrap(),
            FamilySpec::new(2, 2, &[(0, 2), (1, 1), (3, 2)]).unwrap(),
        ]
    }

    #[test]
    fn spec_validation() {
        assert!(FamilySpec::new(3, 1, &[(0, 2), (1, 1)]).is_err());
        assert!(FamilySpec::new(3, 1, &[(1, 2), (0, 2)]).is_err());
        assert!(FamilySpec::from_json_str(r#"{"d":3,"m":1,"blocks":[{"w":0,"n":2},{"w":1,"n":2}]}"#).is_ok());
        assert!(FamilySpec::from_json_str(r#"{"d":3,"m":1,"blocks":[{"w":0,"n":2}]}"#).is_err());
        assert!(FamilySpec::from_json_str(r#"{"d":3,"m":1}"#).is_err());
        assert!(d3().with_arrangement(vec![0, 1, 0, 0]).is_err());
        assert!(d3().with_arrangement(vec![0, 1, 0, 1]).is_ok());
    }

    #[test]
    fn symbol_counts() {
        assert_eq!(enumerate_symbols(&FamilySpec::new(3, 0, &[(2, 1)]).unwrap()).unwrap().len(), 1);
        assert_eq!(enumerate_symbols(&d3()).unwrap().len(), 3);
        assert_eq!(enumerate_symbols(&d4()).unwrap().len(), 6);
        for spec in small_specs() {
            for f in enumerate_symbols(&spec).unwrap() {
                assert_eq!(f.total().rem_euclid(spec.d as i64), spec.target_residue());
            }
        }
    }

    #[test]
    fn epsilon_signs() {
        let f = Symbol {
            rows: vec![StrictTuple::parse(3, "0,1").unwrap(), StrictTuple::parse(3, "0,2").unwrap()],
        };
        // values 0,1,0,2: four increasing pairs
        assert_eq!(epsilon_sign(&d3(), &f), 1);
        // values 0,0,1,2: five increasing pairs
        let interleaved = d3().with_arrangement(vec![0, 1, 0, 1]).unwrap();
        assert_eq!(epsilon_sign(&interleaved, &f), -1);
        let one = FamilySpec::new(5, 0, &[(0, 1)]).unwrap();
        for f in enumerate_symbols(&one).unwrap() {
            assert_eq!(epsilon_sign(&one, &f), 1);
        }
    }

    #[test]
    fn fourier_axioms() {
        for spec in small_specs() {
            let rep = check_fourier_axioms(&spec).unwrap();
            assert!(rep.passes(), "{spec:?}: {:?}", rep.failures());
            assert!(rep.st_cubed.unwrap().is_one());
        }
        let trivial = FamilySpec::new(3, 0, &[(0, 1)]).unwrap();
        let s = fourier_matrix(&trivial).unwrap();
        assert_eq!(s.nrows(), 1);
        assert!(s.get(0, 0).is_one() || s.get(0, 0).neg().is_one());
    }

    #[test]
    fn special_symbols() {
        let (p, f0) = choose_special(&d3()).unwrap();
        assert_eq!(p, vec![0, 2]);
        assert_eq!(f0.label(), "0,1;0,2");
        let (p, _) = choose_special(&d4()).unwrap();
        assert_eq!(p, vec![0, 1]);
        for spec in small_specs() {
            let (p, f0) = choose_special(&spec).unwrap();
            assert!(p.iter().all(|&x| 0 <= x && x < spec.d as i64));
            assert!(enumerate_symbols(&spec).unwrap().contains(&f0));
        }
        let single = FamilySpec::new(4, 1, &[(0, 1), (3, 4)]).unwrap();
        let (p, _) = choose_special(&single).unwrap();
        assert_eq!(p[0], 0);
    }

    #[test]
    fn family_rings_and_matches() {
        for spec in small_specs() {
            let (_, f0) = choose_special(&spec).unwrap();
            let ring = family_fusion(&spec, &f0).unwrap();
            let m = match_family(&spec).unwrap_or_else(|e| panic!("{spec:?}: {e}"));
            assert!(m.omega.pow(4).unwrap().is_one());
            // the categorical ring is the σ-rescaled family ring
            let deligne = deligne_s_matrix(&spec, &m.p).unwrap();
            let unit = m.unit_map[enumerate_symbols(&spec).unwrap().iter().position(|f| *f == f0).unwrap()];
            let cat = crate::fusion::verlinde(&deligne.s, unit).unwrap();
            let resc = rescale_signs(&ring, &m.sigma).unwrap();
            let k = ring.rank();
            for a in 0..k {
                for b in 0..k {
                    for c in 0..k {
                        assert_eq!(resc.get(a, b, c), cat.get(m.unit_map[a], m.unit_map[b], m.unit_map[c]));
                    }
                }
            }
        }
        let trivial = match_family(&FamilySpec::new(3, 0, &[(0, 1)]).unwrap()).unwrap();
        assert_eq!(trivial.sigma, vec![1]);
        assert!(match_family(&d3()).unwrap().fr_f0_is_one());
        assert!(!match_family(&d4()).unwrap().fr_f0_is_one());
    }

    #[test]
    fn deligne_index_set_sizes() {
        let dd = deligne_s_matrix(&d4(), &[0, 1]).unwrap();
        assert_eq!(dd.elements.len(), 6);
        assert!(dd.s.is_symmetric());
        assert!(dd.s.is_unitary());
    }

    #[test]
    fn ennola_duality() {
        for spec in small_specs() {
            let r = check_ennola(&spec).unwrap();
            let xi_set = enumerate_symbols(&spec).unwrap();
            for (i, f) in xi_set.iter().enumerate() {
                let mut g = f.clone();
                for _ in 0..spec.d {
                    g = ennola(&spec, &g).unwrap();
                }
                assert_eq!(g, *f);
                assert_eq!(xi_set[r.perm[i]], ennola(&spec, f).unwrap());
            }
        }
        let zero_shift = FamilySpec::new(3, 0, &[(0, 1)]).unwrap();
        let f = &enumerate_symbols(&zero_shift).unwrap()[0];
        assert_eq!(ennola(&zero_shift, f).unwrap(), *f);
        let r = check_ennola(&d3()).unwrap();
        assert!(r.order == 1 || r.order == 3);
    }

    #[test]
    fn arrangement_only_conjugates_by_signs() {
        let a = d4();
        let b = d4().with_arrangement(vec![1, 0, 0, 1, 0]).unwrap();
        let sa = fourier_matrix(&a).unwrap();
        let sb = fourier_matrix(&b).unwrap();
        let signs = arrangement_signs(&a, &b).unwrap();
        let k = sa.nrows();
        for i in 0..k {
            for j in 0..k {
                let v = sa.get(i, j);
                let expected = if signs[i] * signs[j] > 0 { v.clone() } else { v.neg() };
                assert_eq!(*sb.get(i, j), expected);
            }
        }
        let (_, f0) = choose_special(&a).unwrap();
        let ra = family_fusion(&a, &f0).unwrap();
        let rb = family_fusion(&b, &f0).unwrap();
        assert_eq!(rescale_signs(&ra, &signs).unwrap(), rb);
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = d3().with_arrangement(vec![0, 1, 1, 0]).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(FamilySpec::from_json_str(&text).unwrap(), spec);
    }
}
