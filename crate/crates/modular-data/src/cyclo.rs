//! Exact arithmetic in the cyclotomic field Q(ζ_N).
//!
//! A value is stored as a polynomial in ζ_N of degree < φ(N), reduced modulo
//! the cyclotomic polynomial Φ_N, with integer numerators over one positive
//! common denominator. Coefficients live in `i64` when they fit; every
//! operation first runs with checked `i128` intermediates and falls back to
//! `BigInt` on overflow, so results are always exact.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycloError {
    #[error("modulus mismatch: Q(zeta_{0}) vs Q(zeta_{1})")]
    ModulusMismatch(u32, u32),
    #[error("inverse of zero")]
    DivisionByZero,
    #[error("modulus {from} does not divide {to}")]
    NotDivisible { from: u32, to: u32 },
    #[error("sqrt({d}) does not lie in Q(zeta_{n})")]
    ModulusTooSmall { d: u64, n: u32 },
    #[error("value does not lie in Q(zeta_{0})")]
    NotInSubfield(u32),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("malformed cyclotomic number: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, CycloError>;

/// Per-modulus data: Φ_N and the reductions of ζ^k.
pub(crate) struct Field {
    n: u32,
    phi: usize,
    /// Non-leading terms of Φ_N = x^φ + Σ c_j x^j, as (j, c_j) with c_j ≠ 0.
    low: Vec<(usize, i64)>,
    /// ζ^k reduced, for 0 ≤ k < N, as sparse (degree, coefficient) lists.
    powers: Vec<Vec<(usize, i64)>>,
    /// Residues k mod N with gcd(k, N) = 1, ascending.
    units: Vec<u32>,
    cos_sin: Vec<(f64, f64)>,
}

static FIELDS: OnceLock<RwLock<HashMap<u32, Arc<Field>>>> = OnceLock::new();

pub(crate) fn field(n: u32) -> Arc<Field> {
    assert!(n > 0, "cyclotomic modulus must be positive");
    let cache = FIELDS.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(f) = cache.read().unwrap().get(&n) {
        return f.clone();
    }
    let f = Arc::new(Field::build(n));
    cache.write().unwrap().entry(n).or_insert(f).clone()
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|m| n.is_multiple_of(*m)).collect()
}

/// Coefficients of Φ_n in ascending degree.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    fn go(n: u32, memo: &mut HashMap<u32, Vec<i128>>) -> Vec<i128> {
        if let Some(p) = memo.get(&n) {
            return p.clone();
        }
        // x^n - 1 divided by Φ_m for every proper divisor m.
        let mut num = vec![0i128; n as usize + 1];
        num[0] = -1;
        num[n as usize] = 1;
        for m in divisors(n).into_iter().filter(|&m| m < n) {
            let q = go(m, memo);
            num = poly_div_monic(&num, &q);
        }
        memo.insert(n, num.clone());
        num
    }
    let mut memo = HashMap::new();
    go(n, &mut memo)
        .into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient exceeds i64"))
        .collect()
}

fn poly_div_monic(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut q = vec![0i128; num.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    q
}

impl Field {
    fn build(n: u32) -> Field {
        let phi_poly = cyclotomic_polynomial(n);
        let phi = phi_poly.len() - 1;
        let low: Vec<(usize, i64)> = phi_poly[..phi]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j, c))
            .collect();
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(
                cur.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(j, &c)| (j, c))
                    .collect(),
            );
            // multiply by x and reduce the overflow term
            let top = cur[phi - 1];
            cur.rotate_right(1);
            cur[0] = 0;
            if top != 0 {
                for &(j, c) in &low {
                    cur[j] -= top * c;
                }
            }
        }
        let units = (0..n).filter(|&k| n == 1 || k.gcd(&n) == 1).collect();
        let cos_sin = (0..phi)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                (t.cos(), t.sin())
            })
            .collect();
        Field { n, phi, low, powers, units, cos_sin }
    }
}

/// Integer coefficient arithmetic used by the generic kernels. The `i128`
/// implementation reports overflow as `None`; `BigInt` never fails.
pub(crate) trait Coef: Clone + PartialEq {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn mul_i64(&self, o: i64) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Self;
    fn to_i64(&self) -> Option<i64>;
    fn to_big(&self) -> BigInt;
}

impl Coef for i128 {
    fn zero() -> Self {
        0
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn mul_i64(&self, o: i64) -> Option<Self> {
        self.checked_mul(o as i128)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn gcd(&self, o: &Self) -> Option<Self> {
        let a = self.checked_abs()?;
        let b = o.checked_abs()?;
        Some(Integer::gcd(&a, &b))
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn to_i64(&self) -> Option<i64> {
        i64::try_from(*self).ok()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coef for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn mul_i64(&self, o: i64) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn gcd(&self, o: &Self) -> Option<Self> {
        Some(Integer::gcd(self, o))
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn to_i64(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(Box<[i64]>, i64),
    Big(Box<[BigInt]>, BigInt),
}

/// An exact element of Q(ζ_N).
#[derive(Clone)]
pub struct CyclotomicNumber {
    field: Arc<Field>,
    repr: Repr,
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.n == other.field.n && self.repr == other.repr
    }
}
impl Eq for CyclotomicNumber {}

impl std::hash::Hash for CyclotomicNumber {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.n.hash(state);
        self.repr.hash(state);
    }
}

/// Numerators and denominator lifted into a working coefficient type.
struct Lifted<R> {
    num: Vec<R>,
    den: R,
}

fn lift_small(num: &[i64], den: i64) -> Lifted<i128> {
    Lifted { num: num.iter().map(|&c| c as i128).collect(), den: den as i128 }
}

/// Reduce a dense polynomial of any length modulo Φ_N, returning φ(N) coefficients.
fn reduce<R: Coef>(f: &Field, mut c: Vec<R>) -> Option<Vec<R>> {
    let phi = f.phi;
    if c.len() < phi {
        c.resize(phi, R::zero());
    }
    for k in (phi..c.len()).rev() {
        if c[k].is_zero() {
            continue;
        }
        let t = std::mem::replace(&mut c[k], R::zero());
        for &(j, a) in &f.low {
            let idx = k - phi + j;
            c[idx] = c[idx].sub(&t.mul_i64(a)?)?;
        }
    }
    c.truncate(phi);
    Some(c)
}

fn nonzero<R: Coef>(v: &[R]) -> Vec<usize> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i).collect()
}

/// Unreduced product, accumulated into `acc` (length ≥ 2φ−1) scaled by `scale`.
fn convolve_into<R: Coef>(
    acc: &mut [R],
    a: &[R],
    b: &[R],
    scale: &R,
    negate: bool,
) -> Option<()> {
    let ia = nonzero(a);
    let ib = nonzero(b);
    let unit = scale == &R::from_i64(1);
    for &i in &ia {
        let ai = if unit { a[i].clone() } else { a[i].mul(scale)? };
        let ai = if negate { ai.neg()? } else { ai };
        for &j in &ib {
            acc[i + j] = acc[i + j].add(&ai.mul(&b[j])?)?;
        }
    }
    Some(())
}

fn lcm<R: Coef>(a: &R, b: &R) -> Option<R> {
    let g = a.gcd(b)?;
    a.div_exact(&g).mul(b)
}

impl CyclotomicNumber {
    fn from_parts<R: Coef>(field: Arc<Field>, mut num: Vec<R>, mut den: R) -> Option<Self> {
        debug_assert_eq!(num.len(), field.phi);
        if num.iter().all(|c| c.is_zero()) {
            return Some(Self::zero_in(field));
        }
        let mut g = den.clone();
        for c in num.iter().filter(|c| !c.is_zero()) {
            g = g.gcd(c)?;
        }
        if den.is_neg() {
            g = g.neg()?;
        }
        if g != R::from_i64(1) {
            for c in num.iter_mut() {
                *c = c.div_exact(&g);
            }
            den = den.div_exact(&g);
        }
        let small: Option<Vec<i64>> = num.iter().map(|c| c.to_i64()).collect();
        let repr = match (small, den.to_i64()) {
            (Some(s), Some(d)) => Repr::Small(s.into_boxed_slice(), d),
            _ => Repr::Big(num.iter().map(|c| c.to_big()).collect(), den.to_big()),
        };
        Some(CyclotomicNumber { field, repr })
    }

    fn zero_in(field: Arc<Field>) -> Self {
        let phi = field.phi;
        CyclotomicNumber { field, repr: Repr::Small(vec![0; phi].into_boxed_slice(), 1) }
    }

    fn lift_big(&self) -> Lifted<BigInt> {
        match &self.repr {
            Repr::Small(n, d) => {
                Lifted { num: n.iter().map(|&c| BigInt::from(c)).collect(), den: BigInt::from(*d) }
            }
            Repr::Big(n, d) => Lifted { num: n.to_vec(), den: d.clone() },
        }
    }

    fn small(&self) -> Option<(&[i64], i64)> {
        match &self.repr {
            Repr::Small(n, d) => Some((n, *d)),
            Repr::Big(..) => None,
        }
    }

    pub fn zero(n: u32) -> Self {
        Self::zero_in(field(n))
    }

    pub fn one(n: u32) -> Self {
        Self::from_integer(n, 1)
    }

    pub fn from_integer(n: u32, v: i64) -> Self {
        let f = field(n);
        let mut num = vec![0i64; f.phi];
        num[0] = v;
        CyclotomicNumber { field: f, repr: Repr::Small(num.into_boxed_slice(), 1) }
    }

    pub fn from_bigint(n: u32, v: &BigInt) -> Self {
        Self::from_rational(n, &BigRational::from_integer(v.clone()))
    }

    pub fn from_rational(n: u32, r: &BigRational) -> Self {
        let f = field(n);
        let mut num = vec![<BigInt as Zero>::zero(); f.phi];
        num[0] = r.numer().clone();
        Self::from_parts(f, num, r.denom().clone()).expect("bigint arithmetic cannot overflow")
    }

    /// Builds Σ c_k ζ_N^k from an arbitrary list of rational coefficients
    /// (length unrestricted; exponents are taken mod N).
    pub fn from_power_coeffs(n: u32, coeffs: &[BigRational]) -> Self {
        let f = field(n);
        let mut acc = Self::zero_in(f.clone());
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(&Self::root_of_unity(n, k as i64) * &Self::from_rational(n, c));
            }
        }
        acc
    }

    /// ζ_N^k.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let f = field(n);
        let k = k.rem_euclid(n as i64) as usize;
        let mut num = vec![0i64; f.phi];
        for &(j, c) in &f.powers[k] {
            num[j] = c;
        }
        CyclotomicNumber { field: f, repr: Repr::Small(num.into_boxed_slice(), 1) }
    }

    pub fn modulus(&self) -> u32 {
        self.field.n
    }

    /// Exact coefficients in the power basis 1, ζ, …, ζ^{φ(N)−1}.
    pub fn coeffs(&self) -> Vec<BigRational> {
        let l = self.lift_big();
        l.num.into_iter().map(|c| BigRational::new(c, l.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Small(n, _) => n.iter().all(|&c| c == 0),
            Repr::Big(n, _) => n.iter().all(Zero::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// The rational value when the canonical form is constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        let l = self.lift_big();
        if l.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(l.num[0].clone(), l.den))
        } else {
            None
        }
    }

    /// The integer value when the canonical form is a constant integer.
    pub fn is_integer(&self) -> Option<BigInt> {
        match &self.repr {
            Repr::Small(n, d) => {
                (*d == 1 && n[1..].iter().all(|&c| c == 0)).then(|| BigInt::from(n[0]))
            }
            Repr::Big(n, d) => {
                (d.is_one() && n[1..].iter().all(Zero::is_zero)).then(|| n[0].clone())
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field.n != other.field.n {
            Err(CycloError::ModulusMismatch(self.field.n, other.field.n))
        } else {
            Ok(())
        }
    }

    fn add_generic<R: Coef>(f: &Arc<Field>, a: &Lifted<R>, b: &Lifted<R>, sub: bool) -> Option<Self> {
        let l = lcm(&a.den, &b.den)?;
        let sa = l.div_exact(&a.den);
        let sb = l.div_exact(&b.den);
        let mut out = Vec::with_capacity(f.phi);
        for (x, y) in a.num.iter().zip(&b.num) {
            let x = x.mul(&sa)?;
            let y = y.mul(&sb)?;
            out.push(if sub { x.sub(&y)? } else { x.add(&y)? });
        }
        Self::from_parts(f.clone(), out, l)
    }

    fn add_sub(&self, other: &Self, sub: bool) -> Self {
        if let (Some((an, ad)), Some((bn, bd))) = (self.small(), other.small()) {
            if let Some(r) =
                Self::add_generic(&self.field, &lift_small(an, ad), &lift_small(bn, bd), sub)
            {
                return r;
            }
        }
        Self::add_generic(&self.field, &self.lift_big(), &other.lift_big(), sub).unwrap()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_sub(other, false))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_sub(other, true))
    }

    fn mul_generic<R: Coef>(f: &Arc<Field>, a: &Lifted<R>, b: &Lifted<R>) -> Option<Self> {
        let mut acc = vec![R::zero(); 2 * f.phi];
        convolve_into(&mut acc, &a.num, &b.num, &R::from_i64(1), false)?;
        let num = reduce(f, acc)?;
        Self::from_parts(f.clone(), num, a.den.mul(&b.den)?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if let (Some((an, ad)), Some((bn, bd))) = (self.small(), other.small()) {
            if let Some(r) = Self::mul_generic(&self.field, &lift_small(an, ad), &lift_small(bn, bd))
            {
                return Ok(r);
            }
        }
        Ok(Self::mul_generic(&self.field, &self.lift_big(), &other.lift_big()).unwrap())
    }

    pub fn neg(&self) -> Self {
        let repr = match &self.repr {
            Repr::Small(n, d) => {
                if n.contains(&i64::MIN) {
                    let l = self.lift_big();
                    return Self::from_parts(self.field.clone(), l.num.iter().map(|c| -c).collect(), l.den)
                        .unwrap();
                }
                Repr::Small(n.iter().map(|&c| -c).collect(), *d)
            }
            Repr::Big(n, d) => Repr::Big(n.iter().map(|c| -c).collect(), d.clone()),
        };
        CyclotomicNumber { field: self.field.clone(), repr }
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, r: &BigRational) -> Self {
        let l = self.lift_big();
        let num = l.num.iter().map(|c| c * r.numer()).collect();
        Self::from_parts(self.field.clone(), num, l.den * r.denom()).unwrap()
    }

    pub fn scale_int(&self, k: i64) -> Self {
        if let Some((n, d)) = self.small() {
            let num: Option<Vec<i128>> = n.iter().map(|&c| (c as i128).checked_mul(k as i128)).collect();
            if let Some(num) = num {
                return Self::from_parts(self.field.clone(), num, d as i128).unwrap();
            }
        }
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    /// The Galois automorphism ζ ↦ ζ^k (k coprime to N).
    pub fn galois(&self, k: i64) -> Self {
        let f = &self.field;
        let n = f.n as i64;
        let k = k.rem_euclid(n) as usize;
        fn go<R: Coef>(f: &Arc<Field>, l: &Lifted<R>, k: usize) -> Option<CyclotomicNumber> {
            let mut out = vec![R::zero(); f.phi];
            for (i, c) in l.num.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for &(j, p) in &f.powers[(i * k) % f.n as usize] {
                    out[j] = out[j].add(&c.mul_i64(p)?)?;
                }
            }
            CyclotomicNumber::from_parts(f.clone(), out, l.den.clone())
        }
        if let Some((num, d)) = self.small() {
            if let Some(r) = go(f, &lift_small(num, d), k) {
                return r;
            }
        }
        go(f, &self.lift_big(), k).unwrap()
    }

    /// Complex conjugation ζ ↦ ζ^{N−1}.
    pub fn conjugate(&self) -> Self {
        self.galois(self.field.n as i64 - 1)
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(self.modulus(), &r.recip()));
        }
        // Fast path: x·x̄ rational, as for roots of unity and Gauss sums.
        let c = self.conjugate();
        if let Some(r) = (self * &c).as_rational() {
            return Ok(c.scale(&r.recip()));
        }
        // General case: x^{-1} = (∏_{k≠1} σ_k(x)) / N(x).
        let mut adj = Self::one(self.modulus());
        for &k in self.field.units.iter().filter(|&&k| k != 1) {
            adj = &adj * &self.galois(k as i64);
        }
        let norm = (self * &adj).as_rational().expect("field norm must be rational");
        Ok(adj.scale(&norm.recip()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self * &other.inv()?)
    }

    /// x^k for any integer k (negative powers need x ≠ 0).
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(self.modulus());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// The same value inside Q(ζ_M), for N | M.
    pub fn rebase(&self, m: u32) -> Result<Self> {
        let n = self.modulus();
        if m == 0 {
            return Err(CycloError::ZeroModulus);
        }
        if !m.is_multiple_of(n) {
            return Err(CycloError::NotDivisible { from: n, to: m });
        }
        if m == n {
            return Ok(self.clone());
        }
        let t = field(m);
        let step = (m / n) as usize;
        fn go<R: Coef>(t: &Arc<Field>, l: &Lifted<R>, step: usize) -> Option<CyclotomicNumber> {
            let mut out = vec![R::zero(); t.phi];
            for (i, c) in l.num.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for &(j, p) in &t.powers[i * step] {
                    out[j] = out[j].add(&c.mul_i64(p)?)?;
                }
            }
            CyclotomicNumber::from_parts(t.clone(), out, l.den.clone())
        }
        if let Some((num, d)) = self.small() {
            if let Some(r) = go(&t, &lift_small(num, d), step) {
                return Ok(r);
            }
        }
        Ok(go(&t, &self.lift_big(), step).unwrap())
    }

    /// True iff the value is fixed by every automorphism of Q(ζ_N)/Q(ζ_m), m | N.
    fn lies_in(&self, m: u32) -> bool {
        self.field
            .units
            .iter()
            .filter(|&&k| k % m == 1 % m && k != 1)
            .all(|&k| &self.galois(k as i64) == self)
    }

    /// The same value inside Q(ζ_m), for m | N, when it lies in that subfield.
    pub fn descend(&self, m: u32) -> Result<Self> {
        let n = self.modulus();
        if m == 0 || !n.is_multiple_of(m) {
            return Err(CycloError::NotDivisible { from: m, to: n });
        }
        if m == n {
            return Ok(self.clone());
        }
        if !self.lies_in(m) {
            return Err(CycloError::NotInSubfield(m));
        }
        // Solve Σ c_j rebase(ζ_m^j) = x over Q by Gaussian elimination.
        let sub = field(m);
        let cols: Vec<Vec<BigRational>> = (0..sub.phi)
            .map(|j| Self::root_of_unity(m, j as i64).rebase(n).unwrap().coeffs())
            .collect();
        let rhs = self.coeffs();
        let rows = self.field.phi;
        let width = sub.phi;
        let mut a: Vec<Vec<BigRational>> = (0..rows)
            .map(|i| {
                let mut r: Vec<BigRational> = (0..width).map(|j| cols[j][i].clone()).collect();
                r.push(rhs[i].clone());
                r
            })
            .collect();
        let mut pivot_row = 0;
        let mut pivots = Vec::new();
        for col in 0..width {
            let Some(p) = (pivot_row..rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(pivot_row, p);
            let inv = a[pivot_row][col].recip();
            for v in a[pivot_row].iter_mut() {
                *v = &*v * &inv;
            }
            for r in 0..rows {
                if r != pivot_row && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for c in 0..=width {
                        let delta = &factor * &a[pivot_row][c];
                        a[r][c] = &a[r][c] - delta;
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        let mut sol = vec![BigRational::zero(); width];
        for (r, &col) in pivots.iter().enumerate() {
            sol[col] = a[r][width].clone();
        }
        let out = Self::from_power_coeffs(m, &sol);
        if out.rebase(n)? != *self {
            return Err(CycloError::NotInSubfield(m));
        }
        Ok(out)
    }

    /// The smallest m | N with the value in Q(ζ_m), together with that representation.
    pub fn minimal_field(&self) -> Self {
        let n = self.modulus();
        for m in divisors(n) {
            if self.lies_in(m) {
                if let Ok(v) = self.descend(m) {
                    return v;
                }
            }
        }
        self.clone()
    }

    /// Floating-point value at ζ_N = e^{2πi/N}.
    pub fn embed(&self) -> Complex64 {
        let f = &self.field;
        let (re, im) = match &self.repr {
            Repr::Small(n, d) => {
                let (mut re, mut im) = (0.0, 0.0);
                for (k, &c) in n.iter().enumerate().filter(|(_, &c)| c != 0) {
                    re += c as f64 * f.cos_sin[k].0;
                    im += c as f64 * f.cos_sin[k].1;
                }
                (re / *d as f64, im / *d as f64)
            }
            Repr::Big(n, d) => {
                let (mut re, mut im) = (0.0, 0.0);
                for (k, c) in n.iter().enumerate().filter(|(_, c)| !Zero::is_zero(*c)) {
                    let v = BigRational::new(c.clone(), d.clone()).to_f64().unwrap_or(f64::NAN);
                    re += v * f.cos_sin[k].0;
                    im += v * f.cos_sin[k].1;
                }
                (re, im)
            }
        };
        Complex64::new(re, im)
    }

    /// If the value is ±ζ_N^k, returns (sign, k) with the smallest such k.
    pub fn as_root_of_unity(&self) -> Option<(i8, u32)> {
        if !(self * &self.conjugate()).is_one() {
            return None;
        }
        let n = self.modulus();
        for k in 0..n {
            let r = Self::root_of_unity(n, k as i64);
            if &r == self {
                return Some((1, k));
            }
            if r.neg() == *self {
                return Some((-1, k));
            }
        }
        None
    }

    /// √d inside Q(ζ_N), on the positive real axis.
    pub fn sqrt_integer(d: u64, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(CycloError::ZeroModulus);
        }
        if d == 0 {
            return Ok(Self::zero(n));
        }
        let (square, free) = split_square(d);
        // conductor of Q(√free)
        let conductor = if free % 4 == 1 { free } else { 4 * free };
        if !(n as u64).is_multiple_of(conductor) {
            return Err(CycloError::ModulusTooSmall { d, n });
        }
        let mut v = Self::one(n);
        for p in prime_factors(free) {
            let root = if p == 2 {
                (&Self::root_of_unity(8, 1) + &Self::root_of_unity(8, -1)).rebase(n)?
            } else {
                let p32 = p as u32;
                let mut g = Self::zero(p32);
                for j in 0..p {
                    g = &g + &Self::root_of_unity(p32, ((j * j) % p) as i64);
                }
                let g = g.rebase(n)?;
                if p % 4 == 3 {
                    &g * &Self::root_of_unity(4, -1).rebase(n)?
                } else {
                    g
                }
            };
            v = &v * &root;
        }
        if v.embed().re < 0.0 {
            v = v.neg();
        }
        let v = v.scale_int(square as i64);
        debug_assert_eq!(&v * &v, Self::from_integer(n, d as i64));
        Ok(v)
    }

    /// Σ ±a_i·b_i with a single normalization at the end.
    pub fn sum_of_products<'a, I>(n: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (bool, &'a CyclotomicNumber, &'a CyclotomicNumber)> + Clone,
    {
        let f = field(n);
        for (_, a, b) in terms.clone() {
            if a.modulus() != n {
                return Err(CycloError::ModulusMismatch(n, a.modulus()));
            }
            if b.modulus() != n {
                return Err(CycloError::ModulusMismatch(n, b.modulus()));
            }
        }
        if let Some(r) = Self::sop_small(&f, terms.clone()) {
            return Ok(r);
        }
        Ok(Self::sop_generic(&f, terms.into_iter().map(|(s, a, b)| (s, a.lift_big(), b.lift_big())))
            .unwrap())
    }

    fn sop_small<'a, I>(f: &Arc<Field>, terms: I) -> Option<Self>
    where
        I: IntoIterator<Item = (bool, &'a CyclotomicNumber, &'a CyclotomicNumber)>,
    {
        let mut acc = vec![0i128; 2 * f.phi];
        let mut den: i128 = 1;
        for (neg, a, b) in terms {
            let (an, ad) = a.small()?;
            let (bn, bd) = b.small()?;
            if an.iter().all(|&c| c == 0) || bn.iter().all(|&c| c == 0) {
                continue;
            }
            let td = (ad as i128).checked_mul(bd as i128)?;
            if den % td != 0 {
                let l = lcm(&den, &td)?;
                let s = l / den;
                for c in acc.iter_mut().filter(|c| **c != 0) {
                    *c = c.checked_mul(s)?;
                }
                den = l;
            }
            let scale = den / td;
            let ia: Vec<usize> = (0..an.len()).filter(|&i| an[i] != 0).collect();
            let ib: Vec<usize> = (0..bn.len()).filter(|&i| bn[i] != 0).collect();
            for &i in &ia {
                let mut x = (an[i] as i128).checked_mul(scale)?;
                if neg {
                    x = x.checked_neg()?;
                }
                for &j in &ib {
                    acc[i + j] = acc[i + j].checked_add(x.checked_mul(bn[j] as i128)?)?;
                }
            }
        }
        let num = reduce(f, acc)?;
        Self::from_parts(f.clone(), num, den)
    }

    fn sop_generic<R: Coef, I>(f: &Arc<Field>, terms: I) -> Option<Self>
    where
        I: IntoIterator<Item = (bool, Lifted<R>, Lifted<R>)>,
    {
        let mut acc = vec![R::zero(); 2 * f.phi];
        let mut den = R::from_i64(1);
        for (neg, a, b) in terms {
            let td = a.den.mul(&b.den)?;
            let l = lcm(&den, &td)?;
            if l != den {
                let s = l.div_exact(&den);
                for c in acc.iter_mut() {
                    *c = c.mul(&s)?;
                }
                den = l;
            }
            let scale = den.div_exact(&td);
            convolve_into(&mut acc, &a.num, &b.num, &scale, neg)?;
        }
        let num = reduce(f, acc)?;
        Self::from_parts(f.clone(), num, den)
    }

    /// Height proxy: the largest absolute numerator/denominator bit length.
    pub fn height_bits(&self) -> u64 {
        let l = self.lift_big();
        l.num.iter().map(|c| c.bits()).max().unwrap_or(0).max(l.den.bits())
    }
}

fn split_square(d: u64) -> (u64, u64) {
    let mut square = 1;
    let mut free = 1;
    let mut rest = d;
    let mut p = 2;
    while p * p <= rest {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
        p += 1;
    }
    (square, free * rest)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

macro_rules! binop {
    ($trait:ident, $method:ident, $inner:expr) => {
        impl std::ops::$trait<&CyclotomicNumber> for &CyclotomicNumber {
            type Output = CyclotomicNumber;
            /// Panics on modulus mismatch; use the inherent method for a `Result`.
            fn $method(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                $inner(self, rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$trait<CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                $inner(&self, &rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

binop!(Add, add, CyclotomicNumber::add);
binop!(Sub, sub, CyclotomicNumber::sub);
binop!(Mul, mul, CyclotomicNumber::mul);

impl std::ops::Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber::neg(self)
    }
}
impl std::ops::Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber::neg(&self)
    }
}

impl fmt::Display for CyclotomicNumber {
    /// GAP-style rendering, e.g. `1/3 - 2*E(12)^5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coeffs();
        let n = self.modulus();
        let mut first = true;
        for (k, c) in coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let root = match k {
                0 => String::new(),
                1 => format!("E({n})"),
                _ => format!("E({n})^{k}"),
            };
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "{root}")?,
                _ => write!(f, "{a}*{root}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.modulus(), self)
    }
}

fn big_to_json(v: &BigInt) -> serde_json::Value {
    let s = v.to_string();
    serde_json::Value::Number(s.parse().expect("integer literal is a valid JSON number"))
}

fn json_to_big<E: serde::de::Error>(v: &serde_json::Value) -> std::result::Result<BigInt, E> {
    let s = match v {
        serde_json::Value::Number(n) => n.to_string(),
        serde_json::Value::String(s) => s.clone(),
        _ => return Err(E::custom("coefficient must be an integer")),
    };
    s.parse().map_err(|_| E::custom(format!("not an integer: {s}")))
}

impl CyclotomicNumber {
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self
            .coeffs()
            .iter()
            .map(|c| serde_json::Value::Array(vec![big_to_json(c.numer()), big_to_json(c.denom())]))
            .collect();
        serde_json::json!({ "N": self.modulus(), "coeffs": coeffs })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        Self::from_json_inner::<serde_json::Error>(v).map_err(|e| CycloError::Malformed(e.to_string()))
    }

    fn from_json_inner<E: serde::de::Error>(v: &serde_json::Value) -> std::result::Result<Self, E> {
        let n = v
            .get("N")
            .and_then(|n| n.as_u64())
            .filter(|&n| n > 0 && n <= u32::MAX as u64)
            .ok_or_else(|| E::custom("missing or invalid N"))? as u32;
        let arr = v
            .get("coeffs")
            .and_then(|c| c.as_array())
            .ok_or_else(|| E::custom("missing coeffs"))?;
        let f = field(n);
        if arr.len() != f.phi {
            return Err(E::custom(format!("expected {} coefficients, got {}", f.phi, arr.len())));
        }
        let mut coeffs = Vec::with_capacity(arr.len());
        for c in arr {
            let pair = c.as_array().filter(|p| p.len() == 2).ok_or_else(|| E::custom("coefficient must be [num, den]"))?;
            let num = json_to_big::<E>(&pair[0])?;
            let den = json_to_big::<E>(&pair[1])?;
            if !den.is_positive() {
                return Err(E::custom("denominator must be positive"));
            }
            coeffs.push(BigRational::new(num, den));
        }
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Ok(Self::from_parts(f, num, den).unwrap())
    }
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        Self::from_json_inner::<D::Error>(&v).map_err(D::Error::custom)
    }
}

/// lcm(a, b) for positive moduli.
pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// The working modulus lcm(24, 12d) used for runs at level d.
pub fn working_modulus(d: u32) -> u32 {
    lcm_u32(24, 12 * d)
}
