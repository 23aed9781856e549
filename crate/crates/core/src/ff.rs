//! Finite fields `F_{p^f}` as `F_p[x]/(modulus)`, their quadratic extensions,
//! square roots and points of the projective line.
//!
//! Elements are stored as little-endian coefficient vectors `a_0..a_{f-1}` in
//! the basis `1, α, .., α^{f-1}`, where `α` is the class of `x`. The integer
//! encoding `Σ a_i p^i` identifies the field with `[0, p^f)`; every external
//! artifact (graphs, reports, CLI output) uses that encoding.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::PolyRing;
use crate::ring::{is_prime, ArithError, Field, FiniteField, Ring};

/// Name of the shipped `F_81` preset (`α = √(1+√−1)`, modulus `x⁴+x²+2`).
pub const PAPER_F81: &str = "paper-f81";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic {0} is not supported (p must be odd)")]
    UnsupportedCharacteristic(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus must have {expected} coefficients, got {got}")]
    BadModulusLength { expected: usize, got: usize },
    #[error("modulus coefficient {0} is not reduced mod p")]
    CoefficientOutOfRange(u64),
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus is not irreducible over F_p")]
    NotIrreducible,
    #[error("field of size {p}^{f} is too large")]
    TooLarge { p: u64, f: usize },
    #[error("encoding {0} is out of range")]
    OutOfRange(u64),
    #[error("unknown field preset {0:?}")]
    UnknownPreset(String),
    #[error("cannot parse modulus {0:?}")]
    BadModulusSyntax(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `F_{p^f}` presented as `F_p[x]/(modulus)`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldCtx {
    p: u64,
    f: usize,
    modulus: Vec<u64>,
    q: u64,
}

/// An element of a [`FieldCtx`], as reduced little-endian digits.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    digits: Vec<u32>,
}

impl FieldElement {
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.digits)
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.f, self.modulus)
    }
}

impl FieldCtx {
    /// Builds `F_p[x]/(modulus)` after checking that `p` is an odd prime and
    /// that `modulus = c_0 + c_1 x + .. + c_f x^f` is monic and irreducible.
    pub fn new(p: u64, f: usize, modulus: &[u64]) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p == 2 {
            return Err(FieldError::UnsupportedCharacteristic(p));
        }
        if f == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if modulus.len() != f + 1 {
            return Err(FieldError::BadModulusLength {
                expected: f + 1,
                got: modulus.len(),
            });
        }
        if let Some(&c) = modulus.iter().find(|&&c| c >= p) {
            return Err(FieldError::CoefficientOutOfRange(c));
        }
        if modulus[f] != 1 {
            return Err(FieldError::NotMonic);
        }
        let ctx = Self::unchecked(p, f, modulus.to_vec())?;
        if !is_irreducible(p, modulus) {
            return Err(FieldError::NotIrreducible);
        }
        Ok(ctx)
    }

    fn unchecked(p: u64, f: usize, modulus: Vec<u64>) -> Result<Self, FieldError> {
        let q = (0..f)
            .try_fold(1u64, |acc, _| acc.checked_mul(p))
            .filter(|&q| q < (1u64 << 48))
            .ok_or(FieldError::TooLarge { p, f })?;
        Ok(FieldCtx { p, f, modulus, q })
    }

    /// The prime field `F_p` (modulus `x`).
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1, &[0, 1])
    }

    /// `F_81 = F_3(α)` with `α⁴ + α² + 2 = 0`, i.e. `α = √(1+√−1)`.
    pub fn paper_f81() -> Self {
        Self::new(3, 4, &[2, 0, 1, 0, 1]).expect("x^4+x^2+2 is irreducible over F_3")
    }

    pub fn preset(name: &str) -> Result<Self, FieldError> {
        match name {
            PAPER_F81 => Ok(Self::paper_f81()),
            other => Err(FieldError::UnknownPreset(other.to_string())),
        }
    }

    /// `F_{p^f}` with the first irreducible monic modulus in encoding order
    /// (`c_0 + c_1 p + .. + c_{f-1} p^{f-1}` increasing).
    pub fn with_degree(p: u64, f: usize) -> Result<Self, FieldError> {
        if f == 1 {
            return Self::prime(p);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let probe = Self::unchecked(p, f, vec![0; f + 1])?;
        for n in 0..probe.q {
            let mut modulus: Vec<u64> = (0..f).map(|i| (n / p.pow(i as u32)) % p).collect();
            modulus.push(1);
            if modulus[0] != 0 && is_irreducible(p, &modulus) {
                return Self::new(p, f, &modulus);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.f
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Integer encoding to element.
    pub fn encode(&self, n: u64) -> Result<FieldElement, FieldError> {
        if n >= self.q {
            return Err(FieldError::OutOfRange(n));
        }
        let mut digits = Vec::with_capacity(self.f);
        let mut rest = n;
        for _ in 0..self.f {
            digits.push((rest % self.p) as u32);
            rest /= self.p;
        }
        Ok(FieldElement { digits })
    }

    /// Element to integer encoding.
    pub fn decode(&self, x: &FieldElement) -> u64 {
        x.digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.p + d as u64)
    }

    /// Element from arbitrary (unreduced) coefficients of a polynomial in `α`.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> FieldElement {
        let p = self.p as i64;
        let mut acc: Vec<u64> = coeffs.iter().map(|&c| c.rem_euclid(p) as u64).collect();
        self.reduce(&mut acc);
        acc.resize(self.f, 0);
        FieldElement {
            digits: acc.into_iter().map(|c| c as u32).collect(),
        }
    }

    /// Generator `α` of the basis (the class of `x`).
    pub fn generator(&self) -> FieldElement {
        self.from_coeffs(&[0, 1])
    }

    // Reduces a coefficient vector (entries already < p) modulo the modulus in place.
    fn reduce(&self, c: &mut Vec<u64>) {
        let p = self.p;
        let f = self.f;
        while c.len() > f {
            let top = c.pop().unwrap();
            if top == 0 {
                continue;
            }
            let base = c.len() - f;
            for i in 0..f {
                c[base + i] = (c[base + i] + (p - top) * self.modulus[i] % p) % p;
            }
        }
    }
}

impl Ring for FieldCtx {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        FieldElement {
            digits: vec![0; self.f],
        }
    }

    fn one(&self) -> FieldElement {
        let mut digits = vec![0; self.f];
        digits[0] = 1;
        FieldElement { digits }
    }

    fn from_int(&self, n: i64) -> FieldElement {
        self.from_coeffs(&[n])
    }

    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p as u32;
        FieldElement {
            digits: a
                .digits
                .iter()
                .zip(&b.digits)
                .map(|(x, y)| (x + y) % p)
                .collect(),
        }
    }

    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p as u32;
        FieldElement {
            digits: a
                .digits
                .iter()
                .zip(&b.digits)
                .map(|(x, y)| (x + p - y) % p)
                .collect(),
        }
    }

    fn neg(&self, a: &FieldElement) -> FieldElement {
        let p = self.p as u32;
        FieldElement {
            digits: a.digits.iter().map(|x| (p - x) % p).collect(),
        }
    }

    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p;
        if self.f == 1 {
            return FieldElement {
                digits: vec![(a.digits[0] as u64 * b.digits[0] as u64 % p) as u32],
            };
        }
        let mut acc = vec![0u64; 2 * self.f - 1];
        for (i, &x) in a.digits.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.digits.iter().enumerate() {
                acc[i + j] = (acc[i + j] + x as u64 * y as u64) % p;
            }
        }
        self.reduce(&mut acc);
        FieldElement {
            digits: acc.into_iter().map(|c| c as u32).collect(),
        }
    }

    fn is_zero(&self, a: &FieldElement) -> bool {
        a.digits.iter().all(|&d| d == 0)
    }

    fn div_exact(&self, a: &FieldElement, b: &FieldElement) -> Option<FieldElement> {
        self.div(a, b).ok()
    }
}

impl Field for FieldCtx {
    fn inv(&self, a: &FieldElement) -> Result<FieldElement, ArithError> {
        if self.is_zero(a) {
            return Err(ArithError::DivisionByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }
}

impl FiniteField for FieldCtx {
    fn characteristic(&self) -> u64 {
        self.p
    }

    fn order(&self) -> u64 {
        self.q
    }

    fn element(&self, n: u64) -> FieldElement {
        self.encode(n).expect("encoding in range")
    }

    fn index(&self, x: &FieldElement) -> u64 {
        self.decode(x)
    }
}

/// Ben-Or test: a monic `P` of degree `f` over `F_p` is irreducible iff
/// `gcd(x^{p^k} - x, P) = 1` for `1 <= k <= f/2`.
fn is_irreducible(p: u64, modulus: &[u64]) -> bool {
    let f = modulus.len() - 1;
    if f == 1 {
        return true;
    }
    let fp = FieldCtx::unchecked(p, 1, vec![0, 1]).expect("prime field");
    let ring = PolyRing::new(fp.clone());
    let m = ring.from_coeffs(modulus.iter().map(|&c| fp.from_int(c as i64)).collect());
    let x = ring.from_coeffs(vec![fp.zero(), fp.one()]);
    let mut frob = x.clone();
    for _ in 0..f / 2 {
        frob = ring.pow_mod(&frob, p, &m).expect("nonzero modulus");
        let diff = ring.sub(&frob, &x);
        let g = ring.gcd(&diff, &m).expect("modulus is nonzero");
        if ring.degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Parses `"c_0,c_1,...,c_f"`.
pub fn parse_modulus(s: &str) -> Result<Vec<u64>, FieldError> {
    s.split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| FieldError::BadModulusSyntax(s.to_string()))
}

/// `F[s]/(s² - d)` for a fixed non-square `d` of the base field.
#[derive(Clone, Debug)]
pub struct QuadExt<F: FiniteField> {
    base: F,
    nonresidue: F::Elem,
}

impl<F: FiniteField> QuadExt<F> {
    /// Uses the non-square with the smallest integer encoding.
    pub fn new(base: F) -> Self {
        let nonresidue = base
            .elements()
            .find(|x| !base.is_square(x))
            .expect("odd-characteristic fields have non-squares");
        QuadExt { base, nonresidue }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn nonresidue(&self) -> &F::Elem {
        &self.nonresidue
    }

    pub fn embed(&self, x: &F::Elem) -> (F::Elem, F::Elem) {
        (x.clone(), self.base.zero())
    }

    /// `u + v·s` with `s² = d`.
    pub fn make(&self, u: F::Elem, v: F::Elem) -> (F::Elem, F::Elem) {
        (u, v)
    }

    /// Returns the base-field element if `x` lies in the base field.
    pub fn restrict(&self, x: &(F::Elem, F::Elem)) -> Option<F::Elem> {
        self.base.is_zero(&x.1).then(|| x.0.clone())
    }
}

impl<F: FiniteField> Ring for QuadExt<F> {
    type Elem = (F::Elem, F::Elem);

    fn zero(&self) -> Self::Elem {
        (self.base.zero(), self.base.zero())
    }

    fn one(&self) -> Self::Elem {
        (self.base.one(), self.base.zero())
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        (self.base.from_int(n), self.base.zero())
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.base.add(&a.0, &b.0), self.base.add(&a.1, &b.1))
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.base.sub(&a.0, &b.0), self.base.sub(&a.1, &b.1))
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        (self.base.neg(&a.0), self.base.neg(&a.1))
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let k = &self.base;
        let uu = k.mul(&a.0, &b.0);
        let vv = k.mul(&k.mul(&a.1, &b.1), &self.nonresidue);
        let uv = k.add(&k.mul(&a.0, &b.1), &k.mul(&a.1, &b.0));
        (k.add(&uu, &vv), uv)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.base.is_zero(&a.0) && self.base.is_zero(&a.1)
    }

    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.div(a, b).ok()
    }
}

impl<F: FiniteField> Field for QuadExt<F> {
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, ArithError> {
        let k = &self.base;
        // (u + vs)^{-1} = (u - vs) / (u² - d v²)
        let norm = k.sub(&k.square(&a.0), &k.mul(&self.nonresidue, &k.square(&a.1)));
        let ninv = k.inv(&norm)?;
        Ok((k.mul(&a.0, &ninv), k.neg(&k.mul(&a.1, &ninv))))
    }
}

impl<F: FiniteField> FiniteField for QuadExt<F> {
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    fn order(&self) -> u64 {
        self.base.order() * self.base.order()
    }

    fn element(&self, n: u64) -> Self::Elem {
        let q = self.base.order();
        (self.base.element(n % q), self.base.element(n / q))
    }

    fn index(&self, x: &Self::Elem) -> u64 {
        self.base.index(&x.0) + self.base.order() * self.base.index(&x.1)
    }
}

/// Fields up to this size take square roots by exhaustive search.
pub const SQRT_EXHAUSTIVE_LIMIT: u64 = 1 << 10;

/// Both square roots of `x`, smaller encoding first; `None` for non-squares.
/// `sqrt(0)` is `(0, 0)`.
pub fn sqrt<F: FiniteField>(field: &F, x: &F::Elem) -> Option<(F::Elem, F::Elem)> {
    if field.is_zero(x) {
        return Some((field.zero(), field.zero()));
    }
    let r = if field.order() <= SQRT_EXHAUSTIVE_LIMIT {
        field.elements().find(|r| field.square(r) == *x)?
    } else {
        tonelli_shanks(field, x)?
    };
    let s = field.neg(&r);
    if field.index(&r) <= field.index(&s) {
        Some((r, s))
    } else {
        Some((s, r))
    }
}

fn tonelli_shanks<F: FiniteField>(field: &F, x: &F::Elem) -> Option<F::Elem> {
    if field.is_zero(x) {
        return Some(field.zero());
    }
    if !field.is_square(x) {
        return None;
    }
    let q = field.order();
    let mut s = 0u32;
    let mut t = q - 1;
    while t.is_multiple_of(2) {
        t /= 2;
        s += 1;
    }
    let z = field.elements().find(|z| !field.is_square(z))?;
    let mut c = field.pow(&z, t);
    let mut r = field.pow(x, t.div_ceil(2));
    let mut u = field.pow(x, t);
    let mut m = s;
    while !field.is_one(&u) {
        let mut i = 0;
        let mut probe = u.clone();
        while !field.is_one(&probe) {
            probe = field.square(&probe);
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..m - i - 1 {
            b = field.square(&b);
        }
        r = field.mul(&r, &b);
        c = field.square(&b);
        u = field.mul(&u, &c);
        m = i;
    }
    Some(r)
}

/// A point of `P¹`: a finite field element or `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProjPoint<E> {
    Finite(E),
    Infinity,
}

impl<E> ProjPoint<E> {
    pub fn finite(&self) -> Option<&E> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }
}

/// Node label used on every wire format: the decimal encoding or `"inf"`.
pub fn node_label<F: FiniteField>(field: &F, x: &ProjPoint<F::Elem>) -> String {
    match x {
        ProjPoint::Finite(e) => field.index(e).to_string(),
        ProjPoint::Infinity => "inf".to_string(),
    }
}

/// Inverse of [`node_label`].
pub fn parse_node<F: FiniteField>(
    field: &F,
    label: &str,
) -> Result<ProjPoint<F::Elem>, FieldError> {
    if label == "inf" {
        return Ok(ProjPoint::Infinity);
    }
    let n: u64 = label
        .parse()
        .map_err(|_| FieldError::BadModulusSyntax(label.to_string()))?;
    if n >= field.order() {
        return Err(FieldError::OutOfRange(n));
    }
    Ok(ProjPoint::Finite(field.element(n)))
}

/// Serializable description of a field, used in exported artifacts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub f: usize,
    pub modulus: Vec<u64>,
}

impl From<&FieldCtx> for FieldSpec {
    fn from(ctx: &FieldCtx) -> Self {
        FieldSpec {
            p: ctx.p,
            f: ctx.f,
            modulus: ctx.modulus.clone(),
        }
    }
}

/// Fields that can describe themselves as a [`FieldSpec`].
pub trait HasSpec {
    fn spec(&self) -> FieldSpec;
}

impl HasSpec for FieldCtx {
    fn spec(&self) -> FieldSpec {
        FieldSpec::from(self)
    }
}

impl TryFrom<&FieldSpec> for FieldCtx {
    type Error = FieldError;

    fn try_from(spec: &FieldSpec) -> Result<Self, FieldError> {
        FieldCtx::new(spec.p, spec.f, &spec.modulus)
    }
}
