//! Univariate polynomials over a field and dense bivariate polynomials over `F_p`.

use thiserror::Error;

use crate::ring::{inv_mod, ArithError, Field, FiniteField, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd(0, 0) is undefined")]
    BothZero,
    #[error("characteristic mismatch: polynomial over F_{poly}, field of characteristic {field}")]
    CharMismatch { poly: u64, field: u64 },
}

impl From<ArithError> for PolyError {
    fn from(_: ArithError) -> Self {
        PolyError::DivisionByZero
    }
}

/// Dense univariate polynomial; `coeffs[i]` is the coefficient of `z^i`.
/// Normalized: the last coefficient is nonzero, the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly<E> {
    coeffs: Vec<E>,
}

impl<E> UniPoly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }
}

/// `F[z]` for a field `F`.
#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    base: F,
}

impl<F: Field> PolyRing<F> {
    pub fn new(base: F) -> Self {
        PolyRing { base }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<F::Elem>) -> UniPoly<F::Elem> {
        while coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(&self, c: F::Elem) -> UniPoly<F::Elem> {
        self.from_coeffs(vec![c])
    }

    /// `c · z^n`
    pub fn monomial(&self, c: F::Elem, n: usize) -> UniPoly<F::Elem> {
        let mut coeffs = vec![self.base.zero(); n + 1];
        coeffs[n] = c;
        self.from_coeffs(coeffs)
    }

    /// The indeterminate `z`.
    pub fn var(&self) -> UniPoly<F::Elem> {
        self.monomial(self.base.one(), 1)
    }

    /// `None` for the zero polynomial (degree −∞).
    pub fn degree(&self, a: &UniPoly<F::Elem>) -> Option<usize> {
        a.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self, a: &UniPoly<F::Elem>) -> Option<F::Elem> {
        a.coeffs.last().cloned()
    }

    /// Coefficient of `z^n` (zero beyond the degree).
    pub fn coeff(&self, a: &UniPoly<F::Elem>, n: usize) -> F::Elem {
        a.coeffs.get(n).cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn scale(&self, a: &UniPoly<F::Elem>, c: &F::Elem) -> UniPoly<F::Elem> {
        self.from_coeffs(a.coeffs.iter().map(|x| self.base.mul(x, c)).collect())
    }

    pub fn monic(&self, a: &UniPoly<F::Elem>) -> UniPoly<F::Elem> {
        match self.leading(a) {
            None => a.clone(),
            Some(lc) => self.scale(a, &self.base.inv(&lc).expect("leading coefficient is nonzero")),
        }
    }

    pub fn divmod(
        &self,
        a: &UniPoly<F::Elem>,
        b: &UniPoly<F::Elem>,
    ) -> Result<(UniPoly<F::Elem>, UniPoly<F::Elem>), PolyError> {
        let db = self.degree(b).ok_or(PolyError::DivisionByZero)?;
        let lc_inv = self.base.inv(&b.coeffs[db])?;
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return Ok((self.zero(), a.clone()));
        }
        let mut quot = vec![self.base.zero(); rem.len() - db];
        for top in (db..rem.len()).rev() {
            let c = self.base.mul(&rem[top], &lc_inv);
            if self.base.is_zero(&c) {
                continue;
            }
            let shift = top - db;
            for (i, bi) in b.coeffs.iter().enumerate() {
                rem[shift + i] = self.base.sub(&rem[shift + i], &self.base.mul(&c, bi));
            }
            quot[shift] = c;
        }
        rem.truncate(db);
        Ok((self.from_coeffs(quot), self.from_coeffs(rem)))
    }

    pub fn rem(
        &self,
        a: &UniPoly<F::Elem>,
        b: &UniPoly<F::Elem>,
    ) -> Result<UniPoly<F::Elem>, PolyError> {
        Ok(self.divmod(a, b)?.1)
    }

    /// Monic gcd by Euclid's algorithm.
    pub fn gcd(
        &self,
        a: &UniPoly<F::Elem>,
        b: &UniPoly<F::Elem>,
    ) -> Result<UniPoly<F::Elem>, PolyError> {
        if self.is_zero(a) && self.is_zero(b) {
            return Err(PolyError::BothZero);
        }
        let (mut x, mut y) = (a.clone(), b.clone());
        while !self.is_zero(&y) {
            let r = self.rem(&x, &y)?;
            x = y;
            y = r;
        }
        Ok(self.monic(&x))
    }

    /// `a^n mod m`.
    pub fn pow_mod(
        &self,
        a: &UniPoly<F::Elem>,
        mut n: u64,
        m: &UniPoly<F::Elem>,
    ) -> Result<UniPoly<F::Elem>, PolyError> {
        let mut base = self.rem(a, m)?;
        let mut acc = self.rem(&self.one(), m)?;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &base), m)?;
            }
            n >>= 1;
            if n > 0 {
                base = self.rem(&self.mul(&base, &base), m)?;
            }
        }
        Ok(acc)
    }

    /// Horner evaluation.
    pub fn eval(&self, a: &UniPoly<F::Elem>, x: &F::Elem) -> F::Elem {
        a.coeffs
            .iter()
            .rev()
            .fold(self.base.zero(), |acc, c| self.base.add(&self.base.mul(&acc, x), c))
    }

    /// Evaluates the degree-`d` homogenization `Y^d · a(X/Y)` at `(X, Y)`.
    /// Requires `deg a <= d`.
    pub fn eval_homogeneous(
        &self,
        a: &UniPoly<F::Elem>,
        d: usize,
        x: &F::Elem,
        y: &F::Elem,
    ) -> F::Elem {
        debug_assert!(self.degree(a).is_none_or(|k| k <= d));
        let mut acc = self.base.zero();
        let mut xpow = self.base.one();
        for i in 0..=d {
            let c = self.coeff(a, i);
            if !self.base.is_zero(&c) {
                let term = self.base.mul(&self.base.mul(&c, &xpow), &self.base.pow(y, (d - i) as u64));
                acc = self.base.add(&acc, &term);
            }
            xpow = self.base.mul(&xpow, x);
        }
        acc
    }

    /// `a(z^k)`.
    pub fn inflate(&self, a: &UniPoly<F::Elem>, k: usize) -> UniPoly<F::Elem> {
        if a.coeffs.is_empty() {
            return self.zero();
        }
        let mut coeffs = vec![self.base.zero(); (a.coeffs.len() - 1) * k + 1];
        for (i, c) in a.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        self.from_coeffs(coeffs)
    }
}

impl<F: Field> Ring for PolyRing<F> {
    type Elem = UniPoly<F::Elem>;

    fn zero(&self) -> Self::Elem {
        UniPoly { coeffs: vec![] }
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.constant(self.base.from_int(n))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = a.coeffs.len().max(b.coeffs.len());
        self.from_coeffs((0..n).map(|i| self.base.add(&self.coeff(a, i), &self.coeff(b, i))).collect())
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = a.coeffs.len().max(b.coeffs.len());
        self.from_coeffs((0..n).map(|i| self.base.sub(&self.coeff(a, i), &self.coeff(b, i))).collect())
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        UniPoly {
            coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect(),
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.from_coeffs(dense_mul(&self.base, &a.coeffs, &b.coeffs))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.coeffs.is_empty()
    }

    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        match self.divmod(a, b) {
            Ok((q, r)) if self.is_zero(&r) => Some(q),
            _ => None,
        }
    }
}

/// Product of two dense coefficient vectors over any ring (no normalization).
pub fn dense_mul<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Bivariate polynomials over F_p.

/// Dense polynomial in `λ` and `a` over `F_p`. `c[i * cols + j]` is the
/// coefficient of `λ^i a^j`. Normalized: no trailing zero row or column;
/// the zero polynomial has no rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiPoly {
    rows: usize,
    cols: usize,
    c: Vec<u64>,
}

impl BiPoly {
    /// `(degree in λ, degree in a)`, `None` for zero.
    pub fn degrees(&self) -> Option<(usize, usize)> {
        (self.rows > 0).then(|| (self.rows - 1, self.cols - 1))
    }

    pub fn coeff(&self, i: usize, j: usize) -> u64 {
        if i < self.rows && j < self.cols {
            self.c[i * self.cols + j]
        } else {
            0
        }
    }

    /// Nonzero terms as `(λ-degree, a-degree, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        (0..self.rows).flat_map(move |i| {
            (0..self.cols).filter_map(move |j| {
                let v = self.c[i * self.cols + j];
                (v != 0).then_some((i, j, v))
            })
        })
    }
}

/// `F_p[λ, a]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPolyRing {
    p: u64,
}

impl BiPolyRing {
    pub fn new(p: u64) -> Self {
        BiPolyRing { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn normalize(&self, rows: usize, cols: usize, c: Vec<u64>) -> BiPoly {
        let mut r = rows;
        while r > 0 && c[(r - 1) * cols..r * cols].iter().all(|&v| v == 0) {
            r -= 1;
        }
        let mut k = cols;
        while k > 0 && (0..r).all(|i| c[i * cols + k - 1] == 0) {
            k -= 1;
        }
        if r == 0 || k == 0 {
            return BiPoly { rows: 0, cols: 0, c: vec![] };
        }
        let mut out = Vec::with_capacity(r * k);
        for i in 0..r {
            out.extend_from_slice(&c[i * cols..i * cols + k]);
        }
        BiPoly { rows: r, cols: k, c: out }
    }

    /// Builds from `(λ-degree, a-degree, coefficient)` triples; coefficients
    /// are reduced mod p and repeated terms accumulate.
    pub fn from_terms(&self, terms: &[(usize, usize, i64)]) -> BiPoly {
        let rows = terms.iter().map(|t| t.0 + 1).max().unwrap_or(0);
        let cols = terms.iter().map(|t| t.1 + 1).max().unwrap_or(0);
        let mut c = vec![0u64; rows * cols];
        for &(i, j, v) in terms {
            let slot = &mut c[i * cols + j];
            *slot = (*slot + v.rem_euclid(self.p as i64) as u64) % self.p;
        }
        self.normalize(rows, cols, c)
    }

    /// `c · λ^i a^j`
    pub fn monomial(&self, c: i64, i: usize, j: usize) -> BiPoly {
        self.from_terms(&[(i, j, c)])
    }

    pub fn lambda(&self) -> BiPoly {
        self.monomial(1, 1, 0)
    }

    pub fn a(&self) -> BiPoly {
        self.monomial(1, 0, 1)
    }

    /// Evaluates at `(λ, a)` in any field of characteristic `p`.
    pub fn eval<F: FiniteField>(
        &self,
        field: &F,
        poly: &BiPoly,
        lambda: &F::Elem,
        a: &F::Elem,
    ) -> Result<F::Elem, PolyError> {
        if field.characteristic() != self.p {
            return Err(PolyError::CharMismatch {
                poly: self.p,
                field: field.characteristic(),
            });
        }
        let mut acc = field.zero();
        for i in (0..poly.rows).rev() {
            let mut row = field.zero();
            for j in (0..poly.cols).rev() {
                row = field.add(&field.mul(&row, a), &field.from_int(poly.c[i * poly.cols + j] as i64));
            }
            acc = field.add(&field.mul(&acc, lambda), &row);
        }
        Ok(acc)
    }

    /// Substitutes `a -> a^k` (used to move between `a^p` and `a`).
    pub fn inflate_a(&self, poly: &BiPoly, k: usize) -> BiPoly {
        let terms: Vec<(usize, usize, i64)> = poly.terms().map(|(i, j, v)| (i, j * k, v as i64)).collect();
        self.from_terms(&terms)
    }

    fn row(&self, poly: &BiPoly, i: usize) -> Vec<u64> {
        let mut r = poly.c[i * poly.cols..(i + 1) * poly.cols].to_vec();
        while r.last() == Some(&0) {
            r.pop();
        }
        r
    }
}

impl Ring for BiPolyRing {
    type Elem = BiPoly;

    fn zero(&self) -> BiPoly {
        BiPoly { rows: 0, cols: 0, c: vec![] }
    }

    fn one(&self) -> BiPoly {
        self.monomial(1, 0, 0)
    }

    fn from_int(&self, n: i64) -> BiPoly {
        self.monomial(n, 0, 0)
    }

    fn add(&self, a: &BiPoly, b: &BiPoly) -> BiPoly {
        let rows = a.rows.max(b.rows);
        let cols = a.cols.max(b.cols);
        let mut c = vec![0u64; rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                c[i * cols + j] = (a.coeff(i, j) + b.coeff(i, j)) % self.p;
            }
        }
        self.normalize(rows, cols, c)
    }

    fn sub(&self, a: &BiPoly, b: &BiPoly) -> BiPoly {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &BiPoly) -> BiPoly {
        BiPoly {
            rows: a.rows,
            cols: a.cols,
            c: a.c.iter().map(|&v| (self.p - v) % self.p).collect(),
        }
    }

    fn mul(&self, a: &BiPoly, b: &BiPoly) -> BiPoly {
        if a.rows == 0 || b.rows == 0 {
            return self.zero();
        }
        let p = self.p;
        let rows = a.rows + b.rows - 1;
        let cols = a.cols + b.cols - 1;
        // Accumulate unreduced products; reduce once per row pair to stay in u64.
        let mut c = vec![0u64; rows * cols];
        for i in 0..a.rows {
            for j in 0..a.cols {
                let x = a.c[i * a.cols + j];
                if x == 0 {
                    continue;
                }
                for k in 0..b.rows {
                    let base = (i + k) * cols + j;
                    let brow = &b.c[k * b.cols..(k + 1) * b.cols];
                    for (l, &y) in brow.iter().enumerate() {
                        if y != 0 {
                            let slot = &mut c[base + l];
                            *slot = (*slot + x * y) % p;
                        }
                    }
                }
            }
        }
        self.normalize(rows, cols, c)
    }

    fn is_zero(&self, a: &BiPoly) -> bool {
        a.rows == 0
    }

    /// Exact division, viewing both sides as polynomials in `λ` with
    /// coefficients in `F_p[a]`.
    fn div_exact(&self, a: &BiPoly, b: &BiPoly) -> Option<BiPoly> {
        if b.rows == 0 {
            return None;
        }
        if a.rows == 0 {
            return Some(self.zero());
        }
        if a.rows < b.rows {
            return None;
        }
        let p = self.p;
        let lead = self.row(b, b.rows - 1);
        let lead_inv = inv_mod(*lead.last()? as i64, p)?;
        let mut rem = a.clone();
        let mut quot_terms: Vec<(usize, usize, i64)> = Vec::new();
        while rem.rows >= b.rows {
            let top = self.row(&rem, rem.rows - 1);
            // univariate exact division top / lead over F_p
            if top.len() < lead.len() {
                return None;
            }
            let mut r = top.clone();
            let mut q = vec![0u64; r.len() - lead.len() + 1];
            for t in (lead.len() - 1..r.len()).rev() {
                let coef = r[t] * lead_inv % p;
                if coef == 0 {
                    continue;
                }
                let s = t + 1 - lead.len();
                for (i, &li) in lead.iter().enumerate() {
                    r[s + i] = (r[s + i] + (p - coef) * li % p) % p;
                }
                q[s] = coef;
            }
            if r.iter().any(|&v| v != 0) {
                return None;
            }
            let shift = rem.rows - b.rows;
            let qt: Vec<(usize, usize, i64)> = q
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(j, &v)| (shift, j, v as i64))
                .collect();
            let qpoly = self.from_terms(&qt);
            quot_terms.extend(qt);
            rem = self.sub(&rem, &self.mul(&qpoly, b));
        }
        if rem.rows != 0 {
            return None;
        }
        Some(self.from_terms(&quot_terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldCtx;

    fn ring(p: u64) -> (FieldCtx, PolyRing<FieldCtx>) {
        let k = FieldCtx::prime(p).unwrap();
        (k.clone(), PolyRing::new(k))
    }

    fn poly(r: &PolyRing<FieldCtx>, c: &[i64]) -> UniPoly<crate::ff::FieldElement> {
        r.from_coeffs(c.iter().map(|&x| r.base().from_int(x)).collect())
    }

    #[test]
    fn divmod_examples() {
        let (_, r) = ring(3);
        let (q, rem) = r.divmod(&poly(&r, &[-1, 0, 1]), &poly(&r, &[-1, 1])).unwrap();
        assert_eq!(q, poly(&r, &[1, 1]));
        assert!(r.is_zero(&rem));
        let x = r.var();
        assert_eq!(r.mul(&x, &x), poly(&r, &[0, 0, 1]));
        assert!(r.is_zero(&r.rem(&poly(&r, &[0, -1, 0, 1]), &poly(&r, &[-2, 1])).unwrap()));
        assert_eq!(r.divmod(&x, &r.zero()), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        let (_, r) = ring(3);
        assert_eq!(r.gcd(&poly(&r, &[-1, 0, 1]), &poly(&r, &[-1, 1])).unwrap(), poly(&r, &[-1, 1]));
        assert_eq!(r.gcd(&poly(&r, &[2, 0, 2]), &r.zero()).unwrap(), poly(&r, &[1, 0, 1]));
        assert_eq!(r.gcd(&r.zero(), &r.zero()), Err(PolyError::BothZero));

        let (_, r5) = ring(5);
        let l1 = poly(&r5, &[-1, 1]);
        let l2 = poly(&r5, &[-2, 1]);
        let a = r5.mul(&r5.mul(&l1, &l1), &l2);
        let b = r5.mul(&r5.mul(&l1, &l2), &l2);
        assert_eq!(r5.gcd(&a, &b).unwrap(), poly(&r5, &[2, 2, 1]));
    }

    #[test]
    fn eval_examples() {
        let (k, r) = ring(3);
        assert_eq!(r.eval(&poly(&r, &[1, 0, 1]), &k.from_int(2)), k.from_int(2));
        assert!(k.is_zero(&r.eval(&r.zero(), &k.from_int(1))));
        // x(x-1)(x-2) at x = 2
        let h = r.mul(&r.mul(&r.var(), &poly(&r, &[-1, 1])), &poly(&r, &[-2, 1]));
        assert!(k.is_zero(&r.eval(&h, &k.from_int(2))));
    }

    #[test]
    fn homogeneous_eval_at_infinity_reads_top_coefficient() {
        let (k, r) = ring(5);
        let a = poly(&r, &[1, 2, 3]);
        assert_eq!(r.eval_homogeneous(&a, 2, &k.one(), &k.zero()), k.from_int(3));
        assert_eq!(r.eval_homogeneous(&a, 3, &k.one(), &k.zero()), k.zero());
        assert_eq!(r.eval_homogeneous(&a, 2, &k.from_int(4), &k.one()), r.eval(&a, &k.from_int(4)));
    }

    #[test]
    fn bipoly_examples() {
        let b = BiPolyRing::new(3);
        let k = FieldCtx::prime(3).unwrap();
        let la = b.mul(&b.lambda(), &b.a());
        assert_eq!(b.eval(&k, &la, &k.from_int(2), &k.from_int(2)).unwrap(), k.one());
        assert!(k.is_zero(&b.eval(&k, &b.zero(), &k.one(), &k.one()).unwrap()));
        // δ_1 at p = 3: λ³ − λ³a³ − λ⁴ + λa³
        let d1 = b.from_terms(&[(3, 0, 1), (3, 3, -1), (4, 0, -1), (1, 3, 1)]);
        assert_eq!(b.eval(&k, &d1, &k.from_int(2), &k.from_int(1)).unwrap(), k.one());
        let k5 = FieldCtx::prime(5).unwrap();
        assert!(matches!(b.eval(&k5, &d1, &k5.one(), &k5.one()), Err(PolyError::CharMismatch { .. })));
    }

    #[test]
    fn bipoly_exact_division() {
        let b = BiPolyRing::new(7);
        let x = b.from_terms(&[(2, 1, 3), (0, 3, 1), (1, 0, 5)]);
        let y = b.from_terms(&[(1, 1, 2), (0, 0, 1), (3, 0, 6)]);
        let xy = b.mul(&x, &y);
        assert_eq!(b.div_exact(&xy, &y), Some(x.clone()));
        assert_eq!(b.div_exact(&xy, &x), Some(y.clone()));
        assert_eq!(b.div_exact(&b.add(&xy, &b.one()), &x), None);
        assert_eq!(b.div_exact(&x, &b.zero()), None);
    }
}
