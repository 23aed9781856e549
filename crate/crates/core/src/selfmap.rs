//! The self-map `φ_{λ,p}` of `P¹` for the four marked points `{0, 1, ∞, λ}`.
//!
//! Two constructions are provided and cross-checked in the tests:
//!
//! * pointwise: `φ(a) = a^p / λ^{p-1} · (det A_{m+1} / det A_p)²`, where `A` is the
//!   `m × (m+1)` Toeplitz matrix of the `δ_n(λ, a)` and `A_i` drops one column;
//! * as a rational map `z^p f(z^p)² / (λ^{p-1} g(z^p)²)` with `f`, `g` the
//!   Hankel determinants of the same `δ_n` read with `a = z`, reduced to lowest
//!   terms.
//!
//! Matrix builders are generic over the entry ring so that the same code yields
//! numeric matrices over `F_q`, polynomial matrices over `F_q[z]` and symbolic
//! matrices over `F_p[λ, a]`.

use std::sync::OnceLock;

use thiserror::Error;

use crate::ff::ProjPoint;
use crate::matrix::{det_field, det_ring, kernel_cofactors, Matrix, MatrixError};
use crate::poly::{BiPoly, BiPolyRing, PolyError, PolyRing, UniPoly};
use crate::ring::{inv_mod, Field, FiniteField, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelfMapError {
    #[error("λ must avoid 0 and 1")]
    DegenerateLambda,
    #[error("index {index} outside {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },
    #[error("no closed form is transcribed for p = {0}")]
    UnsupportedPrime(u64),
    #[error("rational map has vanishing numerator and denominator at a point")]
    Internal,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `m = (p-1)/2`
pub fn half(p: u64) -> usize {
    ((p - 1) / 2) as usize
}

/// `δ_n = (λ^p(1 - a^p) - (λ^p - a^p) λ^n) / n`, given `λ` and `a^p` in `ring`.
/// Defined for `1 <= n <= p-1`.
pub fn delta_in<R: Ring>(
    ring: &R,
    p: u64,
    lambda: &R::Elem,
    ap: &R::Elem,
    n: usize,
) -> Result<R::Elem, SelfMapError> {
    if n == 0 || n as u64 >= p {
        return Err(SelfMapError::IndexOutOfRange { index: n, lo: 1, hi: p as usize - 1 });
    }
    Ok(delta_seq(ring, p, lambda, ap).swap_remove(n - 1))
}

/// `[δ_1, .., δ_{p-1}]`.
pub fn delta_seq<R: Ring>(ring: &R, p: u64, lambda: &R::Elem, ap: &R::Elem) -> Vec<R::Elem> {
    let lp = ring.pow(lambda, p);
    let first = ring.mul(&lp, &ring.sub(&ring.one(), ap));
    let diff = ring.sub(&lp, ap);
    let mut lpow = lambda.clone();
    let mut out = Vec::with_capacity(p as usize - 1);
    for n in 1..p {
        let ninv = inv_mod(n as i64, p).expect("1 <= n < p");
        let num = ring.sub(&first, &ring.mul(&diff, &lpow));
        out.push(ring.mul(&num, &ring.from_int(ninv as i64)));
        lpow = ring.mul(&lpow, lambda);
    }
    out
}

/// The `m × (m+1)` matrix `A`: row `r` (from the top, 0-indexed), column `c`
/// holds `δ_{m-r+c}`, so the top row is `δ_m..δ_{p-1}` and the bottom row
/// `δ_1..δ_{m+1}`.
pub fn a_matrix<E: Clone>(p: u64, deltas: &[E]) -> Matrix<E> {
    let m = half(p);
    Matrix::from_fn(m, m + 1, |r, c| deltas[m - r + c - 1].clone())
}

/// `A_i` for `m+1 <= i <= p`: `A` without its `(i-m)`-th column (1-indexed).
pub fn a_sub_matrix<E: Clone>(a: &Matrix<E>, p: u64, i: usize) -> Result<Matrix<E>, SelfMapError> {
    let m = half(p);
    if i < m + 1 || i > p as usize {
        return Err(SelfMapError::IndexOutOfRange { index: i, lo: m + 1, hi: p as usize });
    }
    Ok(a.remove_col(i - m - 1))
}

/// Symbolic `δ_n` in `F_p[λ, a]`.
pub fn delta_bipoly(p: u64, n: usize) -> Result<BiPoly, SelfMapError> {
    let ring = BiPolyRing::new(p);
    let ap = ring.monomial(1, 0, p as usize);
    delta_in(&ring, p, &ring.lambda(), &ap, n)
}

/// Symbolic `δ_1..δ_{p-1}` in `F_p[λ, u]` with `u` standing for `a^p`.
/// Substituting `u -> a^p` ([`BiPolyRing::inflate_a`]) recovers the `(λ, a)` form.
pub fn delta_seq_in_ap(p: u64) -> Vec<BiPoly> {
    let ring = BiPolyRing::new(p);
    delta_seq(&ring, p, &ring.lambda(), &ring.a())
}

/// Reduced rational function `num / den` in one variable, viewed as a map of `P¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap<E> {
    pub num: UniPoly<E>,
    pub den: UniPoly<E>,
}

/// Fixed points of a rational map on `P¹`, counted with multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixedPointCount {
    /// `deg(num - z·den)`: the finite fixed points.
    pub affine: usize,
    /// Multiplicity of `∞` as a root of `X·D(X,Y) - Y·N(X,Y)`.
    pub at_infinity: usize,
}

impl FixedPointCount {
    pub fn total(&self) -> usize {
        self.affine + self.at_infinity
    }
}

impl<E: Clone + PartialEq + Eq + std::fmt::Debug + Send + Sync> RationalMap<E> {
    /// Divides out the gcd and makes the denominator monic.
    pub fn reduced<F: Field<Elem = E>>(
        ring: &PolyRing<F>,
        num: UniPoly<E>,
        den: UniPoly<E>,
    ) -> Result<Self, PolyError> {
        if ring.is_zero(&den) {
            return Err(PolyError::DivisionByZero);
        }
        let g = ring.gcd(&num, &den)?;
        let num = ring.div_exact(&num, &g).expect("gcd divides numerator");
        let den = ring.div_exact(&den, &g).expect("gcd divides denominator");
        let lc = ring.leading(&den).expect("nonzero denominator");
        let lc_inv = ring.base().inv(&lc)?;
        Ok(RationalMap {
            num: ring.scale(&num, &lc_inv),
            den: ring.scale(&den, &lc_inv),
        })
    }

    pub fn degree<F: Field<Elem = E>>(&self, ring: &PolyRing<F>) -> usize {
        ring.degree(&self.num)
            .unwrap_or(0)
            .max(ring.degree(&self.den).unwrap_or(0))
    }

    /// Projective evaluation `[X : Y] -> [N(X,Y) : D(X,Y)]` with both sides
    /// homogenized to the map's degree.
    pub fn eval<F: Field<Elem = E>>(
        &self,
        ring: &PolyRing<F>,
        x: &ProjPoint<E>,
    ) -> Result<ProjPoint<E>, SelfMapError> {
        let k = ring.base();
        let d = self.degree(ring);
        let (hx, hy) = match x {
            ProjPoint::Finite(v) => (v.clone(), k.one()),
            ProjPoint::Infinity => (k.one(), k.zero()),
        };
        let n = ring.eval_homogeneous(&self.num, d, &hx, &hy);
        let dd = ring.eval_homogeneous(&self.den, d, &hx, &hy);
        if !k.is_zero(&dd) {
            Ok(ProjPoint::Finite(k.div(&n, &dd).expect("nonzero")))
        } else if !k.is_zero(&n) {
            Ok(ProjPoint::Infinity)
        } else {
            Err(SelfMapError::Internal)
        }
    }

    /// Coefficients (in `X`, ascending) of the binary form `X·D(X,Y) - Y·N(X,Y)`
    /// of degree `deg + 1`, whose roots on `P¹` are the fixed points.
    pub fn fixed_point_form<F: Field<Elem = E>>(&self, ring: &PolyRing<F>) -> Vec<E> {
        let k = ring.base();
        let d = self.degree(ring);
        (0..=d + 1)
            .map(|i| {
                let dterm = if i == 0 { k.zero() } else { ring.coeff(&self.den, i - 1) };
                k.sub(&dterm, &ring.coeff(&self.num, i))
            })
            .collect()
    }

    pub fn fixed_points<F: Field<Elem = E>>(&self, ring: &PolyRing<F>) -> FixedPointCount {
        let k = ring.base();
        let form = self.fixed_point_form(ring);
        let top = form.iter().rposition(|c| !k.is_zero(c)).unwrap_or(0);
        let affine_poly = ring.sub(&self.num, &ring.mul(&ring.var(), &self.den));
        debug_assert_eq!(ring.degree(&affine_poly), Some(top));
        FixedPointCount {
            affine: top,
            at_infinity: form.len() - 1 - top,
        }
    }
}

/// `φ_{λ,p}` over a finite field `F` of characteristic `p`.
#[derive(Clone, Debug)]
pub struct SelfMapCtx<F: FiniteField> {
    field: F,
    lambda: F::Elem,
    p: u64,
    rational: OnceLock<RationalMap<F::Elem>>,
}

impl<F: FiniteField> SelfMapCtx<F> {
    pub fn new(field: F, lambda: F::Elem) -> Result<Self, SelfMapError> {
        if field.is_zero(&lambda) || field.is_one(&lambda) {
            return Err(SelfMapError::DegenerateLambda);
        }
        let p = field.characteristic();
        Ok(SelfMapCtx {
            field,
            lambda,
            p,
            rational: OnceLock::new(),
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn lambda(&self) -> &F::Elem {
        &self.lambda
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> usize {
        half(self.p)
    }

    pub fn delta(&self, a: &F::Elem, n: usize) -> Result<F::Elem, SelfMapError> {
        let ap = self.field.pow(a, self.p);
        delta_in(&self.field, self.p, &self.lambda, &ap, n)
    }

    pub fn build_a(&self, a: &F::Elem) -> Matrix<F::Elem> {
        let ap = self.field.pow(a, self.p);
        a_matrix(self.p, &delta_seq(&self.field, self.p, &self.lambda, &ap))
    }

    pub fn build_a_i(&self, a: &F::Elem, i: usize) -> Result<Matrix<F::Elem>, SelfMapError> {
        a_sub_matrix(&self.build_a(a), self.p, i)
    }

    /// `(α_{m+1}, .., α_p)` with `α_i = (-1)^i det A_i`.
    pub fn alpha_vector(&self, a: &F::Elem) -> Vec<F::Elem> {
        let m = self.m();
        let amat = self.build_a(a);
        (m + 1..=self.p as usize)
            .map(|i| {
                let sub = a_sub_matrix(&amat, self.p, i).expect("index in range");
                let d = det_field(&self.field, &sub).expect("square");
                if i % 2 == 0 { d } else { self.field.neg(&d) }
            })
            .collect()
    }

    /// `(det A_{m+1}, det A_p)` at `a`.
    fn endpoint_dets(&self, a: &F::Elem) -> (F::Elem, F::Elem) {
        let amat = self.build_a(a);
        let first = det_field(&self.field, &amat.remove_col(0)).expect("square");
        let last = det_field(&self.field, &amat.remove_col(self.m())).expect("square");
        (first, last)
    }

    /// `φ(a)` for any point of `P¹`. Uses the determinant formula whenever
    /// `det A_p(λ, a) ≠ 0`, and the reduced rational map otherwise.
    pub fn eval(&self, x: &ProjPoint<F::Elem>) -> Result<ProjPoint<F::Elem>, SelfMapError> {
        if let ProjPoint::Finite(a) = x {
            let k = &self.field;
            let (num, den) = self.endpoint_dets(a);
            if !k.is_zero(&den) {
                let ratio = k.div(&num, &den).expect("nonzero");
                let scale = k.div(&k.pow(a, self.p), &k.pow(&self.lambda, self.p - 1)).expect("λ ≠ 0");
                return Ok(ProjPoint::Finite(k.mul(&scale, &k.square(&ratio))));
            }
            log::debug!(
                "det A_p vanishes at a = {} (λ = {}); using the reduced rational map",
                k.index(a),
                k.index(&self.lambda)
            );
        }
        let ring = PolyRing::new(self.field.clone());
        self.rational().eval(&ring, x)
    }

    /// The reduced rational map, built once per context.
    pub fn rational(&self) -> &RationalMap<F::Elem> {
        self.rational.get_or_init(|| self.build_rational().expect("construction cannot fail for λ ∉ {0,1}"))
    }

    /// `z^p f(z^p)² / (λ^{p-1} g(z^p)²)` with `f`, `g` the Hankel determinants
    /// `det(δ_{2+r+c})` and `det(δ_{1+r+c})`, reduced.
    pub fn build_rational(&self) -> Result<RationalMap<F::Elem>, SelfMapError> {
        let k = &self.field;
        let ring = PolyRing::new(k.clone());
        let p = self.p;
        let m = self.m();
        let zp = ring.monomial(k.one(), p as usize);
        let lam = ring.constant(self.lambda.clone());
        let deltas = delta_seq(&ring, p, &lam, &zp);
        let fmat = Matrix::from_fn(m, m, |r, c| deltas[1 + r + c].clone());
        let gmat = Matrix::from_fn(m, m, |r, c| deltas[r + c].clone());
        let f = det_ring(&ring, &fmat)?;
        let g = det_ring(&ring, &gmat)?;
        let num = ring.mul(&zp, &ring.square(&f));
        let den = ring.scale(&ring.square(&g), &k.pow(&self.lambda, p - 1));
        Ok(RationalMap::reduced(&ring, num, den)?)
    }

    /// `P_θ'(t) = α_p²/(λ-1) · t - α_{m+1}²/(λ-1) · a^p/λ^{p-1}`.
    pub fn grading_polynomial(&self, a: &F::Elem) -> UniPoly<F::Elem> {
        let k = &self.field;
        let alpha = self.alpha_vector(a);
        let lm1 = k.inv(&k.sub(&self.lambda, &k.one())).expect("λ ≠ 1");
        let lead = k.mul(&k.square(alpha.last().unwrap()), &lm1);
        let scale = k.div(&k.pow(a, self.p), &k.pow(&self.lambda, self.p - 1)).expect("λ ≠ 0");
        let constant = k.neg(&k.mul(&k.mul(&k.square(&alpha[0]), &lm1), &scale));
        PolyRing::new(k.clone()).from_coeffs(vec![constant, lead])
    }
}

/// Transcription of the displayed closed forms of `φ_{λ,p}` for `p ∈ {3, 5, 7}`, reduced.
pub fn closed_form<F: FiniteField>(
    field: &F,
    lambda: &F::Elem,
) -> Result<RationalMap<F::Elem>, SelfMapError> {
    let k = field;
    let p = k.characteristic();
    if k.is_zero(lambda) || k.is_one(lambda) {
        return Err(SelfMapError::DegenerateLambda);
    }
    let ring = PolyRing::new(k.clone());
    let l = lambda;
    let int = |n: i64| k.from_int(n);
    let lp = |n: u64| k.pow(l, n);
    let prod = |xs: &[F::Elem]| k.product(xs.iter());
    let l_plus_1 = k.add(l, &k.one());
    // λ² - λ + 1, λ² + λ + 1, λ² + 3λ + 1, λ² + 1
    let q_minus = k.add(&k.sub(&lp(2), l), &k.one());
    let q_plus = k.add(&k.add(&lp(2), l), &k.one());
    let q_three = k.add(&k.add(&lp(2), &k.mul(&int(3), l)), &k.one());
    let q_one = k.add(&lp(2), &k.one());
    // polynomial in w = z^p, given ascending coefficients
    let in_zp = |cs: Vec<F::Elem>| ring.inflate(&ring.from_coeffs(cs), p as usize);
    let (n, d) = match p {
        3 => (
            in_zp(vec![k.mul(l, &l_plus_1), k.one()]),
            in_zp(vec![lp(2), l_plus_1.clone()]),
        ),
        5 => (
            in_zp(vec![
                k.mul(&lp(4), &q_minus),
                k.neg(&prod(&[l.clone(), l_plus_1.clone(), q_minus.clone()])),
                k.one(),
            ]),
            in_zp(vec![
                lp(6),
                k.neg(&prod(&[lp(2), l_plus_1.clone(), q_minus.clone()])),
                q_minus.clone(),
            ]),
        ),
        7 => (
            in_zp(vec![
                prod(&[lp(9), l_plus_1.clone(), q_plus.clone()]),
                prod(&[lp(4), k.square(&l_plus_1), q_plus.clone(), q_one.clone()]),
                prod(&[int(2), l.clone(), l_plus_1.clone(), q_plus.clone(), q_three.clone()]),
                k.one(),
            ]),
            in_zp(vec![
                lp(12),
                prod(&[int(2), lp(6), l_plus_1.clone(), q_plus.clone(), q_three.clone()]),
                prod(&[lp(2), k.square(&l_plus_1), q_plus.clone(), q_one.clone()]),
                k.mul(&l_plus_1, &q_plus),
            ]),
        ),
        other => return Err(SelfMapError::UnsupportedPrime(other)),
    };
    let zp = ring.monomial(k.one(), p as usize);
    let num = ring.mul(&zp, &ring.square(&n));
    let den = ring.square(&d);
    Ok(RationalMap::reduced(&ring, num, den)?)
}

/// Symbolic `A·α` over `F_p[λ, u]`, `u = a^p`; the zero vector when the kernel identity holds.
pub fn symbolic_kernel_residual(p: u64) -> Result<Vec<BiPoly>, SelfMapError> {
    let ring = BiPolyRing::new(p);
    let a = a_matrix(p, &delta_seq_in_ap(p));
    let v = kernel_cofactors(&ring, &a)?;
    Ok(crate::matrix::mat_vec(&ring, &a, &v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldCtx;

    #[test]
    fn delta_examples() {
        let k = FieldCtx::prime(3).unwrap();
        let s = SelfMapCtx::new(k.clone(), k.from_int(2)).unwrap();
        assert_eq!(s.delta(&k.one(), 1).unwrap(), k.one());
        assert!(matches!(s.delta(&k.one(), 3), Err(SelfMapError::IndexOutOfRange { .. })));
        assert!(matches!(s.delta(&k.one(), 0), Err(SelfMapError::IndexOutOfRange { .. })));

        let b = BiPolyRing::new(3);
        let expect = b.from_terms(&[(3, 0, 1), (3, 3, -1), (4, 0, -1), (1, 3, 1)]);
        assert_eq!(delta_bipoly(3, 1).unwrap(), expect);
    }

    #[test]
    fn delta_at_a_equals_lambda() {
        let k = FieldCtx::paper_f81();
        let lam = k.element(6);
        let s = SelfMapCtx::new(k.clone(), lam.clone()).unwrap();
        let lp = k.pow(&lam, 3);
        let base = k.mul(&lp, &k.sub(&k.one(), &lp));
        assert_eq!(s.delta(&lam, 1).unwrap(), base);
        assert_eq!(s.delta(&lam, 2).unwrap(), k.div(&base, &k.from_int(2)).unwrap());
    }

    #[test]
    fn a_matrix_layout() {
        let labels: Vec<usize> = (1..=4).collect();
        let a = a_matrix(5, &labels);
        assert_eq!(a.row(0), &[2, 3, 4]);
        assert_eq!(a.row(1), &[1, 2, 3]);
        let a3 = a_matrix(3, &labels[..2]);
        assert_eq!(a3.row(0), &[1, 2]);
        assert_eq!(a_sub_matrix(&a3, 3, 2).unwrap().row(0), &[2]);
        assert_eq!(a_sub_matrix(&a3, 3, 3).unwrap().row(0), &[1]);
        assert!(a_sub_matrix(&a3, 3, 1).is_err());
        assert!(a_sub_matrix(&a3, 3, 4).is_err());
        let a7 = a_matrix(7, &(1..=6).collect::<Vec<_>>());
        let first_removed = a_sub_matrix(&a7, 7, 4).unwrap();
        for r in 0..3 {
            assert_eq!(first_removed.row(r), &a7.row(r)[1..]);
        }
    }

    #[test]
    fn alpha_small_case() {
        let k = FieldCtx::prime(3).unwrap();
        let s = SelfMapCtx::new(k.clone(), k.from_int(2)).unwrap();
        // λ = 2, a = 0: δ_1 = 1, δ_2 = 0
        assert_eq!(s.alpha_vector(&k.zero()), vec![k.zero(), k.from_int(-1)]);
        let a = k.one();
        let d1 = s.delta(&a, 1).unwrap();
        let d2 = s.delta(&a, 2).unwrap();
        assert_eq!(s.alpha_vector(&a), vec![d2, k.neg(&d1)]);
    }

    #[test]
    fn minus_one_is_frobenius_squared() {
        let k = FieldCtx::prime(3).unwrap();
        let s = SelfMapCtx::new(k.clone(), k.from_int(2)).unwrap();
        let ring = PolyRing::new(k.clone());
        assert_eq!(s.rational().num, ring.monomial(k.one(), 9));
        assert!(ring.is_one(&s.rational().den));
        assert_eq!(s.eval(&ProjPoint::Finite(k.from_int(2))).unwrap(), ProjPoint::Finite(k.from_int(2)));
    }

    #[test]
    fn zero_and_infinity_are_fixed() {
        let k = FieldCtx::paper_f81();
        for l in [5u64, 6, 11, 40] {
            let s = SelfMapCtx::new(k.clone(), k.element(l)).unwrap();
            assert_eq!(s.eval(&ProjPoint::Finite(k.zero())).unwrap(), ProjPoint::Finite(k.zero()));
            assert_eq!(s.eval(&ProjPoint::Infinity).unwrap(), ProjPoint::Infinity);
        }
    }

    #[test]
    fn first_diagram_edges() {
        let k = FieldCtx::paper_f81();
        let s = SelfMapCtx::new(k.clone(), k.element(6)).unwrap();
        assert_eq!(s.eval(&ProjPoint::Finite(k.element(27))).unwrap(), ProjPoint::Finite(k.element(6)));
        assert_eq!(s.eval(&ProjPoint::Finite(k.element(6))).unwrap(), ProjPoint::Finite(k.element(6)));
    }

    #[test]
    fn degenerate_lambda_rejected() {
        let k = FieldCtx::prime(5).unwrap();
        assert!(matches!(SelfMapCtx::new(k.clone(), k.zero()), Err(SelfMapError::DegenerateLambda)));
        assert!(matches!(SelfMapCtx::new(k.clone(), k.one()), Err(SelfMapError::DegenerateLambda)));
        assert!(matches!(closed_form(&k, &k.one()), Err(SelfMapError::DegenerateLambda)));
        let k11 = FieldCtx::prime(11).unwrap();
        assert!(matches!(closed_form(&k11, &k11.from_int(2)), Err(SelfMapError::UnsupportedPrime(11))));
    }

    #[test]
    fn grading_polynomial_root_at_zero() {
        let k = FieldCtx::paper_f81();
        let s = SelfMapCtx::new(k.clone(), k.element(11)).unwrap();
        let pt = s.grading_polynomial(&k.zero());
        let ring = PolyRing::new(k.clone());
        assert!(k.is_zero(&ring.coeff(&pt, 0)));
        // λ = 2 over F_3, a = 2: root is 2⁹ = 2
        let f3 = FieldCtx::prime(3).unwrap();
        let s3 = SelfMapCtx::new(f3.clone(), f3.from_int(2)).unwrap();
        let pt = s3.grading_polynomial(&f3.from_int(2));
        let r3 = PolyRing::new(f3.clone());
        let root = f3.neg(&f3.div(&r3.coeff(&pt, 0), &r3.coeff(&pt, 1)).unwrap());
        assert_eq!(root, f3.from_int(2));
    }

    #[test]
    fn symbolic_kernel_small() {
        for p in [3, 5] {
            assert!(symbolic_kernel_residual(p).unwrap().iter().all(|x| x.degrees().is_none()));
        }
    }
}
