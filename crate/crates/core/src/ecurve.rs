//! Legendre curves `y² = x(x-1)(x-λ)`: chord-tangent group law, scalar
//! multiplication, and the determinant formula for `x([p]Q)` built from the
//! coefficients `γ_n` of `(x(x-1)(x-λ))^m`.

use serde::Serialize;
use thiserror::Error;

use crate::ff::{sqrt, ProjPoint, QuadExt};
use crate::matrix::{det_field, kernel_cofactors, Matrix, MatrixError};
use crate::poly::{dense_mul, PolyRing, UniPoly};
use crate::ring::{FiniteField, Ring};
use crate::selfmap::half;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EcError {
    #[error("λ must avoid 0 and 1")]
    DegenerateLambda,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("base point x = {0} lies in {{0, 1, λ}}")]
    DegenerateBasePoint(u64),
    #[error("det B_0 and det B_(m+1) both vanish at x = {0}")]
    Indeterminate(u64),
    #[error("f·(x(x-1)(x-λ))^m is not congruent to a polynomial of degree < m")]
    SignResolutionFailed,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint<E> {
    Infinity,
    Affine(E, E),
}

impl<E: Clone> CurvePoint<E> {
    /// `π(x, y) = x`, `π(O) = ∞`.
    pub fn project(&self) -> ProjPoint<E> {
        match self {
            CurvePoint::Infinity => ProjPoint::Infinity,
            CurvePoint::Affine(x, _) => ProjPoint::Finite(x.clone()),
        }
    }
}

/// Binomial coefficient as an integer (`n` is at most `m < p`).
fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `γ_m..γ_{3m}` from `γ_n = (-1)^{m+n} Σ_{i+j=n-m} C(m,i) C(m,j) λ^{m-j}`.
pub fn gamma_closed<R: Ring>(ring: &R, p: u64, lambda: &R::Elem) -> Vec<R::Elem> {
    let m = half(p);
    let lpow: Vec<R::Elem> = (0..=m).map(|e| ring.pow(lambda, e as u64)).collect();
    (m..=3 * m)
        .map(|n| {
            let s = n - m;
            let mut acc = ring.zero();
            for i in s.saturating_sub(m)..=s.min(m) {
                let j = s - i;
                let c = ring.from_int(binomial(m, i) * binomial(m, j));
                acc = ring.add(&acc, &ring.mul(&c, &lpow[m - j]));
            }
            if (m + n) % 2 == 1 {
                ring.neg(&acc)
            } else {
                acc
            }
        })
        .collect()
}

/// `γ_m..γ_{3m}` by expanding `(x(x-1)(x-λ))^m` directly.
pub fn gamma_by_expansion<R: Ring>(ring: &R, p: u64, lambda: &R::Elem) -> Vec<R::Elem> {
    let m = half(p);
    let cubic = vec![
        ring.zero(),
        lambda.clone(),
        ring.neg(&ring.add(&ring.one(), lambda)),
        ring.one(),
    ];
    let mut acc = vec![ring.one()];
    for _ in 0..m {
        acc = dense_mul(ring, &acc, &cubic);
    }
    acc.into_iter().skip(m).collect()
}

/// The `(m+1) × (m+2)` matrix `B`: entry `(r, c)` is `γ_{m+r-c}` on and below
/// the diagonal and `a^p γ_{m+p+r-c}` above it. `gammas[k]` holds `γ_{m+k}`.
pub fn b_matrix<R: Ring>(ring: &R, p: u64, gammas: &[R::Elem], ap: &R::Elem) -> Matrix<R::Elem> {
    let m = half(p);
    Matrix::from_fn(m + 1, m + 2, |r, c| {
        if r >= c {
            gammas[r - c].clone()
        } else {
            ring.mul(ap, &gammas[p as usize + r - c])
        }
    })
}

/// Verdict of the `(x-a)^p (x-a_p) = f² - x(x-1)(x-λ) g²` reconstruction.
#[derive(Clone, Debug)]
pub struct Factorization<E> {
    pub f: UniPoly<E>,
    pub g: UniPoly<E>,
    pub ap: ProjPoint<E>,
    /// `(f² - h g²)/lc - (x-a)^p (x-a_p)`; zero when the identity holds.
    pub residual: UniPoly<E>,
}

/// Result of lifting an x-coordinate to the curve.
#[derive(Clone, Debug)]
pub enum Lift<F: FiniteField> {
    /// Points with coordinates in the base field.
    Rational(Vec<CurvePoint<F::Elem>>),
    /// `y` only exists in the quadratic extension.
    Quadratic {
        curve: Curve<QuadExt<F>>,
        points: Vec<CurvePoint<(F::Elem, F::Elem)>>,
    },
}

/// `x([n]Q)` for a point `Q` whose lift may need the quadratic extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XImage<E> {
    /// The value lies in the base field (or is `∞`).
    Base(ProjPoint<E>),
    /// Encoding of a value outside the base field, in `F[s]/(s² - d)`.
    Extension(u64),
}

impl<E> XImage<E> {
    pub fn base(&self) -> Option<&ProjPoint<E>> {
        match self {
            XImage::Base(x) => Some(x),
            XImage::Extension(_) => None,
        }
    }
}

/// Summary of a point order computation, for reports.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TorsionInfo {
    pub order: u64,
    pub coprime_to_p: bool,
}

/// `C_λ: y² = x(x-1)(x-λ)` over `F`.
#[derive(Clone, Debug)]
pub struct Curve<F: FiniteField> {
    field: F,
    lambda: F::Elem,
    p: u64,
}

impl<F: FiniteField> Curve<F> {
    pub fn new(field: F, lambda: F::Elem) -> Result<Self, EcError> {
        if field.is_zero(&lambda) || field.is_one(&lambda) {
            return Err(EcError::DegenerateLambda);
        }
        let p = field.characteristic();
        Ok(Curve { field, lambda, p })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn lambda(&self) -> &F::Elem {
        &self.lambda
    }

    /// `x(x-1)(x-λ)`
    pub fn rhs(&self, x: &F::Elem) -> F::Elem {
        let k = &self.field;
        k.mul(&k.mul(x, &k.sub(x, &k.one())), &k.sub(x, &self.lambda))
    }

    pub fn contains(&self, pt: &CurvePoint<F::Elem>) -> bool {
        match pt {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => self.field.square(y) == self.rhs(x),
        }
    }

    fn check(&self, pt: &CurvePoint<F::Elem>) -> Result<(), EcError> {
        if self.contains(pt) {
            Ok(())
        } else {
            Err(EcError::PointNotOnCurve)
        }
    }

    pub fn neg(&self, pt: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        match pt {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(x.clone(), self.field.neg(y)),
        }
    }

    pub fn add(
        &self,
        a: &CurvePoint<F::Elem>,
        b: &CurvePoint<F::Elem>,
    ) -> Result<CurvePoint<F::Elem>, EcError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    fn add_unchecked(&self, a: &CurvePoint<F::Elem>, b: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        let k = &self.field;
        let (x1, y1, x2, y2) = match (a, b) {
            (CurvePoint::Infinity, _) => return b.clone(),
            (_, CurvePoint::Infinity) => return a.clone(),
            (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if k.is_zero(&k.add(y1, y2)) {
                return CurvePoint::Infinity;
            }
            // (3x² - 2(1+λ)x + λ) / (2y)
            let x_sq = k.square(x1);
            let num = k.add(
                &k.sub(&k.mul(&k.from_int(3), &x_sq), &k.mul(&k.mul(&k.from_int(2), &k.add(&k.one(), &self.lambda)), x1)),
                &self.lambda,
            );
            k.div(&num, &k.mul(&k.from_int(2), y1)).expect("y ≠ 0")
        } else {
            k.div(&k.sub(y2, y1), &k.sub(x2, x1)).expect("x1 ≠ x2")
        };
        // x3 = s² + (1+λ) - x1 - x2
        let x3 = k.sub(
            &k.sub(&k.add(&k.square(&slope), &k.add(&k.one(), &self.lambda)), x1),
            x2,
        );
        let y3 = k.sub(&k.mul(&slope, &k.sub(x1, &x3)), y1);
        CurvePoint::Affine(x3, y3)
    }

    /// `[n]P` by double-and-add.
    pub fn mul(&self, n: u64, pt: &CurvePoint<F::Elem>) -> Result<CurvePoint<F::Elem>, EcError> {
        self.check(pt)?;
        let mut acc = CurvePoint::Infinity;
        let mut base = pt.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.add_unchecked(&base, &base);
            }
        }
        Ok(acc)
    }

    pub fn mul_signed(&self, n: i64, pt: &CurvePoint<F::Elem>) -> Result<CurvePoint<F::Elem>, EcError> {
        let r = self.mul(n.unsigned_abs(), pt)?;
        Ok(if n < 0 { self.neg(&r) } else { r })
    }

    /// `γ_m..γ_{3m}` at this `λ`; closed form, checked against direct expansion.
    pub fn gamma_table(&self) -> Vec<F::Elem> {
        let closed = gamma_closed(&self.field, self.p, &self.lambda);
        assert_eq!(
            closed,
            gamma_by_expansion(&self.field, self.p, &self.lambda),
            "γ closed form disagrees with expansion"
        );
        closed
    }

    fn check_base(&self, a: &F::Elem) -> Result<(), EcError> {
        let k = &self.field;
        if k.is_zero(a) || k.is_one(a) || *a == self.lambda {
            return Err(EcError::DegenerateBasePoint(k.index(a)));
        }
        Ok(())
    }

    pub fn build_b(&self, a: &F::Elem) -> Result<Matrix<F::Elem>, EcError> {
        self.check_base(a)?;
        let ap = self.field.pow(a, self.p);
        Ok(b_matrix(&self.field, self.p, &self.gamma_table(), &ap))
    }

    /// `(det B_0, det B_{m+1})`
    pub fn b_endpoint_dets(&self, a: &F::Elem) -> Result<(F::Elem, F::Elem), EcError> {
        let b = self.build_b(a)?;
        let m = half(self.p);
        Ok((
            det_field(&self.field, &b.remove_col(0))?,
            det_field(&self.field, &b.remove_col(m + 1))?,
        ))
    }

    /// `x([p]Q) = (1/a^p) (det B_0 / det B_{m+1})²` for `Q = (a, ±b)`;
    /// `∞` when only `det B_{m+1}` vanishes.
    pub fn xp_via_determinant(&self, a: &F::Elem) -> Result<ProjPoint<F::Elem>, EcError> {
        let k = &self.field;
        let (d0, dl) = self.b_endpoint_dets(a)?;
        if k.is_zero(&dl) {
            if k.is_zero(&d0) {
                log::warn!("det B_0 = det B_(m+1) = 0 at x = {}", k.index(a));
                return Err(EcError::Indeterminate(k.index(a)));
            }
            return Ok(ProjPoint::Infinity);
        }
        let ratio = k.div(&d0, &dl).expect("nonzero");
        let ap_inv = k.inv(&k.pow(a, self.p)).expect("a ≠ 0");
        Ok(ProjPoint::Finite(k.mul(&ap_inv, &k.square(&ratio))))
    }

    /// `β_i = (-1)^i det(B without column i)`, `i = 0..=m+1`.
    pub fn beta_vector(&self, a: &F::Elem) -> Result<Vec<F::Elem>, EcError> {
        Ok(kernel_cofactors(&self.field, &self.build_b(a)?)?)
    }

    /// Rebuilds `f = Σ β_i x^i` and `g` from `f·h^m ≡ ±b^p g (mod (x-a)^p)`
    /// and compares `f² - h g²` (made monic) with `(x-a)^p (x-a_p)`.
    pub fn factorization_check(&self, q: &CurvePoint<F::Elem>) -> Result<Factorization<F::Elem>, EcError> {
        self.check(q)?;
        let CurvePoint::Affine(a, b) = q else {
            return Err(EcError::DegenerateBasePoint(0));
        };
        self.check_base(a)?;
        let k = &self.field;
        let ring = PolyRing::new(k.clone());
        let m = half(self.p);
        let p = self.p as usize;

        let f = ring.from_coeffs(self.beta_vector(a)?);
        let h = ring.from_coeffs(vec![
            k.zero(),
            self.lambda.clone(),
            k.neg(&k.add(&k.one(), &self.lambda)),
            k.one(),
        ]);
        // (x - a)^p = x^p - a^p in characteristic p
        let xa_p = ring.sub(&ring.monomial(k.one(), p), &ring.constant(k.pow(a, self.p)));
        let t = ring
            .rem(&ring.mul(&f, &ring.pow(&h, m as u64)), &xa_p)
            .expect("nonzero modulus");
        if ring.degree(&t).is_some_and(|d| d + 1 > m) {
            return Err(EcError::SignResolutionFailed);
        }
        // g is determined up to the sign of b, which squares away below.
        let bp_inv = k.inv(&k.pow(b, self.p)).expect("b ≠ 0 off the 2-torsion");
        let g = ring.scale(&t, &bp_inv);

        let lhs = ring.sub(&ring.square(&f), &ring.mul(&h, &ring.square(&g)));
        let lc = ring.leading(&lhs).ok_or(EcError::SignResolutionFailed)?;
        let lhs = ring.scale(&lhs, &k.inv(&lc).expect("nonzero"));
        let ap = self.xp_via_determinant(a)?;
        let expected = match &ap {
            ProjPoint::Finite(x) => ring.mul(&xa_p, &ring.from_coeffs(vec![k.neg(x), k.one()])),
            ProjPoint::Infinity => xa_p.clone(),
        };
        Ok(Factorization {
            residual: ring.sub(&lhs, &expected),
            f,
            g,
            ap,
        })
    }

    /// Smallest `n >= 1` with `[n]P = O`, by accumulating multiples.
    pub fn point_order(&self, pt: &CurvePoint<F::Elem>) -> Result<u64, EcError> {
        self.check(pt)?;
        let q = self.field.order();
        let bound = q + 1 + 2 * ((q as f64).sqrt().ceil() as u64);
        let mut acc = pt.clone();
        for n in 1..=bound {
            if acc == CurvePoint::Infinity {
                return Ok(n);
            }
            acc = self.add_unchecked(&acc, pt);
        }
        unreachable!("point order exceeds the Hasse bound")
    }

    pub fn is_p_coprime_torsion(&self, pt: &CurvePoint<F::Elem>) -> Result<bool, EcError> {
        Ok(self.point_order(pt)? % self.p != 0)
    }

    pub fn torsion_info(&self, pt: &CurvePoint<F::Elem>) -> Result<TorsionInfo, EcError> {
        let order = self.point_order(pt)?;
        Ok(TorsionInfo { order, coprime_to_p: order % self.p != 0 })
    }

    /// Same curve over the quadratic extension `ext` of `F`.
    pub fn over_extension(&self, ext: &QuadExt<F>) -> Curve<QuadExt<F>> {
        Curve {
            field: ext.clone(),
            lambda: ext.embed(&self.lambda),
            p: self.p,
        }
    }

    /// All points with x-coordinate `a`, over `F` when `a(a-1)(a-λ)` is a square
    /// and over `F[s]/(s² - d)` otherwise.
    pub fn lift_x(&self, a: &F::Elem) -> Lift<F> {
        let k = &self.field;
        let r = self.rhs(a);
        if let Some((y0, y1)) = sqrt(k, &r) {
            let mut points = vec![CurvePoint::Affine(a.clone(), y0.clone())];
            if y0 != y1 {
                points.push(CurvePoint::Affine(a.clone(), y1));
            }
            return Lift::Rational(points);
        }
        let ext = QuadExt::new(k.clone());
        // r / d is a square because r and d are both non-squares
        let v = sqrt(k, &k.div(&r, ext.nonresidue()).expect("d ≠ 0"))
            .expect("quotient of non-squares is a square")
            .0;
        let x = ext.embed(a);
        let points = vec![
            CurvePoint::Affine(x.clone(), ext.make(k.zero(), v.clone())),
            CurvePoint::Affine(x, ext.make(k.zero(), k.neg(&v))),
        ];
        Lift::Quadratic {
            curve: self.over_extension(&ext),
            points,
        }
    }

    /// `x([n]Q)` for every point `Q` above `x` (one or two of them),
    /// computed over the quadratic extension when `Q` is not rational.
    pub fn x_multiples(&self, n: u64, x: &F::Elem) -> Result<Vec<XImage<F::Elem>>, EcError> {
        match self.lift_x(x) {
            Lift::Rational(points) => points
                .iter()
                .map(|q| Ok(XImage::Base(self.mul(n, q)?.project())))
                .collect(),
            Lift::Quadratic { curve, points } => {
                let ext = curve.field();
                points
                    .iter()
                    .map(|q| {
                        Ok(match curve.mul(n, q)?.project() {
                            ProjPoint::Infinity => XImage::Base(ProjPoint::Infinity),
                            ProjPoint::Finite(e) => match ext.restrict(&e) {
                                Some(v) => XImage::Base(ProjPoint::Finite(v)),
                                None => XImage::Extension(ext.index(&e)),
                            },
                        })
                    })
                    .collect()
            }
        }
    }

    /// Every point with coordinates in `F`, including `O`.
    pub fn points(&self) -> Vec<CurvePoint<F::Elem>> {
        let mut out = vec![CurvePoint::Infinity];
        for x in self.field.elements() {
            if let Lift::Rational(pts) = self.lift_x(&x) {
                out.extend(pts);
            }
        }
        out
    }
}
