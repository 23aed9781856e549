//! Exact arithmetic for the Higgs–de Rham self-map `φ_{λ,p}` of `P¹` over
//! finite fields, the Legendre curve `y² = x(x-1)(x-λ)`, orbit graphs, and
//! checks of the identities relating them.
//!
//! Arithmetic goes through ring objects (`field.mul(&a, &b)`), so every
//! algorithm is generic over [`ring::Ring`]; the aliases below name the
//! concrete instantiations used by the CLI.

pub mod conjectures;
pub mod dynamics;
pub mod ecurve;
pub mod ff;
pub mod matrix;
pub mod poly;
pub mod ring;
pub mod selfmap;

pub use ff::{FieldCtx, FieldElement, ProjPoint, QuadExt};
pub use ring::{Field, FiniteField, Ring};

/// `F_{p^f}` as `F_p[x]/(P)`.
pub type Fq = FieldCtx;
/// The quadratic extension of [`Fq`] used for lifting x-coordinates.
pub type Fq2 = QuadExt<FieldCtx>;
/// Elements of [`Fq2`].
pub type Fq2Element = (FieldElement, FieldElement);
/// `φ_{λ,p}` over [`Fq`].
pub type SelfMap = selfmap::SelfMapCtx<Fq>;
/// The Legendre curve over [`Fq`].
pub type LegendreCurve = ecurve::Curve<Fq>;
/// Points of [`LegendreCurve`].
pub type Point = ecurve::CurvePoint<FieldElement>;
