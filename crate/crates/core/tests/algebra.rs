mod common;

use common::OField;
use hdflow::ff::{sqrt, FieldCtx};
use hdflow::matrix::{det_cofactor, det_field, det_ring, kernel_cofactors, mat_vec, Matrix};
use hdflow::poly::{BiPolyRing, PolyRing};
use hdflow::{Field, FiniteField, QuadExt, Ring};
use proptest::prelude::*;

fn fields() -> Vec<FieldCtx> {
    vec![
        FieldCtx::paper_f81(),
        FieldCtx::with_degree(5, 2).unwrap(),
        FieldCtx::with_degree(7, 3).unwrap(),
        FieldCtx::prime(47).unwrap(),
        FieldCtx::with_degree(13, 2).unwrap(),
    ]
}

fn field_and_triple() -> impl Strategy<Value = (FieldCtx, u64, u64, u64)> {
    (0..fields().len(), any::<u64>(), any::<u64>(), any::<u64>()).prop_map(|(i, a, b, c)| {
        let k = fields().swap_remove(i);
        let q = k.order();
        (k, a % q, b % q, c % q)
    })
}

proptest! {
    #[test]
    fn field_axioms((k, a, b, c) in field_and_triple()) {
        let (x, y, z) = (k.element(a), k.element(b), k.element(c));
        prop_assert_eq!(k.add(&x, &y), k.add(&y, &x));
        prop_assert_eq!(k.mul(&x, &y), k.mul(&y, &x));
        prop_assert_eq!(k.mul(&x, &k.mul(&y, &z)), k.mul(&k.mul(&x, &y), &z));
        prop_assert_eq!(k.mul(&x, &k.add(&y, &z)), k.add(&k.mul(&x, &y), &k.mul(&x, &z)));
        prop_assert_eq!(k.sub(&k.add(&x, &y), &y), x.clone());
        if !k.is_zero(&x) {
            prop_assert!(k.is_one(&k.mul(&x, &k.inv(&x).unwrap())));
            prop_assert!(k.is_one(&k.pow(&x, k.order() - 1)));
        }
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative((k, a, b, _c) in field_and_triple()) {
        let p = k.characteristic();
        let (x, y) = (k.element(a), k.element(b));
        let fr = |t: &_| k.pow(t, p);
        prop_assert_eq!(fr(&k.add(&x, &y)), k.add(&fr(&x), &fr(&y)));
        prop_assert_eq!(fr(&k.mul(&x, &y)), k.mul(&fr(&x), &fr(&y)));
    }

    #[test]
    fn encoding_round_trips((k, a, _b, _c) in field_and_triple()) {
        let x = k.encode(a).unwrap();
        prop_assert_eq!(k.decode(&x), a);
        prop_assert_eq!(k.index(&k.element(a)), a);
    }

    #[test]
    fn matches_reference_arithmetic((k, a, b, _c) in field_and_triple()) {
        let o = OField::new(k.p(), k.modulus());
        let (oa, ob) = (o.elem(a), o.elem(b));
        let (x, y) = (k.element(a), k.element(b));
        prop_assert_eq!(k.index(&k.mul(&x, &y)), o.index(&o.mul(&oa, &ob)));
        prop_assert_eq!(k.index(&k.add(&x, &y)), o.index(&o.add(&oa, &ob)));
        prop_assert_eq!(k.index(&k.sub(&x, &y)), o.index(&o.sub(&oa, &ob)));
    }

    #[test]
    fn square_roots((k, a, _b, _c) in field_and_triple()) {
        let x = k.element(a);
        let (r1, r2) = sqrt(&k, &k.square(&x)).expect("a square has a root");
        prop_assert!(r1 == x || r2 == x);
        prop_assert_eq!(k.add(&r1, &r2), k.zero());
    }

    #[test]
    fn quadratic_extension_closes((k, a, b, c) in field_and_triple()) {
        let e = QuadExt::new(k.clone());
        let u = e.make(k.element(a), k.element(b));
        let v = e.embed(&k.element(c));
        prop_assert_eq!(e.restrict(&v), Some(k.element(c)));
        if !e.is_zero(&u) {
            prop_assert!(e.is_one(&e.mul(&u, &e.inv(&u).unwrap())));
        }
        // every base element is a square upstairs
        let s = sqrt(&e, &v).expect("root in the extension");
        prop_assert_eq!(e.square(&s.0), v);
    }

    #[test]
    fn poly_division((seed_a, seed_b) in (prop::collection::vec(0u64..25, 0..12), prop::collection::vec(0u64..25, 1..8))) {
        let k = FieldCtx::with_degree(5, 2).unwrap();
        let ring = PolyRing::new(k.clone());
        let a = ring.from_coeffs(seed_a.iter().map(|&n| k.element(n)).collect());
        let b = ring.from_coeffs(seed_b.iter().map(|&n| k.element(n)).collect());
        prop_assume!(!ring.is_zero(&b));
        let (q, r) = ring.divmod(&a, &b).unwrap();
        prop_assert_eq!(ring.add(&ring.mul(&q, &b), &r), a.clone());
        prop_assert!(ring.degree(&r).is_none_or(|d| d < ring.degree(&b).unwrap()));
        let g = ring.gcd(&a, &b).unwrap();
        prop_assert!(ring.is_zero(&ring.rem(&a, &g).unwrap()));
        prop_assert!(ring.is_zero(&ring.rem(&b, &g).unwrap()));
    }

    #[test]
    fn determinant_algorithms_agree(n in 1usize..6, entries in prop::collection::vec(0u64..49, 36)) {
        let k = FieldCtx::with_degree(7, 2).unwrap();
        let m = Matrix::from_fn(n, n, |r, c| k.element(entries[r * 6 + c]));
        let d = det_field(&k, &m).unwrap();
        prop_assert_eq!(det_ring(&k, &m).unwrap(), d.clone());
        prop_assert_eq!(det_cofactor(&k, &m).unwrap(), d.clone());
        if n > 1 {
            let mut s = m.clone();
            s.swap_rows(0, n - 1);
            prop_assert_eq!(det_field(&k, &s).unwrap(), k.neg(&d));
        }
        prop_assert_eq!(det_field(&k, &m.transpose()).unwrap(), d);
    }

    #[test]
    fn symbolic_determinant_commutes_with_evaluation(
        n in 1usize..5,
        terms in prop::collection::vec(prop::collection::vec((0usize..3, 0usize..3, -3i64..4), 0..4), 16),
        at in (0u64..81, 0u64..81),
    ) {
        let ring = BiPolyRing::new(3);
        let k = FieldCtx::paper_f81();
        let m = Matrix::from_fn(n, n, |r, c| ring.from_terms(&terms[r * 4 + c]));
        let d = det_ring(&ring, &m).unwrap();
        prop_assert_eq!(det_cofactor(&ring, &m).unwrap(), d.clone());
        let (l, a) = (k.element(at.0), k.element(at.1));
        let evaluated = m.map(|e| ring.eval(&k, e, &l, &a).unwrap());
        prop_assert_eq!(ring.eval(&k, &d, &l, &a).unwrap(), det_field(&k, &evaluated).unwrap());
    }

    #[test]
    fn cofactor_kernel(r in 1usize..7, terms in prop::collection::vec(prop::collection::vec((0usize..2, 0usize..2, -2i64..3), 0..3), 42)) {
        let ring = BiPolyRing::new(5);
        let m = Matrix::from_fn(r, r + 1, |i, j| ring.from_terms(&terms[i * 7 + j]));
        let v = kernel_cofactors(&ring, &m).unwrap();
        prop_assert!(mat_vec(&ring, &m, &v).iter().all(|e| ring.is_zero(e)));
    }
}

#[test]
fn f81_basis_elements() {
    let k = FieldCtx::paper_f81();
    let alpha = k.element(3);
    // α² = 1 + i with i = 11 a square root of -1
    assert_eq!(k.index(&k.square(&alpha)), 9);
    assert_eq!(k.index(&k.square(&k.element(11))), 2);
    assert_eq!(k.index(&k.add(&k.element(2), &alpha)), 5);
    assert_eq!(k.index(&k.add(&alpha, &alpha)), 6);
    // 65 = 2 + α² + 2α³
    assert_eq!(k.encode(65).unwrap().digits(), &[2, 0, 1, 2]);
}
