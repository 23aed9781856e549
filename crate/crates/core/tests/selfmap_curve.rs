mod common;

use common::{random_index, rng, x_multiple, OField};
use hdflow::ecurve::{b_matrix, gamma_closed, Curve, CurvePoint, XImage};
use hdflow::ff::FieldCtx;
use hdflow::matrix::{kernel_cofactors, mat_vec};
use hdflow::poly::{BiPolyRing, PolyRing};
use hdflow::selfmap::{closed_form, symbolic_kernel_residual, SelfMapCtx};
use hdflow::{Field, FiniteField, ProjPoint, Ring};
use proptest::prelude::*;

fn quadratic(p: u64) -> FieldCtx {
    if p == 3 {
        FieldCtx::paper_f81()
    } else {
        FieldCtx::with_degree(p, 2).unwrap()
    }
}

fn random_lambdas(k: &FieldCtx, count: usize, seed: u64) -> Vec<u64> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let l = random_index(&mut r, k.order());
        if l > 1 && !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

fn finite(x: &ProjPoint<hdflow::FieldElement>, k: &FieldCtx) -> Option<u64> {
    x.finite().map(|e| k.index(e))
}

#[test]
fn phi_agrees_with_the_x_only_ladder() {
    for p in [3u64, 5, 7, 11, 13] {
        let k = quadratic(p);
        let o = OField::new(p, k.modulus());
        for l in random_lambdas(&k, 3, p) {
            let phi = SelfMapCtx::new(k.clone(), k.element(l)).unwrap();
            let ol = o.elem(l);
            for a in 1..k.order() {
                let expect = x_multiple(&o, &ol, &o.elem(a), p);
                let got = phi.eval(&ProjPoint::Finite(k.element(a))).unwrap();
                assert_eq!(finite(&got, &k), expect, "p={p} λ={l} a={a}");
            }
            assert_eq!(phi.eval(&ProjPoint::Finite(k.zero())).unwrap(), ProjPoint::Finite(k.zero()));
            assert_eq!(phi.eval(&ProjPoint::Infinity).unwrap(), ProjPoint::Infinity);
        }
    }
}

#[test]
fn f81_orbits_follow_the_ladder() {
    let k = FieldCtx::paper_f81();
    let o = OField::new(3, k.modulus());
    let lookup = |l: u64, a: u64| x_multiple(&o, &o.elem(l), &o.elem(a), 3);
    for &(a, b) in common::f81::LAMBDA_6_EDGES {
        assert_eq!(lookup(6, a), Some(b), "λ=6 edge {a}");
    }
    for &(a, b) in common::f81::LAMBDA_11_EDGES {
        assert_eq!(lookup(11, a), Some(b), "λ=11 edge {a}");
    }
    for &(a, b) in common::f81::LAMBDA_5_EDGES {
        assert_eq!(lookup(5, a), Some(b), "λ=5 edge {a}");
    }
    for &(a, b) in common::f81::LAMBDA_5_FOUR_CYCLE {
        assert_eq!(lookup(5, a), Some(b), "λ=5 edge {a}");
    }
    let drawn_matches = common::f81::LAMBDA_5_FOUR_CYCLE_AS_DRAWN
        .iter()
        .filter(|&&(a, b)| lookup(5, a) == Some(b))
        .count();
    assert_eq!(drawn_matches, 1);
}

#[test]
fn evaluation_paths_agree_over_f81() {
    let k = FieldCtx::paper_f81();
    let ring = PolyRing::new(k.clone());
    for l in 2..k.order() {
        let phi = SelfMapCtx::new(k.clone(), k.element(l)).unwrap();
        let closed = closed_form(&k, &k.element(l)).unwrap();
        assert_eq!(&closed, phi.rational(), "λ={l}");
        for a in 0..k.order() {
            let x = ProjPoint::Finite(k.element(a));
            let via_det = phi.eval(&x).unwrap();
            assert_eq!(phi.rational().eval(&ring, &x).unwrap(), via_det);
            let grading = phi.grading_polynomial(&k.element(a));
            if ring.degree(&grading) == Some(1) {
                let root = k.neg(&k.div(&ring.coeff(&grading, 0), &ring.coeff(&grading, 1)).unwrap());
                assert_eq!(ProjPoint::Finite(root), via_det, "λ={l} a={a}");
            }
        }
    }
}

#[test]
fn evaluation_paths_agree_on_random_points() {
    for p in [5u64, 7] {
        let k = quadratic(p);
        let ring = PolyRing::new(k.clone());
        let mut r = rng(100 + p);
        let lambdas = random_lambdas(&k, 5, 200 + p);
        for i in 0..500 {
            let l = lambdas[i % lambdas.len()];
            let phi = SelfMapCtx::new(k.clone(), k.element(l)).unwrap();
            let a = k.element(random_index(&mut r, k.order()));
            let x = ProjPoint::Finite(a);
            let closed = closed_form(&k, phi.lambda()).unwrap();
            assert_eq!(closed.eval(&ring, &x).unwrap(), phi.eval(&x).unwrap());
        }
    }
}

#[test]
fn degree_and_fixed_points() {
    for p in [3u64, 5, 7] {
        let k = quadratic(p);
        let ring = PolyRing::new(k.clone());
        for l in random_lambdas(&k, 6, 300 + p) {
            let phi = SelfMapCtx::new(k.clone(), k.element(l)).unwrap();
            let rm = phi.rational();
            assert_eq!(rm.degree(&ring), (p * p) as usize);
            let fp = rm.fixed_points(&ring);
            assert_eq!(fp.total(), (p * p + 1) as usize);
            assert_eq!(fp.at_infinity, 1);
        }
    }
}

#[test]
fn determinant_multiplication_matches_the_ladder() {
    for p in [3u64, 5, 7, 11] {
        let k = quadratic(p);
        let o = OField::new(p, k.modulus());
        for l in random_lambdas(&k, 2, 400 + p) {
            let curve = Curve::new(k.clone(), k.element(l)).unwrap();
            for a in 1..k.order() {
                if a == 1 || a == l {
                    continue;
                }
                let expect = x_multiple(&o, &o.elem(l), &o.elem(a), p);
                match curve.xp_via_determinant(&k.element(a)) {
                    Ok(x) => assert_eq!(finite(&x, &k), expect, "p={p} λ={l} a={a}"),
                    Err(e) => panic!("p={p} λ={l} a={a}: {e}"),
                }
            }
        }
    }
}

#[test]
fn kernel_vectors_vanish() {
    for p in [3u64, 5, 7] {
        assert!(symbolic_kernel_residual(p).unwrap().iter().all(|e| e.degrees().is_none()));
        let ring = BiPolyRing::new(p);
        let b = b_matrix(&ring, p, &gamma_closed(&ring, p, &ring.lambda()), &ring.a());
        let beta = kernel_cofactors(&ring, &b).unwrap();
        assert!(mat_vec(&ring, &b, &beta).iter().all(|e| ring.is_zero(e)), "p={p}");
    }
    for p in [11u64, 13] {
        let k = quadratic(p);
        let mut r = rng(500 + p);
        for _ in 0..200 {
            let l = 2 + random_index(&mut r, k.order() - 2);
            let a = 2 + random_index(&mut r, k.order() - 2);
            if a == l {
                continue;
            }
            let phi = SelfMapCtx::new(k.clone(), k.element(l)).unwrap();
            let av = phi.alpha_vector(&k.element(a));
            let amat = phi.build_a(&k.element(a));
            assert!(mat_vec(&k, &amat, &av).iter().all(|e| k.is_zero(e)));
            let curve = Curve::new(k.clone(), k.element(l)).unwrap();
            let bmat = curve.build_b(&k.element(a)).unwrap();
            let beta = curve.beta_vector(&k.element(a)).unwrap();
            assert!(mat_vec(&k, &bmat, &beta).iter().all(|e| k.is_zero(e)));
        }
    }
}

#[test]
fn factorization_identity() {
    for p in [3u64, 5, 7] {
        let k = quadratic(p);
        let mut r = rng(600 + p);
        let mut done = 0;
        while done < 20 {
            let l = 2 + random_index(&mut r, k.order() - 2);
            let curve = Curve::new(k.clone(), k.element(l)).unwrap();
            let a = random_index(&mut r, k.order());
            if a <= 1 || a == l {
                continue;
            }
            let Some(q) = curve.points().into_iter().find(|pt| matches!(pt, CurvePoint::Affine(x, _) if k.index(x) == a)) else {
                continue;
            };
            let fac = curve.factorization_check(&q).unwrap();
            let ring = PolyRing::new(k.clone());
            assert!(ring.is_zero(&fac.residual), "p={p} λ={l} a={a}");
            done += 1;
        }
    }
}

#[test]
fn point_counts_respect_hasse() {
    for p in [3u64, 5, 7] {
        let k = quadratic(p);
        let q = k.order() as i64;
        for l in random_lambdas(&k, 4, 700 + p) {
            let curve = Curve::new(k.clone(), k.element(l)).unwrap();
            let pts = curve.points();
            let n = pts.len() as i64;
            let t = q + 1 - n;
            assert!(t * t <= 4 * q, "p={p} λ={l} #E={n}");
            // full 2-torsion is rational, so 4 | #E
            assert_eq!(n % 4, 0);
            for pt in pts.iter().take(12) {
                assert_eq!(n as u64 % curve.point_order(pt).unwrap(), 0);
            }
        }
    }
}

#[test]
fn commutativity_through_the_library_group_law() {
    let k = FieldCtx::paper_f81();
    for l in [5u64, 6, 11] {
        let curve = Curve::new(k.clone(), k.element(l)).unwrap();
        let phi = SelfMapCtx::new(k.clone(), k.element(l)).unwrap();
        for a in 0..k.order() {
            let want = XImage::Base(phi.eval(&ProjPoint::Finite(k.element(a))).unwrap());
            for image in curve.x_multiples(3, &k.element(a)).unwrap() {
                assert_eq!(image, want, "λ={l} a={a}");
            }
        }
    }
}

fn f81_point() -> impl Strategy<Value = (u64, u64)> {
    (0u64..81, any::<prop::sample::Index>()).prop_map(|(x, i)| (x, i.index(2) as u64))
}

fn pick(curve: &Curve<FieldCtx>, (x, sign): (u64, u64)) -> CurvePoint<hdflow::FieldElement> {
    let pts = curve.points();
    let k = curve.field();
    let above: Vec<_> = pts
        .iter()
        .filter(|pt| matches!(pt, CurvePoint::Affine(a, _) if k.index(a) == x))
        .cloned()
        .collect();
    if above.is_empty() {
        CurvePoint::Infinity
    } else {
        above[sign as usize % above.len()].clone()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_law(l in 2u64..81, p1 in f81_point(), p2 in f81_point(), p3 in f81_point(), n in 0u64..40, m in 0u64..40) {
        let k = FieldCtx::paper_f81();
        let c = Curve::new(k.clone(), k.element(l)).unwrap();
        let (a, b, d) = (pick(&c, p1), pick(&c, p2), pick(&c, p3));
        prop_assert_eq!(c.add(&a, &b).unwrap(), c.add(&b, &a).unwrap());
        prop_assert_eq!(
            c.add(&c.add(&a, &b).unwrap(), &d).unwrap(),
            c.add(&a, &c.add(&b, &d).unwrap()).unwrap()
        );
        prop_assert_eq!(c.add(&a, &CurvePoint::Infinity).unwrap(), a.clone());
        prop_assert_eq!(c.add(&a, &c.neg(&a)).unwrap(), CurvePoint::Infinity);
        prop_assert_eq!(
            c.mul(n + m, &a).unwrap(),
            c.add(&c.mul(n, &a).unwrap(), &c.mul(m, &a).unwrap()).unwrap()
        );
        prop_assert!(c.contains(&c.mul(n, &a).unwrap()));
    }
}
