//! Independent reference implementations shared by the integration tests.
//!
//! Nothing here calls into the library's arithmetic: the field is plain
//! polynomial arithmetic mod a given modulus, and `x([n]P)` on the Legendre
//! curve uses the projective x-only ladder, which never touches `y`.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_index(rng: &mut ChaCha8Rng, q: u64) -> u64 {
    rng.gen_range(0..q)
}

/// `F_p[x]/(modulus)` with elements as little-endian digit vectors.
#[derive(Clone, Debug)]
pub struct OField {
    pub p: u64,
    pub modulus: Vec<u64>,
}

pub type OElem = Vec<u64>;

impl OField {
    pub fn new(p: u64, modulus: &[u64]) -> Self {
        assert_eq!(*modulus.last().unwrap(), 1, "monic");
        OField { p, modulus: modulus.to_vec() }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.degree() as u32)
    }

    pub fn elem(&self, mut n: u64) -> OElem {
        (0..self.degree())
            .map(|_| {
                let d = n % self.p;
                n /= self.p;
                d
            })
            .collect()
    }

    pub fn index(&self, x: &OElem) -> u64 {
        x.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn int(&self, n: i64) -> OElem {
        let mut v = vec![0; self.degree()];
        v[0] = n.rem_euclid(self.p as i64) as u64;
        v
    }

    pub fn add(&self, a: &OElem, b: &OElem) -> OElem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &OElem, b: &OElem) -> OElem {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    pub fn mul(&self, a: &OElem, b: &OElem) -> OElem {
        let f = self.degree();
        let p = self.p;
        let mut prod = vec![0u64; 2 * f];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // x^f = -(c_0 + c_1 x + ... + c_{f-1} x^{f-1})
        for top in (f..2 * f).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for k in 0..f {
                let shift = top - f + k;
                prod[shift] = (prod[shift] + p * p - c * self.modulus[k] % p) % p;
            }
        }
        prod.truncate(f);
        prod
    }

    pub fn pow(&self, a: &OElem, mut e: u64) -> OElem {
        let mut base = a.clone();
        let mut acc = self.int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, a: &OElem) -> bool {
        a.iter().all(|&d| d == 0)
    }

    pub fn inv(&self, a: &OElem) -> OElem {
        assert!(!self.is_zero(a));
        self.pow(a, self.order() - 2)
    }

    pub fn div(&self, a: &OElem, b: &OElem) -> OElem {
        self.mul(a, &self.inv(b))
    }
}

/// `x([n]P)` on `y² = x(x-1)(x-λ)` from `x(P)` alone (projective Montgomery
/// ladder); `None` is the point at infinity. `x` must not be 0 (the
/// differential addition divides by `x(P)`).
pub fn x_multiple(k: &OField, lambda: &OElem, x: &OElem, n: u64) -> Option<u64> {
    assert!(!k.is_zero(x));
    let one = k.int(1);
    let opl = k.add(&one, lambda);
    let four = k.int(4);
    // (X² - λZ²)², 4XZ(X² - (1+λ)XZ + λZ²)
    let dbl = |(xx, zz): &(OElem, OElem)| {
        let x2 = k.mul(xx, xx);
        let z2 = k.mul(zz, zz);
        let xz = k.mul(xx, zz);
        let t = k.sub(&x2, &k.mul(lambda, &z2));
        let u = k.add(&k.sub(&x2, &k.mul(&opl, &xz)), &k.mul(lambda, &z2));
        (k.mul(&t, &t), k.mul(&four, &k.mul(&xz, &u)))
    };
    // P+Q from P, Q and P-Q = (x : 1)
    let add = |(x1, z1): &(OElem, OElem), (x2, z2): &(OElem, OElem)| {
        let s = k.sub(&k.mul(x1, x2), &k.mul(lambda, &k.mul(z1, z2)));
        let d = k.sub(&k.mul(x1, z2), &k.mul(x2, z1));
        (k.mul(&s, &s), k.mul(x, &k.mul(&d, &d)))
    };
    if n == 0 {
        return None;
    }
    let base = (x.clone(), one.clone());
    let mut r0 = base.clone();
    let mut r1 = dbl(&base);
    for bit in (0..63 - n.leading_zeros()).rev() {
        if (n >> bit) & 1 == 1 {
            r0 = add(&r0, &r1);
            r1 = dbl(&r1);
        } else {
            r1 = add(&r0, &r1);
            r0 = dbl(&r0);
        }
    }
    let (xx, zz) = r0;
    if k.is_zero(&zz) {
        assert!(!k.is_zero(&xx));
        return None;
    }
    Some(k.index(&k.div(&xx, &zz)))
}

/// Reference edges over `F_3[x]/(x^4 + x^2 + 2)`, integer-encoded.
pub mod f81 {
    pub const LAMBDA_6_EDGES: &[(u64, u64)] = &[
        (21, 27), (43, 27), (54, 27), (27, 6), (6, 6),
        (34, 15), (61, 15), (62, 15), (38, 35), (47, 35), (25, 35),
        (15, 65), (35, 65), (65, 65),
    ];
    pub const LAMBDA_11_EDGES: &[(u64, u64)] = &[
        (47, 31), (60, 31), (35, 15), (57, 15), (15, 31), (31, 15),
        (21, 64), (64, 48), (48, 53), (53, 24), (24, 37), (37, 78), (78, 77), (77, 21),
    ];
    /// The 3-cycle with its feeders.
    pub const LAMBDA_5_EDGES: &[(u64, u64)] = &[
        (32, 59), (59, 35), (35, 32),
        (33, 32), (34, 32), (65, 35), (74, 35), (60, 59), (61, 59),
    ];
    /// The 4-cycle in the order it is usually drawn.
    pub const LAMBDA_5_FOUR_CYCLE_AS_DRAWN: &[(u64, u64)] = &[(31, 38), (38, 15), (15, 58), (58, 31)];
    /// The 4-cycle as computed: same nodes, different cyclic order.
    pub const LAMBDA_5_FOUR_CYCLE: &[(u64, u64)] = &[(31, 15), (15, 58), (58, 38), (38, 31)];
}
