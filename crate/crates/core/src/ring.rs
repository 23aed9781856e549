//! Ring and field abstractions.
//!
//! Arithmetic is performed through a ring *object* (`ring.mul(&a, &b)`) rather
//! than through operator overloading on the elements. The element types stay
//! plain data, while the ring carries the runtime parameters (characteristic,
//! modulus, non-residue of a quadratic extension, ...). Every algorithm in this
//! crate (polynomials, determinants, curve arithmetic, the self-map) is written
//! once against these traits and instantiated for the concrete scalar types
//! re-exported at the crate root.

use std::fmt::Debug;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
}

/// A commutative ring with identity.
pub trait Ring: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// Image of an integer under the canonical map `Z -> R`.
    fn from_int(&self, n: i64) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Returns `q` with `q * b == a`, or `None` when `b` does not divide `a`.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    /// Square-and-multiply. `x^0 = 1` for every `x`, including zero.
    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    fn product<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.one(), |acc, x| self.mul(&acc, x))
    }
}

/// A field: every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, ArithError>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, ArithError> {
        Ok(self.mul(a, &self.inv(b)?))
    }
}

/// A finite field of odd characteristic with a fixed bijection to `[0, q)`.
pub trait FiniteField: Field {
    fn characteristic(&self) -> u64;
    /// Number of elements `q`.
    fn order(&self) -> u64;
    /// Element with integer encoding `n`. Panics when `n >= q`.
    fn element(&self, n: u64) -> Self::Elem;
    /// Integer encoding of `x`.
    fn index(&self, x: &Self::Elem) -> u64;

    fn elements(&self) -> Box<dyn Iterator<Item = Self::Elem> + '_> {
        Box::new((0..self.order()).map(move |n| self.element(n)))
    }

    /// Euler's criterion; zero counts as a square.
    fn is_square(&self, x: &Self::Elem) -> bool {
        self.is_zero(x) || self.is_one(&self.pow(x, (self.order() - 1) / 2))
    }
}

/// Modular inverse of `n` modulo the odd prime `p`, if `p` does not divide `n`.
pub fn inv_mod(n: i64, p: u64) -> Option<u64> {
    let r = n.rem_euclid(p as i64) as u64;
    if r == 0 {
        return None;
    }
    Some(pow_mod(r, p - 2, p))
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
