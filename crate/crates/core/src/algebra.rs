//! A minimal field interface so the same formulas run over F_q, F_p (64-bit), Q and Q(s).

use crate::ffield::{FieldSpec, FqElem};
use crate::fp64::Fp64;
use crate::rat::Q;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt::Debug;

pub trait Domain {
    type V: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::V;
    fn one(&self) -> Self::V;
    fn from_int(&self, k: i64) -> Self::V;
    /// `None` when the denominator is not invertible.
    fn from_q(&self, r: &Q) -> Option<Self::V>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn inv(&self, a: &Self::V) -> Option<Self::V>;
    fn is_zero(&self, a: &Self::V) -> bool;

    fn div(&self, a: &Self::V, b: &Self::V) -> Option<Self::V> {
        self.inv(b).map(|i| self.mul(a, &i))
    }
    fn pow(&self, a: &Self::V, mut e: u32) -> Self::V {
        let mut r = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }
    fn scale(&self, k: i64, a: &Self::V) -> Self::V {
        self.mul(&self.from_int(k), a)
    }
}

impl Domain for FieldSpec {
    type V = FqElem;
    fn zero(&self) -> FqElem {
        FqElem::ZERO
    }
    fn one(&self) -> FqElem {
        FqElem::ONE
    }
    fn from_int(&self, k: i64) -> FqElem {
        FieldSpec::from_int(self, k)
    }
    fn from_q(&self, r: &Q) -> Option<FqElem> {
        FieldSpec::from_q(self, r)
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FieldSpec::add(self, *a, *b)
    }
    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FieldSpec::sub(self, *a, *b)
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FieldSpec::mul(self, *a, *b)
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        FieldSpec::neg(self, *a)
    }
    fn inv(&self, a: &FqElem) -> Option<FqElem> {
        (!a.is_zero()).then(|| FieldSpec::inv(self, *a))
    }
    fn is_zero(&self, a: &FqElem) -> bool {
        a.is_zero()
    }
}

impl Domain for Fp64 {
    type V = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_int(&self, k: i64) -> u64 {
        self.from_i64(k)
    }
    fn from_q(&self, r: &Q) -> Option<u64> {
        Fp64::from_q(self, r)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        Fp64::add(self, *a, *b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        Fp64::sub(self, *a, *b)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        Fp64::mul(self, *a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        Fp64::neg(self, *a)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        Fp64::inv(self, *a)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a % self.p() == 0
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Domain for Rationals {
    type V = Q;
    fn zero(&self) -> Q {
        Q::zero()
    }
    fn one(&self) -> Q {
        Q::one()
    }
    fn from_int(&self, k: i64) -> Q {
        Q::from_integer(BigInt::from(k))
    }
    fn from_q(&self, r: &Q) -> Option<Q> {
        Some(r.clone())
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn sub(&self, a: &Q, b: &Q) -> Q {
        a - b
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
    fn neg(&self, a: &Q) -> Q {
        -a
    }
    fn inv(&self, a: &Q) -> Option<Q> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &Q) -> bool {
        a.is_zero()
    }
}

/// `(c4, c6, Delta)` of `y^2 = x^3 + a2 x^2 + a4 x + a6`.
pub fn weierstrass_invariants<D: Domain>(d: &D, a2: &D::V, a4: &D::V, a6: &D::V) -> (D::V, D::V, D::V) {
    let b2 = d.scale(4, a2);
    let b4 = d.scale(2, a4);
    let b6 = d.scale(4, a6);
    let b8 = d.sub(&d.scale(4, &d.mul(a2, a6)), &d.mul(a4, a4));
    let b2b2 = d.mul(&b2, &b2);
    let c4 = d.sub(&b2b2, &d.scale(24, &b4));
    let c6 = d.add(
        &d.sub(&d.scale(36, &d.mul(&b2, &b4)), &d.mul(&b2b2, &b2)),
        &d.scale(-216, &b6),
    );
    let disc = {
        let t1 = d.neg(&d.mul(&b2b2, &b8));
        let t2 = d.scale(-8, &d.pow(&b4, 3));
        let t3 = d.scale(-27, &d.mul(&b6, &b6));
        let t4 = d.scale(9, &d.mul(&d.mul(&b2, &b4), &b6));
        d.add(&d.add(&t1, &t2), &d.add(&t3, &t4))
    };
    (c4, c6, disc)
}

/// `c4^3 / Delta`, `None` for singular models.
pub fn j_invariant<D: Domain>(d: &D, a2: &D::V, a4: &D::V, a6: &D::V) -> Option<D::V> {
    let (c4, _, disc) = weierstrass_invariants(d, a2, a4, a6);
    d.div(&d.pow(&c4, 3), &disc)
}
