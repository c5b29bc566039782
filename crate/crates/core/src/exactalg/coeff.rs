//! Integer backends for the elimination kernels.
//!
//! Every kernel is written once over [`Coeff`] and run first with checked
//! `i64` arithmetic; any overflow aborts the run and it is repeated over
//! `BigInt`. Results are therefore always exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;

pub(crate) trait Coeff: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Compare absolute values.
    fn abs_lt(&self, o: &Self) -> bool;
    /// Exact division; caller guarantees divisibility.
    fn div_exact(&self, o: &Self) -> Self;
    fn divides(&self, o: &Self) -> bool;
    /// `(g, x, y)` with `g = gcd > 0` and `g = x*self + y*o`.
    fn egcd(&self, o: &Self) -> Option<(Self, Self, Self)>;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

// Keep a safety margin so that a single multiply-add of two in-range values
// cannot wrap before the checked op sees it.
const LIMIT: i64 = 1 << 62;

fn guard(v: i64) -> Option<i64> {
    if v > -LIMIT && v < LIMIT {
        Some(v)
    } else {
        None
    }
}

impl Coeff for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o).and_then(guard)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o).and_then(guard)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o).and_then(guard)
    }
    fn neg(&self) -> Option<Self> {
        Some(-*self)
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.abs() < o.abs()
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn divides(&self, o: &Self) -> bool {
        if *self == 0 {
            *o == 0
        } else {
            o % self == 0
        }
    }
    fn egcd(&self, o: &Self) -> Option<(Self, Self, Self)> {
        let (mut r0, mut r1) = (*self, *o);
        let (mut s0, mut s1) = (1i64, 0i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0.checked_sub(q.checked_mul(s1)?)?);
            (t0, t1) = (t1, t0.checked_sub(q.checked_mul(t1)?)?);
        }
        if r0 < 0 {
            Some((-r0, -s0, -t0))
        } else {
            Some((r0, s0, t0))
        }
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i64().and_then(guard)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn one() -> Self {
        <BigInt as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.magnitude() < o.magnitude()
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn divides(&self, o: &Self) -> bool {
        if Zero::is_zero(self) {
            Zero::is_zero(o)
        } else {
            Zero::is_zero(&(o % self))
        }
    }
    fn egcd(&self, o: &Self) -> Option<(Self, Self, Self)> {
        let e = self.extended_gcd(o);
        if Signed::is_negative(&e.gcd) {
            Some((-e.gcd, -e.x, -e.y))
        } else {
            Some((e.gcd, e.x, e.y))
        }
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Run `f` over `i64`, falling back to `BigInt` if it overflows.
pub(crate) fn with_fallback<R>(
    small: impl FnOnce() -> Option<R>,
    big: impl FnOnce() -> Option<R>,
) -> R {
    small()
        .or_else(big)
        .expect("BigInt arithmetic cannot overflow")
}
