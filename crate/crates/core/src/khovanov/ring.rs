//! Coefficient rings for the scanning complex.
//!
//! Over a field every nonzero scalar can be cancelled; over ℤ only `±1`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactlinalg::mod_inv;

pub(crate) trait Ring: Send + Sync {
    type E: Clone + Debug + PartialEq + Send + Sync;

    fn from_i64(&self, v: i64) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Inverse when `a` is a unit of the ring.
    fn unit_inverse(&self, a: &Self::E) -> Option<Self::E>;
    /// Canonical representative as a rational (residues as `0..p`).
    fn to_rational(&self, a: &Self::E) -> BigRational;
}

pub(crate) struct Rationals;

impl Ring for Rationals {
    type E = BigRational;

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn unit_inverse(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn to_rational(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
}

pub(crate) struct PrimeField(pub u64);

impl Ring for PrimeField {
    type E = u64;

    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.0 as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
    fn unit_inverse(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| mod_inv(*a, self.0))
    }
    fn to_rational(&self, a: &u64) -> BigRational {
        BigRational::from_integer((*a).into())
    }
}

pub(crate) struct Integers;

impl Ring for Integers {
    type E = BigInt;

    fn from_i64(&self, v: i64) -> BigInt {
        v.into()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn unit_inverse(&self, a: &BigInt) -> Option<BigInt> {
        a.abs().is_one().then(|| a.clone())
    }
    fn to_rational(&self, a: &BigInt) -> BigRational {
        BigRational::from_integer(a.clone())
    }
}
