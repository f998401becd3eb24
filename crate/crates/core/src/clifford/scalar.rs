use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::number_ring::RingElement;

/// Coefficient ring for Clifford elements: exact `Z[√2]` or `f64`.
pub trait Scalar: Clone + PartialEq + Debug {
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / o` when the quotient exists in the coefficient ring.
    fn div_exact(&self, o: &Self) -> Option<Self>;
    /// Equality up to `tol`; exact scalars ignore `tol`.
    fn near(&self, o: &Self, tol: f64) -> bool;
    fn to_f64(&self) -> f64;
    /// `Some(p | self)` for exact scalars, `None` in numeric mode.
    fn divisible_by(&self, p: u64) -> Option<bool>;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        (*o != 0.0).then(|| self / o)
    }
    fn near(&self, o: &Self, tol: f64) -> bool {
        (self - o).abs() <= tol
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn divisible_by(&self, _p: u64) -> Option<bool> {
        None
    }
}

impl Scalar for RingElement {
    const EXACT: bool = true;

    fn zero() -> Self {
        <RingElement as Zero>::zero()
    }
    fn one() -> Self {
        <RingElement as One>::one()
    }
    fn from_i64(v: i64) -> Self {
        RingElement::from_int(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        self.checked_div(o).ok()
    }
    fn near(&self, o: &Self, _tol: f64) -> bool {
        self == o
    }
    fn to_f64(&self) -> f64 {
        RingElement::to_f64(self)
    }
    fn divisible_by(&self, p: u64) -> Option<bool> {
        Some(RingElement::divisible_by(self, p))
    }
}
