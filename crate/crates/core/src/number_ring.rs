//! Exact arithmetic in the ring of integers `Z[√2]`.
//!
//! Elements are stored as a pair of arbitrary-precision integers `(a, b)`
//! standing for `a + b√2`, so sums and products never round or overflow.
//! The module also carries the diagonal quadratic form
//! `f = −√2 x₀² + x₁² + ⋯ + xₙ²` and the splitting behaviour of rational
//! primes in `Z[√2]`, which is what the congruence-subgroup tests need.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("vector has length {got}, form expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("division is not exact in Z[√2]")]
    InexactDivision,
    #[error("division by zero")]
    DivisionByZero,
}

/// `a + b√2` with `a, b ∈ Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RingElement {
    pub a: BigInt,
    pub b: BigInt,
}

impl RingElement {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn from_int(a: impl Into<BigInt>) -> Self {
        Self::new(a, 0)
    }

    pub fn sqrt2() -> Self {
        Self::new(0, 1)
    }

    /// The nontrivial automorphism `√2 ↦ −√2`.
    pub fn conjugate(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -&self.b,
        }
    }

    /// Field norm `a² − 2b²`.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - BigInt::from(2) * &self.b * &self.b
    }

    pub fn is_unit(&self) -> bool {
        self.norm().abs().is_one()
    }

    /// Exact quotient `self / other`, if it lies in `Z[√2]`.
    pub fn checked_div(&self, other: &Self) -> Result<Self, RingError> {
        let n = other.norm();
        if n.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        let num = self * &other.conjugate();
        let (qa, ra) = num.a.div_rem(&n);
        let (qb, rb) = num.b.div_rem(&n);
        if !ra.is_zero() || !rb.is_zero() {
            return Err(RingError::InexactDivision);
        }
        Ok(Self { a: qa, b: qb })
    }

    /// Image under the real embedding sending `√2` to the positive root.
    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }

    /// Whether both coordinates are divisible by `p`, i.e. membership in `pZ[√2]`.
    pub fn divisible_by(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.a.is_multiple_of(&p) && self.b.is_multiple_of(&p)
    }

    pub fn reduce(&self, p: u64) -> Residue {
        Residue::from_element(self, p)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}√2", self.b)
        } else if self.b.is_negative() {
            write!(f, "{} - {}√2", self.a, -&self.b)
        } else {
            write!(f, "{} + {}√2", self.a, self.b)
        }
    }
}

impl From<i64> for RingElement {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl Zero for RingElement {
    fn zero() -> Self {
        Self::new(0, 0)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for RingElement {
    fn one() -> Self {
        Self::new(1, 0)
    }
}

impl<'a> Add<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        RingElement {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl<'a> Sub<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        RingElement {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl<'a> Mul<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        RingElement {
            a: &self.a * &rhs.a + BigInt::from(2) * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: RingElement) -> RingElement {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

/// Element of `(Z/p)[√2]`, with `√2` kept as a formal symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    pub a: u64,
    pub b: u64,
    pub p: u64,
}

impl Residue {
    pub fn from_element(x: &RingElement, p: u64) -> Self {
        let pb = BigInt::from(p);
        let red = |v: &BigInt| v.mod_floor(&pb).to_u64().expect("residue below p");
        Self {
            a: red(&x.a),
            b: red(&x.b),
            p,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    fn mulmod(x: u64, y: u64, p: u64) -> u64 {
        ((x as u128 * y as u128) % p as u128) as u64
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        let p = self.p as u128;
        Self {
            a: ((self.a as u128 + o.a as u128) % p) as u64,
            b: ((self.b as u128 + o.b as u128) % p) as u64,
            p: self.p,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        let p = self.p;
        let two_bd = Self::mulmod(2 % p, Self::mulmod(self.b, o.b, p), p);
        Self {
            a: (Self::mulmod(self.a, o.a, p) as u128 + two_bd as u128) as u64 % p,
            b: (Self::mulmod(self.a, o.b, p) as u128 + Self::mulmod(self.b, o.a, p) as u128) as u64
                % p,
            p,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimeKind {
    Inert,
    Split,
    Ramified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeClass {
    pub p: u64,
    pub kind: PrimeKind,
    /// Size of `Z[√2]/P` for a prime `P` above `p`.
    pub quotient_size: u64,
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Splitting type of the rational prime `p` in `Z[√2]`.
///
/// For odd `p`, 2 is a square mod `p` exactly when `p ≡ ±1 (mod 8)`.
pub fn classify_prime(p: u64) -> Result<PrimeClass, RingError> {
    if !is_prime(p) {
        return Err(RingError::NotPrime(p));
    }
    let kind = match p % 8 {
        _ if p == 2 => PrimeKind::Ramified,
        1 | 7 => PrimeKind::Split,
        _ => PrimeKind::Inert,
    };
    let quotient_size = match kind {
        PrimeKind::Inert => p * p,
        PrimeKind::Split | PrimeKind::Ramified => p,
    };
    Ok(PrimeClass {
        p,
        kind,
        quotient_size,
    })
}

/// The diagonal form `−√2 x₀² + x₁² + ⋯ + xₙ²` on `R^{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormF {
    pub n: usize,
    pub gram: Vec<RingElement>,
}

impl FormF {
    pub fn new(n: usize) -> Self {
        let mut gram = vec![RingElement::one(); n + 1];
        gram[0] = -RingElement::sqrt2();
        Self { n, gram }
    }

    pub fn evaluate(&self, v: &[RingElement]) -> Result<RingElement, RingError> {
        if v.len() != self.n + 1 {
            return Err(RingError::DimensionMismatch {
                expected: self.n + 1,
                got: v.len(),
            });
        }
        Ok(self
            .gram
            .iter()
            .zip(v)
            .fold(RingElement::zero(), |acc, (g, x)| &acc + &(g * &(x * x))))
    }

    /// (negative, positive) counts of the Gram diagonal under the real
    /// embedding `√2 > 0`.
    pub fn signature(&self) -> (usize, usize) {
        Self::count_signs(self.gram.iter().map(RingElement::to_f64))
    }

    /// Signature under the Galois-conjugate embedding.
    pub fn conjugate_signature(&self) -> (usize, usize) {
        Self::count_signs(self.gram.iter().map(|g| g.conjugate().to_f64()))
    }

    fn count_signs(vals: impl Iterator<Item = f64>) -> (usize, usize) {
        vals.fold((0, 0), |(neg, pos), x| {
            if x < 0.0 {
                (neg + 1, pos)
            } else {
                (neg, pos + 1)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> RingElement {
        RingElement::new(a, b)
    }

    #[test]
    fn fundamental_unit() {
        assert_eq!(r(1, 1).norm(), BigInt::from(-1));
        assert_eq!(&r(1, 1) * &r(1, -1), r(-1, 0));
        assert!(r(1, 1).is_unit());
        assert_eq!(r(3, 0).conjugate(), r(3, 0));
    }

    #[test]
    fn division() {
        let x = &r(3, 5) * &r(7, -2);
        assert_eq!(x.checked_div(&r(7, -2)).unwrap(), r(3, 5));
        assert_eq!(
            r(1, 0).checked_div(&r(2, 0)),
            Err(RingError::InexactDivision)
        );
        assert_eq!(
            r(1, 0).checked_div(&r(0, 0)),
            Err(RingError::DivisionByZero)
        );
        assert_eq!(r(1, 0).checked_div(&r(1, 1)).unwrap(), r(-1, 1));
    }

    #[test]
    fn no_overflow_on_large_powers() {
        let mut x = RingElement::one();
        for _ in 0..200 {
            x = &x * &r(1, 1);
        }
        // norm is (−1)^200
        assert_eq!(x.norm(), BigInt::one());
    }

    #[test]
    fn prime_examples() {
        assert_eq!(classify_prime(5).unwrap().kind, PrimeKind::Inert);
        assert_eq!(classify_prime(5).unwrap().quotient_size, 25);
        assert_eq!(classify_prime(7).unwrap().kind, PrimeKind::Split);
        assert_eq!(classify_prime(7).unwrap().quotient_size, 7);
        assert_eq!(classify_prime(2).unwrap().kind, PrimeKind::Ramified);
        assert_eq!(classify_prime(2).unwrap().quotient_size, 2);
        assert_eq!(classify_prime(9), Err(RingError::NotPrime(9)));
        assert_eq!(classify_prime(1), Err(RingError::NotPrime(1)));
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let limit = 20_000usize;
        let mut sieve = vec![true; limit];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..limit {
            if sieve[i] {
                for j in (i * i..limit).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (i, &prime) in sieve.iter().enumerate() {
            assert_eq!(is_prime(i as u64), prime, "{i}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn form_examples() {
        let f = FormF::new(4);
        let e1 = vec![r(0, 0), r(1, 0), r(0, 0), r(0, 0), r(0, 0)];
        assert_eq!(f.evaluate(&e1).unwrap(), r(1, 0));
        let e0 = vec![r(1, 0), r(0, 0), r(0, 0), r(0, 0), r(0, 0)];
        assert_eq!(f.evaluate(&e0).unwrap(), r(0, -1));
        let v = vec![r(1, 0), r(1, 0), r(1, 0), r(0, 0), r(0, 0)];
        assert_eq!(f.evaluate(&v).unwrap(), r(2, -1));
        assert!(matches!(
            f.evaluate(&v[..3]),
            Err(RingError::DimensionMismatch {
                expected: 5,
                got: 3
            })
        ));
        assert_eq!(f.signature(), (1, 4));
        assert_eq!(f.conjugate_signature(), (0, 5));
    }

    #[test]
    fn residue_arithmetic() {
        let x = r(6, 5);
        let y = r(-4, 9);
        for p in [2u64, 3, 5, 7, 11] {
            assert_eq!((&x * &y).reduce(p), x.reduce(p).mul(&y.reduce(p)));
            assert_eq!((&x + &y).reduce(p), x.reduce(p).add(&y.reduce(p)));
        }
        assert!(r(10, -15).divisible_by(5));
        assert!(!r(10, -14).divisible_by(5));
    }

    #[test]
    fn display() {
        assert_eq!(r(2, -1).to_string(), "2 - 1√2");
        assert_eq!(r(0, 3).to_string(), "3√2");
        assert_eq!(r(4, 0).to_string(), "4");
    }
}
