//! Scalar arithmetic abstraction: exact rationals or `f64`.
//!
//! Sign decisions during cell enumeration are brittle in floating point, so
//! the whole pipeline is generic over the scalar type. `Rational` is the
//! authoritative mode; `f64` is a fast best-effort path with explicit
//! tolerances at the few places a zero test is needed.

use std::fmt;

use num::bigint::BigInt;
use num::rational::Ratio;
use num::traits::{Num, NumAssign, NumRef, Signed, ToPrimitive};

/// Exact arbitrary-precision rational.
pub type Rational = Ratio<BigInt>;

/// Element type of all instance data, matrices and LP tableaus.
pub trait Scalar:
    Num
    + NumAssign
    + NumRef
    + Signed
    + PartialOrd
    + Clone
    + Send
    + Sync
    + fmt::Debug
    + fmt::Display
    + 'static
{
    /// True when arithmetic is exact and zero tests need no tolerance.
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    /// `num / den`, `den != 0`.
    fn from_fraction(num: i64, den: i64) -> Self;

    fn from_rational(r: &Rational) -> Self;

    /// Exact rational value of this scalar. For `f64` this is the exact
    /// binary value, so converting an exact result back is lossless.
    fn to_rational(&self) -> Rational;

    fn to_f64_lossy(&self) -> f64;

    /// Rejects NaN/infinity in float mode; always true for rationals.
    fn is_finite_value(&self) -> bool;

    /// Zero test: exact in exact mode, `|v| <= threshold` otherwise.
    fn treat_as_zero(&self, threshold: f64) -> bool;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }

    fn from_fraction(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    fn treat_as_zero(&self, _threshold: f64) -> bool {
        self.is_zero()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_fraction(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Rational {
        Ratio::from_float(*self).expect("non-finite float has no rational value")
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn treat_as_zero(&self, threshold: f64) -> bool {
        self.abs() <= threshold
    }
}

use num::Zero;

/// Sign of a scalar under the mode's zero test.
pub fn sign_with_tol<S: Scalar>(v: &S, threshold: f64) -> std::cmp::Ordering {
    if v.treat_as_zero(threshold) {
        std::cmp::Ordering::Equal
    } else if v.is_positive() {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Less
    }
}
