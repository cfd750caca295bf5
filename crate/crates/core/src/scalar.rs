//! Scalar traits shared by the exact and numeric halves of the crate.
//!
//! The exact pipeline (polynomials, rational functions, q- and z-series) is
//! generic over a [`Field`]; the numeric theta and orbifold code is generic over
//! a [`Real`] floating type and works with `Complex<Real>`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::{BigRational, Rational64};
use num_traits::{FloatConst, One, ToPrimitive, Zero};

/// An exact coefficient field.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn from_int(n: i64) -> Self;

    fn from_bigint(n: &BigInt) -> Self;

    /// `numer/denom` as decimal-free integers; `denom > 0`.
    fn to_ratio_parts(&self) -> (BigInt, BigInt);

    fn from_ratio_parts(numer: BigInt, denom: BigInt) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn is_integer(&self) -> bool {
        let (_, d) = self.to_ratio_parts();
        d.is_one()
    }
}

impl Field for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn to_ratio_parts(&self) -> (BigInt, BigInt) {
        (self.numer().clone(), self.denom().clone())
    }

    fn from_ratio_parts(numer: BigInt, denom: BigInt) -> Option<Self> {
        if denom.is_zero() {
            None
        } else {
            Some(BigRational::new(numer, denom))
        }
    }

    fn to_f64(&self) -> f64 {
        // Ratio::to_f64 handles numerators and denominators beyond f64 range.
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Fixed-width rationals. Overflow panics, so this is only suitable for
/// small computations (mostly useful in tests).
impl Field for Rational64 {
    fn from_int(n: i64) -> Self {
        Rational64::from_integer(n)
    }

    fn from_bigint(n: &BigInt) -> Self {
        Rational64::from_integer(n.to_i64().expect("integer exceeds i64"))
    }

    fn to_ratio_parts(&self) -> (BigInt, BigInt) {
        (BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }

    fn from_ratio_parts(numer: BigInt, denom: BigInt) -> Option<Self> {
        let (n, d) = (numer.to_i64()?, denom.to_i64()?);
        if d == 0 {
            None
        } else {
            Some(Rational64::new(n, d))
        }
    }

    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

/// Floating-point type used for numeric evaluation.
pub trait Real: num_traits::Float + FloatConst + Debug + Send + Sync + 'static {
    fn from_f64(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("f64 conversion")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Real constant lifted into `Complex<F>`.
pub(crate) fn c<F: Real>(re: f64) -> Complex<F> {
    Complex::new(F::from_f64(re), F::zero())
}

/// `e^{iπ x}` for complex `x`.
pub(crate) fn exp_i_pi<F: Real>(x: Complex<F>) -> Complex<F> {
    (Complex::new(F::zero(), F::PI()) * x).exp()
}

/// Integer power of a field element (negative exponents invert).
pub fn field_pow<K: Field>(x: &K, e: i64) -> K {
    let mut base = if e < 0 { K::one() / x.clone() } else { x.clone() };
    let mut n = e.unsigned_abs();
    let mut acc = K::one();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * base.clone();
        }
        base = base.clone() * base;
        n >>= 1;
    }
    acc
}

