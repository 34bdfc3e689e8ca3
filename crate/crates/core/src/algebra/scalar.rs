use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Field-like scalar that residue extraction, Laurent arithmetic and the
/// endpoint equations are written against.
///
/// Implemented for `f64`, [`BigRational`], [`Complex64`] and
/// [`Jet`](super::Jet). Division by a value whose leading part vanishes is
/// not checked here; callers that can hit it use the checked jet API.
pub trait Scalar:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }
    /// Exact zero test (structural for jets).
    fn is_zero(&self) -> bool;

    fn scale_i64(&self, n: i64) -> Self {
        self.clone() * Self::from_i64(n)
    }

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// Scalars with a real square root and logarithm (floats and float jets).
pub trait RealScalar: Scalar {
    /// Leading (constant) real part.
    fn lead(&self) -> f64;
    fn from_f64(v: f64) -> Self;
    fn try_sqrt(&self) -> Result<Self>;
    fn try_ln(&self) -> Result<Self>;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl RealScalar for f64 {
    fn lead(&self) -> f64 {
        *self
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn try_sqrt(&self) -> Result<Self> {
        if *self >= 0.0 {
            Ok(libm::sqrt(*self))
        } else {
            Err(Error::Domain("square root of a negative value"))
        }
    }
    fn try_ln(&self) -> Result<Self> {
        if *self > 0.0 {
            Ok(libm::log(*self))
        } else {
            Err(Error::Domain("logarithm of a nonpositive value"))
        }
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

/// Exact binomial coefficient with the generalized convention
/// `C(n, k) = n (n-1) ... (n-k+1) / k!` for negative `n`, and 0 for `k < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n >= 0 && k > n {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `n!!`, with `0!! = (-1)!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut i = n;
    while i > 1 {
        acc *= BigInt::from(i);
        i -= 2;
    }
    acc
}

pub fn binomial_f64(n: i64, k: i64) -> f64 {
    if k < 0 || (n >= 0 && k > n) {
        return 0.0;
    }
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

pub fn double_factorial_f64(n: i64) -> f64 {
    let mut acc = 1.0;
    let mut i = n;
    while i > 1 {
        acc *= i as f64;
        i -= 2;
    }
    acc
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Tolerance test `|a - b| <= rtol * max(|a|, |b|, floor)`.
pub fn close(a: f64, b: f64, rtol: f64, floor: f64) -> bool {
    let scale = a.abs().max(b.abs()).max(floor);
    (a - b).abs() <= rtol * scale
}
