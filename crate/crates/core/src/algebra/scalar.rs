use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::complex::Complex64;
use num::{BigInt, BigRational, Complex, One, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

/// Exact Gaussian-rational scalar.
pub type QComplex = Complex<Q>;

/// Field operations shared by every coefficient kind the polynomial code runs on.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic is exact, which enables gcd reduction.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn to_c64(&self) -> Complex64;
}

impl Scalar for Q {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Q::from_integer(BigInt::from(v))
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(q_to_f64(self), 0.0)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl Scalar for QComplex {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Complex::new(Q::from_i64(v), Q::zero())
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }
}

/// Nearest double to a rational, robust to numerators and denominators beyond f64 range.
pub fn q_to_f64(q: &Q) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && n.abs() < 9.0e15 && d < 9.0e15 {
            return n / d;
        }
    }
    // Shift both parts down to 64 significant bits before dividing.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let ns = (nb - 64).max(0);
    let ds = (db - 64).max(0);
    let n = (q.numer() >> ns as usize).to_f64().unwrap_or(f64::NAN);
    let d = (q.denom() >> ds as usize).to_f64().unwrap_or(f64::NAN);
    n / d * 2f64.powi((ns - ds) as i32)
}

/// Exact rational value of a finite double.
pub fn f64_to_q(x: f64) -> Option<Q> {
    Q::from_float(x)
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn factorial(k: u32) -> Q {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    Q::from_integer(acc)
}

pub fn binomial(n: u32, k: u32) -> Q {
    if k > n {
        return Q::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Best rational approximation of `x` with denominator at most `max_den`.
pub fn rationalize(x: f64, max_den: i64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let negative = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e15 {
            break;
        }
        let ai = a as i128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a;
        if frac < 1e-14 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let r = Q::new(BigInt::from(p1), BigInt::from(q1));
    Some(if negative { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(rationalize(-0.75, 1000), Some(q(-3, 4)));
        assert_eq!(rationalize(1.0 / 3.0, 1000), Some(q(1, 3)));
        assert_eq!(rationalize(2.0, 10), Some(qi(2)));
    }

    #[test]
    fn q_to_f64_handles_huge_parts() {
        let big = Q::new(BigInt::from(10).pow(400) * 3, BigInt::from(10).pow(400));
        assert!((q_to_f64(&big) - 3.0).abs() < 1e-15);
        assert_eq!(q_to_f64(&q(1, 8)), 0.125);
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial(5), qi(120));
        assert_eq!(binomial(5, 2), qi(10));
        assert_eq!(binomial(2, 5), qi(0));
    }
}
