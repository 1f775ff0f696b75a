use std::ops::{Add, Div, Mul, Neg, Sub};

use num::complex::Complex64;

use super::poly::{gcd, Poly};
use super::scalar::{Scalar, Q, QComplex};
use crate::error::{Error, Result};

/// Rational function `num / den` in canonical form: monic denominator and,
/// for exact scalars, no common polynomial factor.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFn<T> {
    num: Poly<T>,
    den: Poly<T>,
}

impl<T: Scalar> RatFn<T> {
    pub fn new(num: Poly<T>, den: Poly<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFn::zero());
        }
        let (num, den) = if T::EXACT {
            let g = gcd(&num, &den);
            if g.degree() == Some(0) {
                (num, den)
            } else {
                (num.divmod(&g)?.0, den.divmod(&g)?.0)
            }
        } else {
            (num, den)
        };
        let lead = den.leading().cloned().expect("nonzero denominator");
        let inv = T::one() / lead;
        Ok(RatFn {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn zero() -> Self {
        RatFn {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly<T>) -> Self {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly<T> {
        &self.num
    }

    pub fn den(&self) -> &Poly<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_strictly_proper(&self) -> bool {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => true,
            (Some(n), Some(d)) => n < d,
            (Some(_), None) => false,
        }
    }

    /// Split into polynomial part and strictly proper remainder.
    pub fn split_proper(&self) -> (Poly<T>, RatFn<T>) {
        let (q, r) = self.num.divmod(&self.den).expect("canonical denominator");
        let proper = RatFn::new(r, self.den.clone()).expect("canonical denominator");
        (q, proper)
    }

    pub fn eval(&self, x: &T) -> Result<T> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::PoleEvaluation);
        }
        Ok(self.num.eval(x) / d)
    }

    /// Evaluate at a complex point; fails within relative distance 1e-12 of a pole.
    pub fn eval_c64(&self, z: Complex64) -> Result<Complex64> {
        let d = self.den.eval_c64(z);
        let scale: f64 = self
            .den
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c.to_c64().norm() * z.norm().powi(k as i32))
            .sum();
        if d.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::PoleEvaluation);
        }
        Ok(self.num.eval_c64(z) / d)
    }

    pub fn scale(&self, c: &T) -> Self {
        RatFn::new(self.num.scale(c), self.den.clone()).expect("canonical denominator")
    }

    pub fn mul_poly(&self, p: &Poly<T>) -> Self {
        RatFn::new(&self.num * p, self.den.clone()).expect("canonical denominator")
    }

    pub fn checked_div(&self, rhs: &RatFn<T>) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        RatFn::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl RatFn<Q> {
    pub fn to_f64(&self) -> RatFn<f64> {
        RatFn {
            num: self.num.to_f64(),
            den: self.den.to_f64(),
        }
    }
}

impl RatFn<QComplex> {
    /// Real rational function when every coefficient has zero imaginary part.
    pub fn to_real(&self) -> Option<RatFn<Q>> {
        Some(RatFn {
            num: self.num.to_real()?,
            den: self.den.to_real()?,
        })
    }
}

impl<T: Scalar> Add for &RatFn<T> {
    type Output = RatFn<T>;
    fn add(self, rhs: &RatFn<T>) -> RatFn<T> {
        if self.den == rhs.den {
            return RatFn::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        RatFn::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero")
    }
}

impl<T: Scalar> Sub for &RatFn<T> {
    type Output = RatFn<T>;
    fn sub(self, rhs: &RatFn<T>) -> RatFn<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Mul for &RatFn<T> {
    type Output = RatFn<T>;
    fn mul(self, rhs: &RatFn<T>) -> RatFn<T> {
        RatFn::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl<T: Scalar> Div for &RatFn<T> {
    type Output = RatFn<T>;
    /// Panics on division by the zero function; use [`RatFn::checked_div`] otherwise.
    fn div(self, rhs: &RatFn<T>) -> RatFn<T> {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl<T: Scalar> Neg for &RatFn<T> {
    type Output = RatFn<T>;
    fn neg(self) -> RatFn<T> {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}
