//! Dense univariate polynomials in the transform variable `s`.

use std::ops::{Add, Mul, Neg, Sub};

use num::complex::Complex64;
use num::Zero;

use super::scalar::{Scalar, Q, QComplex};
use crate::error::{Error, Result};

/// Polynomial with coefficients stored lowest degree first, always trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c * s^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    /// `s - root`
    pub fn linear_factor(root: T) -> Self {
        Poly::new(vec![-root, T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `s^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_c64();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Multiply by `s^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![T::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(lead) => {
                let inv = T::one() / lead.clone();
                self.scale(&inv)
            }
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Poly<T>) -> Result<(Poly<T>, Poly<T>)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZeroPolynomial)?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if nd < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] = rem[k + i].clone() - c.clone() * d.clone();
                }
            }
            // The leading slot is eliminated by construction; clear float residue.
            rem[k + dd] = T::zero();
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Coefficients of `self` expanded in powers of `(s - at)`.
    pub fn taylor_at(&self, at: &T) -> Vec<T> {
        let mut work = self.coeffs.clone();
        let n = work.len();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            // Synthetic division by (s - at); the remainder is the next coefficient.
            for i in (k..n - 1).rev() {
                let carry = work[i + 1].clone() * at.clone();
                work[i] = work[i].clone() + carry;
            }
            out.push(work[k].clone());
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl Poly<Q> {
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Q::from_i64(c)).collect())
    }

    pub fn to_f64(&self) -> Poly<f64> {
        self.map(super::scalar::q_to_f64)
    }

    pub fn to_qcomplex(&self) -> Poly<QComplex> {
        self.map(|c| QComplex::new(c.clone(), Q::zero()))
    }

    pub fn to_c64(&self) -> Poly<Complex64> {
        self.map(|c| c.to_c64())
    }
}

impl Poly<f64> {
    pub fn to_c64(&self) -> Poly<Complex64> {
        self.map(|c| Complex64::new(*c, 0.0))
    }
}

impl Poly<QComplex> {
    /// Real part when every imaginary coefficient vanishes.
    pub fn to_real(&self) -> Option<Poly<Q>> {
        if self.coeffs.iter().any(|c| !c.im.is_zero()) {
            return None;
        }
        Some(Poly::new(self.coeffs.iter().map(|c| c.re.clone()).collect()))
    }
}

/// Monic greatest common divisor over an exact field.
pub fn gcd<T: Scalar>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = x.divmod(&y).expect("nonzero divisor");
        x = y;
        y = r.monic();
    }
    x.monic()
}

fn zip_with<T: Scalar>(a: &Poly<T>, b: &Poly<T>, f: impl Fn(T, T) -> T) -> Poly<T> {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::new((0..n).map(|k| f(a.coeff(k), b.coeff(k))).collect())
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! owned_ops {
    ($trait:ident, $method:ident) => {
        impl<T: Scalar> $trait for Poly<T> {
            type Output = Poly<T>;
            fn $method(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
