//! Complex scalars that stay exact (Gaussian rational) until an irrational
//! quantity forces a fall back to double precision.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::complex::Complex64;
use num::{Complex, Zero};

use super::scalar::{f64_to_q, q_to_f64, Scalar, Q, QComplex};

#[derive(Clone, Debug, PartialEq)]
pub enum Cplx {
    Exact(QComplex),
    Float(Complex64),
}

impl Cplx {
    pub fn zero() -> Self {
        Cplx::Exact(QComplex::zero())
    }

    pub fn real(q: Q) -> Self {
        Cplx::Exact(Complex::new(q, Q::zero()))
    }

    pub fn exact(re: Q, im: Q) -> Self {
        Cplx::Exact(Complex::new(re, im))
    }

    pub fn float(re: f64, im: f64) -> Self {
        Cplx::Float(Complex64::new(re, im))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Cplx::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&QComplex> {
        match self {
            Cplx::Exact(z) => Some(z),
            Cplx::Float(_) => None,
        }
    }

    /// The exact real value, if this is an exact number with zero imaginary part.
    pub fn as_exact_real(&self) -> Option<&Q> {
        match self {
            Cplx::Exact(z) if z.im.is_zero() => Some(&z.re),
            _ => None,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Cplx::Exact(z) => z.to_c64(),
            Cplx::Float(z) => *z,
        }
    }

    pub fn re_f64(&self) -> f64 {
        match self {
            Cplx::Exact(z) => q_to_f64(&z.re),
            Cplx::Float(z) => z.re,
        }
    }

    pub fn im_f64(&self) -> f64 {
        match self {
            Cplx::Exact(z) => q_to_f64(&z.im),
            Cplx::Float(z) => z.im,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Cplx::Exact(z) => z.is_zero(),
            Cplx::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Cplx::Exact(z) => Cplx::Exact(z.conj()),
            Cplx::Float(z) => Cplx::Float(z.conj()),
        }
    }

    pub fn powu(&self, k: u32) -> Self {
        match self {
            Cplx::Exact(z) => {
                let mut acc = QComplex::from_i64(1);
                for _ in 0..k {
                    acc = acc * z.clone();
                }
                Cplx::Exact(acc)
            }
            Cplx::Float(z) => Cplx::Float(z.powu(k)),
        }
    }

    /// Equality that is exact between exact values and relative otherwise.
    pub fn approx_eq(&self, other: &Cplx, rel: f64) -> bool {
        match (self, other) {
            (Cplx::Exact(a), Cplx::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.to_c64(), other.to_c64());
                (a - b).norm() <= rel * (1.0 + a.norm().max(b.norm()))
            }
        }
    }

    /// Exact rendering of a float value, used when mixing with exact data is unavoidable.
    pub fn to_exact_lossless(&self) -> Option<QComplex> {
        match self {
            Cplx::Exact(z) => Some(z.clone()),
            Cplx::Float(z) => Some(Complex::new(f64_to_q(z.re)?, f64_to_q(z.im)?)),
        }
    }
}

impl From<Q> for Cplx {
    fn from(q: Q) -> Self {
        Cplx::real(q)
    }
}

impl From<Complex64> for Cplx {
    fn from(z: Complex64) -> Self {
        Cplx::Float(z)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Cplx {
            type Output = Cplx;
            fn $method(self, rhs: Cplx) -> Cplx {
                match (self, rhs) {
                    (Cplx::Exact(a), Cplx::Exact(b)) => Cplx::Exact(a.$method(b)),
                    (a, b) => Cplx::Float(a.to_c64().$method(b.to_c64())),
                }
            }
        }

        impl<'a> $trait<&'a Cplx> for &'a Cplx {
            type Output = Cplx;
            fn $method(self, rhs: &'a Cplx) -> Cplx {
                match (self, rhs) {
                    (Cplx::Exact(a), Cplx::Exact(b)) => Cplx::Exact(a.clone().$method(b.clone())),
                    (a, b) => Cplx::Float(a.to_c64().$method(b.to_c64())),
                }
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Cplx {
    type Output = Cplx;
    fn neg(self) -> Cplx {
        match self {
            Cplx::Exact(a) => Cplx::Exact(-a),
            Cplx::Float(a) => Cplx::Float(-a),
        }
    }
}

impl fmt::Display for Cplx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cplx::Exact(z) if z.im.is_zero() => write!(f, "{}", z.re),
            Cplx::Exact(z) => {
                if z.re.is_zero() {
                    write!(f, "{}i", z.im)
                } else if z.im < Q::zero() {
                    write!(f, "{}-{}i", z.re, -z.im.clone())
                } else {
                    write!(f, "{}+{}i", z.re, z.im)
                }
            }
            Cplx::Float(z) => {
                let (re, im) = (crate::render::fmt_g(z.re), crate::render::fmt_g(z.im.abs()));
                if z.im == 0.0 {
                    write!(f, "{re}")
                } else if z.im < 0.0 {
                    write!(f, "{re}-{im}i")
                } else {
                    write!(f, "{re}+{im}i")
                }
            }
        }
    }
}
