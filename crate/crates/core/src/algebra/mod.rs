//! Polynomial and rational-function arithmetic over exact rationals and
//! doubles, root finding, and partial-fraction expansion.

pub mod cplx;
pub mod partial_fraction;
pub mod poly;
pub mod ratfn;
pub mod roots;
pub mod scalar;

pub use cplx::Cplx;
pub use partial_fraction::{PartialFractionForm, PoleTerm};
pub use poly::{gcd, Poly};
pub use ratfn::RatFn;
pub use roots::{poly_roots, poly_roots_exact, square_free, Root, RootSet};
pub use scalar::{q, q_to_f64, qi, Scalar, Q, QComplex};
