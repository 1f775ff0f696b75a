//! Transform-domain solvers.
//!
//! Three interchangeable methods sit behind the [`Solver`] trait:
//!
//! - `modified-lplus`: stage one and two give the `0⁺` conditions, then the
//!   regular part of the model alone is transformed with `ℒ₊`.
//! - `lminus`: the whole model, impulses included, transformed with `ℒ₋`
//!   and the pre-initial conditions.
//! - `naive-lplus`: `ℒ₊` applied to the whole model with `0⁻` data and
//!   `ℒ₊{δ⁽ᵏ⁾} = 0`. Kept only to reproduce the inconsistency it causes.

mod compare;
mod methods;
mod registry;

pub use compare::{compare_methods, comparison_grid, comparison_horizon, Comparison, MethodComparison};
pub use methods::{lminus_solve, lplus_solve_regular, naive_lplus_solve, Lminus, ModifiedLplus, NaiveLplus, RegularSolution};
pub use registry::{Solver, SolverRegistry};

use std::fmt;
use std::str::FromStr;

use num::{Signed, Zero};
use serde::Serialize;

use crate::algebra::scalar::{factorial, q_to_f64};
use crate::algebra::{Cplx, Poly, RatFn, Q};
use crate::decomposition::SysSpec;
use crate::error::{Error, Result};
use crate::initialization::JumpReport;
use crate::signals::{Atom, RegSig, SingDist};

/// Relative tolerance for float-path consistency checks: `|x − e| ≤ tol·(1 + |e|)`.
pub const CONSISTENCY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ModifiedLplus,
    Lminus,
    NaiveLplus,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::ModifiedLplus, Method::Lminus, Method::NaiveLplus];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::ModifiedLplus => "modified-lplus",
            Method::Lminus => "lminus",
            Method::NaiveLplus => "naive-lplus",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s || m.as_str().replace('-', "_") == s)
            .ok_or_else(|| Error::UnsupportedInput(format!("unknown method '{s}'")))
    }
}

/// `y = y_r + y_s` together with the transform it was inverted from.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub method: Method,
    /// Closed form on `t ≥ 0`.
    pub regular: RegSig,
    /// Delta content of `y` itself.
    pub singular: SingDist,
    /// Strictly proper transform of the regular part.
    pub transform: RatFn<Q>,
    pub report: JumpReport,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IvtResult {
    #[serde(serialize_with = "crate::render::ser_q")]
    pub value: Q,
    #[serde(serialize_with = "crate::render::ser_q")]
    pub expected: Q,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsistencyCheck {
    /// Closed-form derivatives at `0⁺`, `k = 0…n−1`.
    pub values: Vec<f64>,
    pub max_error: f64,
    pub pass: bool,
}

impl Solution {
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.regular.eval(t)
    }

    pub fn post_values(&self) -> Vec<Q> {
        crate::initialization::post_initial_conditions(&self.report)
    }

    /// The closed form's derivatives at `0⁺` against the report's post-initial values.
    pub fn zero_plus_consistency(&self) -> ConsistencyCheck {
        check_zero_plus(&self.regular, &self.post_values())
    }

    /// Initial value theorem against `y(0⁺)`; zero-order systems expect `0`.
    pub fn ivt(&self) -> Result<IvtResult> {
        let expected = self.post_values().first().cloned().unwrap_or_else(Q::zero);
        ivt_check(&self.transform, &expected)
    }

    /// `lim s(sY − y(0⁺)) = y′(0⁺)`, defined when the system order is at least two.
    pub fn ivt_second(&self) -> Result<Option<IvtResult>> {
        let post = self.post_values();
        if post.len() < 2 {
            return Ok(None);
        }
        let shifted = &self.transform.mul_poly(&Poly::monomial(Q::from_integer(1.into()), 1))
            - &RatFn::from_poly(Poly::constant(post[0].clone()));
        ivt_check(&shifted, &post[1]).map(Some)
    }

    pub fn is_identically_zero(&self) -> bool {
        self.regular.is_zero() && self.singular.is_zero()
    }

    /// `Σ aᵢ y_r⁽ⁿ⁻ⁱ⁾ − Σ bⱼ x_r⁽ᵐ⁻ʲ⁾` on `t > 0`, computed atom-wise.
    pub fn ode_residual(&self, sys: &SysSpec) -> RegSig {
        let n = sys.order();
        let mut acc = RegSig::zero();
        for (i, a) in sys.a().iter().enumerate() {
            acc = acc.add(&self.regular.nth_derivative(n - i).scale(a));
        }
        let (_, regular) = crate::decomposition::decompose(sys);
        acc.add(&regular.forcing().scale(&-Q::from_integer(1.into())))
            .with_pre_value(Q::zero())
    }
}

pub fn check_zero_plus(regular: &RegSig, post: &[Q]) -> ConsistencyCheck {
    let mut values = Vec::with_capacity(post.len());
    let mut max_error: f64 = 0.0;
    let mut pass = true;
    for (k, p) in post.iter().enumerate() {
        let v = regular.derivative_at_zero_plus(k as u32);
        let expected = q_to_f64(p);
        let err = (v.re_f64() - expected).abs().max(v.im_f64().abs());
        if let (Some(exact), false) = (v.as_exact_real(), err.is_nan()) {
            if exact != p {
                pass = false;
            }
        }
        if !(err <= CONSISTENCY_TOL * (1.0 + expected.abs())) {
            pass = false;
        }
        max_error = max_error.max(err);
        values.push(v.re_f64());
    }
    ConsistencyCheck {
        values,
        max_error,
        pass,
    }
}

/// `Σ_{i<k} s^{k−1−i} vᵢ`, the initial-value terms of the derivative rule.
pub fn derivative_rule_terms(k: usize, values: &[Q]) -> Poly<Q> {
    let mut coeffs = vec![Q::zero(); k];
    for i in 0..k {
        coeffs[k - 1 - i] = values[i].clone();
    }
    Poly::new(coeffs)
}

/// Transform the model `Σ aᵢ y⁽ⁿ⁻ⁱ⁾ = Σ bⱼ x⁽ᵐ⁻ʲ⁾` with the derivative rule
/// seeded by `y_values` and `x_values`, and solve for `Y(s)`.
pub fn assemble_transform(
    sys: &SysSpec,
    y_values: &[Q],
    x_transform: &RatFn<Q>,
    x_values: &[Q],
) -> RatFn<Q> {
    let n = sys.order();
    let m = sys.input_order();
    let mut init = Poly::zero();
    for k in 1..=n {
        init = &init + &derivative_rule_terms(k, y_values).scale(&sys.a()[n - k]);
    }
    for (j, b) in sys.b().iter().enumerate() {
        init = &init - &derivative_rule_terms(m - j, x_values).scale(b);
    }
    let rhs = &x_transform.mul_poly(&sys.input_poly()) + &RatFn::from_poly(init);
    rhs.checked_div(&RatFn::from_poly(sys.char_poly()))
        .expect("monic characteristic polynomial")
}

/// `y⁽ᵏ⁾(0⁺)` for `k < count`, read off the expansion of strictly proper `Y` at infinity.
pub fn initial_values(y: &RatFn<Q>, count: usize) -> Result<Vec<Q>> {
    if !y.is_strictly_proper() {
        return Err(Error::ImproperTransform {
            num: y.num().degree().unwrap_or(0),
            den: y.den().degree().unwrap_or(0),
        });
    }
    let d = y.den().degree().unwrap_or(0);
    let den = y.den().coeffs();
    let num = y.num();
    let mut out: Vec<Q> = Vec::with_capacity(count);
    for k in 0..count {
        let mut acc = if k + 1 <= d { num.coeff(d - 1 - k) } else { Q::zero() };
        for l in 1..=k.min(d) {
            acc -= &den[d - l] * &out[k - l];
        }
        out.push(acc / &den[d]);
    }
    Ok(out)
}

/// `lim_{s→∞} s·Y(s)` from the coefficient of `s^{deg den − 1}`.
pub fn ivt_check(y: &RatFn<Q>, expected_post: &Q) -> Result<IvtResult> {
    let dn = y.num().degree();
    let dd = y.den().degree().unwrap_or(0);
    if let Some(dn) = dn {
        if dn > dd {
            return Err(Error::ImproperTransform { num: dn, den: dd });
        }
    }
    let value = if dd == 0 {
        Q::zero()
    } else {
        y.num().coeff(dd - 1) / y.den().coeffs()[dd].clone()
    };
    let diff = q_to_f64(&(&value - expected_post)).abs();
    let pass = diff <= CONSISTENCY_TOL * (1.0 + q_to_f64(&expected_post.abs()));
    Ok(IvtResult {
        value,
        expected: expected_post.clone(),
        pass,
    })
}

/// Invert a transform: polynomial part to delta content, poles to atoms via
/// `tᵖe^{λt} ↔ p!/(s−λ)^{p+1}`.
pub fn invert(y: &RatFn<Q>) -> Result<(RegSig, SingDist)> {
    let pf = y.partial_fractions()?;
    let singular = SingDist::from_poly(&pf.polynomial_part);
    let atoms = pf
        .terms
        .iter()
        .map(|t| {
            let p = (t.order - 1) as u32;
            let coeff = match &t.residue {
                Cplx::Exact(_) => &t.residue / &Cplx::real(factorial(p)),
                Cplx::Float(z) => Cplx::Float(z / q_to_f64(&factorial(p))),
            };
            Atom::new(coeff, p, t.pole.clone())
        })
        .collect();
    Ok((RegSig::new(atoms, Q::zero()), singular))
}

/// Pair the regular and singular parts into a solution.
pub fn combine_solution(
    method: Method,
    regular: RegularSolution,
    singular: SingDist,
    report: JumpReport,
    warnings: Vec<String>,
) -> Solution {
    Solution {
        method,
        regular: regular.regular,
        singular,
        transform: regular.transform,
        report,
        warnings,
    }
}

/// Transform and closed form agree at a few fixed off-axis points.
fn check_reconstruction(transform: &RatFn<Q>, regular: &RegSig) -> Result<()> {
    use num::complex::Complex64;
    for z in [
        Complex64::new(2.5, 1.3),
        Complex64::new(-0.7, 3.1),
        Complex64::new(7.0, -0.2),
    ] {
        let direct = match transform.eval_c64(z) {
            Ok(v) => v,
            Err(Error::PoleEvaluation) => continue,
            Err(e) => return Err(e),
        };
        let rebuilt = regular.laplace_eval(z);
        let tol = 1e-7 * (1.0 + direct.norm());
        if !((direct - rebuilt).norm() <= tol) {
            return Err(Error::Consistency(format!(
                "pole/atom reconstruction mismatch at s = {z}: {direct} vs {rebuilt}"
            )));
        }
    }
    Ok(())
}
