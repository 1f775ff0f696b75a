//! Singular/regular split of the system and backward solution of the
//! singular parts of the integrated equations.
//!
//! Integrating the model `j` times drops every negative-order derivative
//! (those carry no delta content), leaving a unit-diagonal triangular
//! system in the singular parts `y_s⁽⁰⁾ … y_s⁽ⁿ⁾`.

use num::Zero;

use crate::algebra::{Poly, Q};
use crate::error::{Error, Result};
use crate::signals::{GenSignal, RegSig, SingDist};

/// `y⁽ⁿ⁾ + a₁y⁽ⁿ⁻¹⁾ + … + aₙy = b₀x⁽ᵐ⁾ + … + bₘx` with pre-initial data.
#[derive(Clone, Debug, PartialEq)]
pub struct SysSpec {
    a_raw: Vec<Q>,
    b_raw: Vec<Q>,
    a: Vec<Q>,
    b: Vec<Q>,
    y_pre: Vec<Q>,
    input: GenSignal,
}

impl SysSpec {
    /// Validates and normalizes to `a₀ = 1`. The original coefficients are kept for reporting.
    pub fn new(a: Vec<Q>, b: Vec<Q>, y_pre: Vec<Q>, input: GenSignal) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidSystem("a must have at least one coefficient".into()));
        }
        if b.is_empty() {
            return Err(Error::InvalidSystem("b must have at least one coefficient".into()));
        }
        if a[0].is_zero() {
            return Err(Error::InvalidSystem("a0 must be nonzero".into()));
        }
        let n = a.len() - 1;
        let m = b.len() - 1;
        if m > n {
            return Err(Error::InvalidSystem(format!(
                "n >= m violated: output order n={n}, input order m={m}"
            )));
        }
        if y_pre.len() != n {
            return Err(Error::InvalidSystem(format!(
                "pre-initial conditions need {n} values, got {}",
                y_pre.len()
            )));
        }
        if let Some(k) = input.singular.max_order() {
            if k > m {
                return Err(Error::UnsupportedInput(format!(
                    "singular order {k} exceeds input order m={m}"
                )));
            }
        }
        if !input.regular.is_exact() {
            return Err(Error::UnsupportedInput("regular input must have exact atoms".into()));
        }
        input.regular.laplace()?;
        for k in 0..m as u32 {
            if input.regular.exact_derivative_at_zero_plus(k).is_none() {
                return Err(Error::UnsupportedInput(
                    "regular input is not real-valued at 0+".into(),
                ));
            }
        }
        let a0 = a[0].clone();
        let a_norm = a.iter().map(|c| c / &a0).collect();
        let b_norm = b.iter().map(|c| c / &a0).collect();
        Ok(SysSpec {
            a_raw: a,
            b_raw: b,
            a: a_norm,
            b: b_norm,
            y_pre,
            input,
        })
    }

    pub fn order(&self) -> usize {
        self.a.len() - 1
    }

    pub fn input_order(&self) -> usize {
        self.b.len() - 1
    }

    /// Normalized output-side coefficients, `a()[0] == 1`.
    pub fn a(&self) -> &[Q] {
        &self.a
    }

    /// Input-side coefficients divided by the original `a₀`.
    pub fn b(&self) -> &[Q] {
        &self.b
    }

    pub fn a_raw(&self) -> &[Q] {
        &self.a_raw
    }

    pub fn b_raw(&self) -> &[Q] {
        &self.b_raw
    }

    pub fn y_pre(&self) -> &[Q] {
        &self.y_pre
    }

    pub fn input(&self) -> &GenSignal {
        &self.input
    }

    /// Same coefficients and initial data, different input.
    pub fn with_input(&self, input: GenSignal) -> Result<Self> {
        SysSpec::new(self.a_raw.clone(), self.b_raw.clone(), self.y_pre.clone(), input)
    }

    pub fn with_y_pre(&self, y_pre: Vec<Q>) -> Result<Self> {
        SysSpec::new(self.a_raw.clone(), self.b_raw.clone(), y_pre, self.input.clone())
    }

    /// `sⁿ + a₁sⁿ⁻¹ + … + aₙ`
    pub fn char_poly(&self) -> Poly<Q> {
        Poly::new(self.a.iter().rev().cloned().collect())
    }

    /// `b₀sᵐ + … + bₘ`
    pub fn input_poly(&self) -> Poly<Q> {
        Poly::new(self.b.iter().rev().cloned().collect())
    }

    /// `x⁽ᵏ⁾(0⁻)`: the constant baseline for `k = 0`, zero otherwise.
    pub fn input_pre(&self, k: usize) -> Q {
        if k == 0 {
            self.input.regular.pre_value().clone()
        } else {
            Q::zero()
        }
    }

    /// `x_r⁽ᵏ⁾(0⁺)` from the regular input's closed form.
    pub fn input_post(&self, k: usize) -> Q {
        self.input
            .regular
            .exact_derivative_at_zero_plus(k as u32)
            .expect("validated real exact input")
    }

    /// Delta content of `x⁽ᵏ⁾`: the shifted singular input plus the impulses
    /// produced by differentiating jumps of the regular input across `0`.
    pub fn input_singular(&self, k: usize) -> SingDist {
        let mut acc = self.input.singular.derivative(k);
        for i in 0..k {
            let jump = self.input_post(i) - self.input_pre(i);
            if !jump.is_zero() {
                acc = &acc + &SingDist::delta(jump, k - 1 - i);
            }
        }
        acc
    }
}

/// Equation `j` of the integrated family: `Σᵢ aᵢ·[y⁽ⁿ⁻ʲ⁻ⁱ⁾]_s = rhs`, `0 ≤ i ≤ n`.
///
/// Negative orders are repeated integrals. They are not always regular: the
/// integral of `δ⁽ᵖ⁾` is `δ⁽ᵖ⁻¹⁾` for `p ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularEquation {
    pub index: usize,
    /// `(derivative order, coefficient)` pairs, highest order first.
    pub lhs: Vec<(isize, Q)>,
    pub rhs: SingDist,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularSystem {
    pub equations: Vec<SingularEquation>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularSolution {
    /// `[y_s⁽⁰⁾, y_s⁽¹⁾, …, y_s⁽ⁿ⁾]`
    pub derivative_parts: Vec<SingDist>,
}

impl SingularSolution {
    pub fn output(&self) -> &SingDist {
        &self.derivative_parts[0]
    }

    /// `[y⁽ᵏ⁺¹⁾]_s − d/dt [y⁽ᵏ⁾]_s`: a plain `δ` weighted by the jump of `y⁽ᵏ⁾`.
    pub fn chain_defect(&self, k: usize) -> SingDist {
        &self.derivative_parts[k + 1] - &self.derivative_parts[k].derivative(1)
    }

    /// Every derivative part differs from the derivative of the previous one by a plain `δ`.
    pub fn is_chain_consistent(&self) -> bool {
        (0..self.derivative_parts.len() - 1).all(|k| self.chain_defect(k).max_order().is_none_or(|p| p == 0))
    }

    /// `Σ aᵢ y_s⁽ⁿ⁻ⁱ⁾ − Σ bⱼ (x⁽ᵐ⁻ʲ⁾)_s`; zero for a correct solution.
    pub fn residual(&self, sys: &SysSpec) -> SingDist {
        let n = sys.order();
        let m = sys.input_order();
        let mut lhs = SingDist::zero();
        for (i, a) in sys.a().iter().enumerate() {
            lhs = &lhs + &self.derivative_parts[n - i].scale(a);
        }
        let mut rhs = SingDist::zero();
        for (j, b) in sys.b().iter().enumerate() {
            rhs = &rhs + &sys.input_singular(m - j).scale(b);
        }
        &lhs - &rhs
    }
}

/// Singular part of `x⁽ᵏ⁾` for any integer `k`.
fn input_part(sys: &SysSpec, k: isize) -> SingDist {
    if k >= 0 {
        sys.input_singular(k as usize)
    } else {
        sys.input().singular.antiderivative(k.unsigned_abs())
    }
}

pub fn build_singular_system(sys: &SysSpec) -> SingularSystem {
    let n = sys.order() as isize;
    let m = sys.input_order() as isize;
    let equations = (0..=n)
        .map(|j| {
            let lhs = sys
                .a()
                .iter()
                .enumerate()
                .map(|(i, a)| (n - j - i as isize, a.clone()))
                .collect();
            let mut rhs = SingDist::zero();
            for (jp, b) in sys.b().iter().enumerate() {
                rhs = &rhs + &input_part(sys, m - j - jp as isize).scale(b);
            }
            SingularEquation {
                index: j as usize,
                lhs,
                rhs,
            }
        })
        .collect();
    SingularSystem { equations }
}

/// Back substitution from the `n`-times integrated equation up to the original one.
///
/// The `n`-times integrated equation involves only `y_s` and its integrals,
/// `(1 + a₁I + … + aₙIⁿ) y_s = rhs` with `I` lowering the delta order, and is
/// solved from the highest order down. Each following equation yields one
/// more derivative part.
pub fn solve_singular_backward(system: &SingularSystem, sys: &SysSpec) -> Result<SingularSolution> {
    let n = sys.order();
    if system.equations.len() != n + 1 {
        return Err(Error::LengthMismatch {
            expected: n + 1,
            found: system.equations.len(),
        });
    }
    let a = sys.a();
    let top = &system.equations[n].rhs;
    let len = top.max_order().map_or(0, |p| p + 1);
    let mut c = vec![Q::zero(); len];
    for p in (0..len).rev() {
        let mut v = top.coeff(p);
        for (i, ai) in a.iter().enumerate().skip(1) {
            if let Some(cp) = c.get(p + i) {
                v -= ai * cp;
            }
        }
        c[p] = v;
    }
    let y_s = SingDist::new(c);
    let mut parts: Vec<SingDist> = vec![SingDist::zero(); n + 1];
    parts[0] = y_s.clone();
    for j in (0..n).rev() {
        let eq = &system.equations[j];
        let mut value = eq.rhs.clone();
        for (order, coeff) in eq.lhs.iter().skip(1) {
            let known = if *order >= 0 {
                parts[*order as usize].clone()
            } else {
                y_s.antiderivative(order.unsigned_abs())
            };
            value = &value - &known.scale(coeff);
        }
        parts[n - j] = value;
    }
    Ok(SingularSolution {
        derivative_parts: parts,
    })
}

/// Input projection consumed by the singular stage.
#[derive(Clone, Debug)]
pub struct SingularSubproblem<'a> {
    pub sys: &'a SysSpec,
    pub input: SingDist,
}

/// Input projection consumed by the Laplace stage: same coefficients, regular input only.
#[derive(Clone, Debug)]
pub struct RegularSubproblem<'a> {
    pub sys: &'a SysSpec,
    pub input: RegSig,
}

impl RegularSubproblem<'_> {
    /// `Σ bⱼ x_r⁽ᵐ⁻ʲ⁾(t)` on `t > 0`.
    pub fn forcing(&self) -> RegSig {
        let m = self.sys.input_order();
        let mut acc = RegSig::zero();
        for (j, b) in self.sys.b().iter().enumerate() {
            acc = acc.add(&self.input.nth_derivative(m - j).scale(b));
        }
        acc.with_pre_value(Q::zero())
    }
}

pub fn decompose(sys: &SysSpec) -> (SingularSubproblem<'_>, RegularSubproblem<'_>) {
    (
        SingularSubproblem {
            sys,
            input: sys.input().singular.clone(),
        },
        RegularSubproblem {
            sys,
            input: sys.input().regular.clone(),
        },
    )
}

/// Stage one in one call.
pub fn singular_stage(sys: &SysSpec) -> Result<SingularSolution> {
    solve_singular_backward(&build_singular_system(sys), sys)
}
