use super::registry::Solver;
use super::{assemble_transform, check_reconstruction, combine_solution, initial_values, invert, Method, Solution};
use crate::algebra::{RatFn, Q};
use crate::decomposition::{decompose, singular_stage, SysSpec};
use crate::error::{Error, Result};
use crate::initialization::{compute_jumps, post_initial_conditions, JumpReport};
use crate::signals::RegSig;

/// Inverted regular subproblem.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularSolution {
    pub regular: RegSig,
    pub transform: RatFn<Q>,
}

/// `ℒ₊` solve of the regular subproblem seeded with the post-initial conditions.
///
/// Input derivative terms use the input's own `0⁺` values, taken analytically
/// from its closed form.
pub fn lplus_solve_regular(sys: &SysSpec, post: &[Q]) -> Result<RegularSolution> {
    let n = sys.order();
    if post.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: post.len(),
        });
    }
    let (_, regular) = decompose(sys);
    let x_transform = regular.input.laplace()?;
    let m = sys.input_order();
    let x_post: Vec<Q> = (0..m).map(|k| sys.input_post(k)).collect();
    let transform = assemble_transform(sys, post, &x_transform, &x_post);
    if !transform.is_strictly_proper() {
        return Err(Error::ImproperTransform {
            num: transform.num().degree().unwrap_or(0),
            den: transform.den().degree().unwrap_or(0),
        });
    }
    let (closed, leaked) = invert(&transform)?;
    if !leaked.is_zero() {
        return Err(Error::Consistency("regular transform produced delta content".into()));
    }
    check_reconstruction(&transform, &closed)?;
    Ok(RegularSolution {
        regular: closed,
        transform,
    })
}

fn report_from_transform(sys: &SysSpec, proper: &RatFn<Q>) -> Result<JumpReport> {
    let post = initial_values(proper, sys.order())?;
    JumpReport::from_pre_post(sys.y_pre(), &post)
}

/// One-step `ℒ₋` solve with pre-initial data; impulses transform to powers of `s`.
pub fn lminus_solve(sys: &SysSpec) -> Result<Solution> {
    let input = sys.input();
    let impulses = RatFn::from_poly(input.singular.laplace_minus());
    let x_transform = &input.regular.laplace()? + &impulses;
    let x_pre: Vec<Q> = (0..sys.input_order()).map(|k| sys.input_pre(k)).collect();
    let full = assemble_transform(sys, sys.y_pre(), &x_transform, &x_pre);
    let (poly_part, proper) = full.split_proper();
    let (closed, _) = invert(&proper)?;
    check_reconstruction(&proper, &closed)?;
    let report = report_from_transform(sys, &proper)?;
    Ok(combine_solution(
        Method::Lminus,
        RegularSolution {
            regular: closed,
            transform: proper,
        },
        crate::signals::SingDist::from_poly(&poly_part),
        report,
        Vec::new(),
    ))
}

/// Conventional misuse: `ℒ₊` on the full model with `0⁻` data and `ℒ₊{δ⁽ᵏ⁾} = 0`.
///
/// Input derivative terms are seeded with the input's `0⁻` values as well.
/// The result is not a solution of the model whenever the input is impulsive.
pub fn naive_lplus_solve(sys: &SysSpec) -> Result<Solution> {
    let x_transform = sys.input().regular.laplace()?;
    let x_pre: Vec<Q> = (0..sys.input_order()).map(|k| sys.input_pre(k)).collect();
    let transform = assemble_transform(sys, sys.y_pre(), &x_transform, &x_pre);
    let (poly_part, proper) = transform.split_proper();
    let (closed, _) = invert(&proper)?;
    check_reconstruction(&proper, &closed)?;
    let report = report_from_transform(sys, &proper)?;
    let mut warnings = vec![
        "naive-lplus ignores impulses and uses 0- data in a 0+ transform; for comparison only".to_string(),
    ];
    if !poly_part.is_zero() {
        warnings.push("naive-lplus transform was improper; polynomial part dropped".into());
    }
    if closed.is_zero() {
        warnings.push("naive-lplus solution is identically zero".into());
    }
    Ok(combine_solution(
        Method::NaiveLplus,
        RegularSolution {
            regular: closed,
            transform: proper,
        },
        crate::signals::SingDist::zero(),
        report,
        warnings,
    ))
}

/// Singular stage, jumps, then `ℒ₊` on the regular part.
pub struct ModifiedLplus;

impl Solver for ModifiedLplus {
    fn method(&self) -> Method {
        Method::ModifiedLplus
    }

    fn solve(&self, sys: &SysSpec) -> Result<Solution> {
        let singular = singular_stage(sys)?;
        let report = compute_jumps(&singular, sys)?;
        let post = post_initial_conditions(&report);
        let regular = lplus_solve_regular(sys, &post)?;
        let from_transform = initial_values(&regular.transform, sys.order())?;
        if from_transform != post {
            return Err(Error::Consistency(
                "transform initial values differ from the post-initial conditions".into(),
            ));
        }
        Ok(combine_solution(
            Method::ModifiedLplus,
            regular,
            singular.output().clone(),
            report,
            Vec::new(),
        ))
    }
}

pub struct Lminus;

impl Solver for Lminus {
    fn method(&self) -> Method {
        Method::Lminus
    }

    fn solve(&self, sys: &SysSpec) -> Result<Solution> {
        lminus_solve(sys)
    }
}

pub struct NaiveLplus;

impl Solver for NaiveLplus {
    fn method(&self) -> Method {
        Method::NaiveLplus
    }

    fn solve(&self, sys: &SysSpec) -> Result<Solution> {
        naive_lplus_solve(sys)
    }
}
