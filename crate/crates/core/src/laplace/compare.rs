use serde::Serialize;

use super::registry::SolverRegistry;
use super::{check_zero_plus, ivt_check, IvtResult, Method, Solution};
use crate::algebra::Q;
use crate::decomposition::SysSpec;
use crate::error::{Error, Result};
use crate::render;
use crate::signals::RegSig;

pub const GRID_POINTS: usize = 400;

#[derive(Clone, Debug, Serialize)]
pub struct MethodComparison {
    pub method: Method,
    pub closed_form: String,
    pub singular: String,
    /// Closed-form derivatives at `0⁺`.
    pub zero_plus: Vec<f64>,
    pub ivt: IvtResult,
    /// Largest `|y_r − y_r,ref|` over the grid.
    pub max_deviation: f64,
    /// The closed form reproduces the reference post-initial conditions.
    pub consistent: bool,
    pub singular_matches: bool,
    pub identically_zero: bool,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub horizon: f64,
    pub grid_points: usize,
    #[serde(serialize_with = "render::ser_q_vec")]
    pub reference_post: Vec<Q>,
    pub methods: Vec<MethodComparison>,
}

impl Comparison {
    pub fn get(&self, method: Method) -> Option<&MethodComparison> {
        self.methods.iter().find(|m| m.method == method)
    }
}

/// `T = 10 / min|Re λ|` clamped to `[1, 100]`.
pub fn comparison_horizon(sig: &RegSig) -> f64 {
    let min_re = sig
        .atoms()
        .iter()
        .map(|a| a.rate.re_f64().abs())
        .fold(f64::INFINITY, f64::min);
    let t = if min_re == 0.0 { f64::INFINITY } else { 10.0 / min_re };
    if sig.is_zero() {
        return 1.0;
    }
    t.clamp(1.0, 100.0)
}

pub fn comparison_grid(horizon: f64) -> Vec<f64> {
    (0..GRID_POINTS)
        .map(|i| horizon * i as f64 / (GRID_POINTS - 1) as f64)
        .collect()
}

fn deviation(a: f64, b: f64) -> f64 {
    if a.is_finite() && b.is_finite() {
        (a - b).abs()
    } else if a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()) {
        0.0
    } else {
        f64::INFINITY
    }
}

pub fn max_deviation(a: &Solution, b: &Solution, grid: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &t in grid {
        worst = worst.max(deviation(a.eval(t)?, b.eval(t)?));
    }
    Ok(worst)
}

/// Solve with every registered method and measure each against `modified-lplus`.
pub fn compare_methods(sys: &SysSpec, registry: &SolverRegistry) -> Result<Comparison> {
    let reference = registry
        .must_get(Method::ModifiedLplus.as_str())
        .map_err(|_| Error::UnsupportedInput("comparison needs the modified-lplus solver".into()))?
        .solve(sys)?;
    let post = reference.post_values();
    let expected0 = post.first().cloned().unwrap_or_default();
    let horizon = comparison_horizon(&reference.regular);
    let grid = comparison_grid(horizon);
    let mut methods = Vec::new();
    for solver in registry.iter() {
        let sol = if solver.method() == Method::ModifiedLplus {
            reference.clone()
        } else {
            solver.solve(sys)?
        };
        let check = check_zero_plus(&sol.regular, &post);
        methods.push(MethodComparison {
            method: sol.method,
            closed_form: render::closed_form(&sol.regular),
            singular: render::sing_dist(&sol.singular),
            zero_plus: check.values,
            ivt: ivt_check(&sol.transform, &expected0)?,
            max_deviation: max_deviation(&sol, &reference, &grid)?,
            consistent: check.pass,
            singular_matches: sol.singular == reference.singular,
            identically_zero: sol.is_identically_zero(),
            warnings: sol.warnings.clone(),
        });
    }
    Ok(Comparison {
        horizon,
        grid_points: GRID_POINTS,
        reference_post: post,
        methods,
    })
}
