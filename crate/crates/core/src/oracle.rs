//! Numerical cross-check: state-space realization, mollified impulses and fixed-step RK4.

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use num::Zero;
use serde::Serialize;

use crate::algebra::{q_to_f64, Q};
use crate::decomposition::SysSpec;
use crate::error::{Error, Result};
use crate::laplace::Solution;
use crate::signals::{GenSignal, RegSig};

/// Observer-canonical realization together with its `0⁻` state.
#[derive(Clone, Debug)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DVector<f64>,
    pub d: f64,
    /// Input weights `β₀…βₙ`; `D = β₀`, `B = β₁…βₙ`.
    pub beta: Vec<f64>,
    pub x0: DVector<f64>,
    pub y_pre: Vec<f64>,
}

impl StateSpace {
    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    /// `C(sI − A)⁻¹B + D`
    pub fn transfer(&self, s: Complex64) -> Result<Complex64> {
        let n = self.order();
        let m = DMatrix::from_fn(n, n, |i, j| {
            let diag = if i == j { s } else { Complex64::zero() };
            diag - Complex64::new(self.a[(i, j)], 0.0)
        });
        let rhs = self.b.map(|v| Complex64::new(v, 0.0));
        let x = m.lu().solve(&rhs).ok_or(Error::PoleEvaluation)?;
        let cx: Complex64 = (0..n).map(|i| x[i] * self.c[i]).sum();
        Ok(cx + self.d)
    }

    /// `det(sI − A)`
    pub fn char_eval(&self, s: Complex64) -> Complex64 {
        let n = self.order();
        DMatrix::from_fn(n, n, |i, j| {
            let diag = if i == j { s } else { Complex64::zero() };
            diag - Complex64::new(self.a[(i, j)], 0.0)
        })
        .determinant()
    }
}

pub fn realize_state_space(sys: &SysSpec) -> Result<StateSpace> {
    let n = sys.order();
    let m = sys.input_order();
    if n == 0 {
        return Err(Error::InvalidSystem(
            "state-space realization needs n >= 1; n = 0 is a pure gain".into(),
        ));
    }
    if sys.y_pre().len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: sys.y_pre().len(),
        });
    }
    let a = sys.a();
    let mut padded = vec![Q::zero(); n - m];
    padded.extend_from_slice(sys.b());
    let mut beta: Vec<Q> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut bk = padded[k].clone();
        for i in 1..=k {
            bk -= &a[i] * &beta[k - i];
        }
        beta.push(bk);
    }
    let beta: Vec<f64> = beta.iter().map(q_to_f64).collect();
    let mut am = DMatrix::zeros(n, n);
    for i in 0..n - 1 {
        am[(i, i + 1)] = 1.0;
    }
    for j in 0..n {
        am[(n - 1, j)] = -q_to_f64(&a[n - j]);
    }
    let mut c = DVector::zeros(n);
    c[0] = 1.0;
    // y⁽ᵏ⁾ = x_{k+1} + Σ_{i≤k} βᵢ x⁽ᵏ⁻ⁱ⁾, and the input is constant before 0
    let pre_input = q_to_f64(sys.input().regular.pre_value());
    let y_pre: Vec<f64> = sys.y_pre().iter().map(q_to_f64).collect();
    let x0 = DVector::from_fn(n, |k, _| y_pre[k] - beta[k] * pre_input);
    Ok(StateSpace {
        a: am,
        b: DVector::from_column_slice(&beta[1..]),
        c,
        d: beta[0],
        beta,
        x0,
        y_pre,
    })
}

/// Float copy of a regular signal for the inner RK4 loop.
#[derive(Clone, Debug)]
struct FloatSignal {
    atoms: Vec<(Complex64, i32, Complex64)>,
}

impl FloatSignal {
    fn new(sig: &RegSig) -> Self {
        FloatSignal {
            atoms: sig
                .atoms()
                .iter()
                .map(|a| (a.coeff.to_c64(), a.power as i32, a.rate.to_c64()))
                .collect(),
        }
    }

    fn eval(&self, t: f64) -> f64 {
        self.atoms
            .iter()
            .map(|(c, p, r)| (c * t.powi(*p) * (r * t).exp()).re)
            .sum()
    }
}

/// Unit-area bump `35/(16ε)·(1 − u²)³`, `u = (2t − ε)/ε`, supported on `[0, ε]`.
fn bump(k: usize, t: f64, eps: f64) -> f64 {
    if t <= 0.0 || t >= eps {
        return 0.0;
    }
    let u = (2.0 * t - eps) / eps;
    let w = 1.0 - u * u;
    let scale = 35.0 / (16.0 * eps);
    match k {
        0 => scale * w * w * w,
        1 => scale * (2.0 / eps) * (-6.0 * u * w * w),
        2 => scale * (4.0 / (eps * eps)) * w * (30.0 * u * u - 6.0),
        _ => unreachable!("orders above 2 are rejected up front"),
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct OracleOptions {
    /// Admit `δ''` input content.
    pub allow_second_derivative: bool,
}

struct Forcing {
    regular: FloatSignal,
    deltas: Vec<(usize, f64)>,
    eps: f64,
}

impl Forcing {
    fn new(input: &GenSignal, eps: f64, opts: OracleOptions) -> Result<Self> {
        let max = if opts.allow_second_derivative { 2 } else { 1 };
        let mut deltas = Vec::new();
        for (k, c) in input.singular.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k > max {
                return Err(Error::UnsupportedInput(format!(
                    "oracle cannot mollify delta derivatives of order {k} (max {max})"
                )));
            }
            deltas.push((k, q_to_f64(c)));
        }
        Ok(Forcing {
            regular: FloatSignal::new(&input.regular),
            deltas,
            eps,
        })
    }

    /// Input value for `t ≥ 0`.
    fn at(&self, t: f64) -> f64 {
        let pulses: f64 = self.deltas.iter().map(|(k, c)| c * bump(*k, t, self.eps)).sum();
        self.regular.eval(t) + pulses
    }
}

fn rhs(ss: &StateSpace, f: &Forcing, t: f64, x: &DVector<f64>) -> DVector<f64> {
    &ss.a * x + &ss.b * f.at(t)
}

fn rk4_step(ss: &StateSpace, f: &Forcing, t: f64, x: &DVector<f64>, h: f64) -> DVector<f64> {
    let k1 = rhs(ss, f, t, x);
    let k2 = rhs(ss, f, t + h / 2.0, &(x + &k1 * (h / 2.0)));
    let k3 = rhs(ss, f, t + h / 2.0, &(x + &k2 * (h / 2.0)));
    let k4 = rhs(ss, f, t + h, &(x + &k3 * h));
    x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Equal steps of at most `h` from `t0` to `t1`; calls `sample` after each step.
fn propagate(
    ss: &StateSpace,
    f: &Forcing,
    mut x: DVector<f64>,
    t0: f64,
    t1: f64,
    h: f64,
    mut sample: impl FnMut(f64, &DVector<f64>),
) -> Result<DVector<f64>> {
    let steps = (((t1 - t0) / h) - 1e-9).ceil().max(1.0) as usize;
    let h = (t1 - t0) / steps as f64;
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        x = rk4_step(ss, f, t, &x, h);
        let t_next = if i + 1 == steps { t1 } else { t0 + (i + 1) as f64 * h };
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { t: t_next });
        }
        sample(t_next, &x);
    }
    Ok(x)
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub epsilon: f64,
}

impl Trajectory {
    /// Largest `|y(t) − reference(t)|` over samples with `from ≤ t ≤ to`.
    pub fn max_error(
        &self,
        from: f64,
        to: f64,
        reference: impl Fn(f64) -> Result<f64>,
    ) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (t, y) in self.times.iter().zip(&self.values) {
            if *t >= from && *t <= to {
                worst = worst.max((y - reference(*t)?).abs());
            }
        }
        Ok(worst)
    }
}

fn check_steps(eps: f64, t_end: f64, dt: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::StepSize(format!("epsilon must be positive, got {eps}")));
    }
    if !(dt > 0.0) || dt > eps / 20.0 * (1.0 + 1e-12) {
        return Err(Error::StepSize(format!(
            "dt = {dt} must satisfy 0 < dt <= epsilon/20 = {}",
            eps / 20.0
        )));
    }
    if !(t_end > 10.0 * eps) {
        return Err(Error::StepSize(format!(
            "t_end = {t_end} must exceed 10*epsilon = {}",
            10.0 * eps
        )));
    }
    Ok(())
}

pub fn integrate_mollified(
    ss: &StateSpace,
    input: &GenSignal,
    epsilon: f64,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    integrate_mollified_opts(ss, input, epsilon, t_end, dt, OracleOptions::default())
}

pub fn integrate_mollified_opts(
    ss: &StateSpace,
    input: &GenSignal,
    epsilon: f64,
    t_end: f64,
    dt: f64,
    opts: OracleOptions,
) -> Result<Trajectory> {
    check_steps(epsilon, t_end, dt)?;
    let f = Forcing::new(input, epsilon, opts)?;
    let output = |t: f64, x: &DVector<f64>| x[0] + ss.d * f.at(t);
    let mut times = vec![0.0];
    let mut values = vec![output(0.0, &ss.x0)];
    let mut record = |t: f64, x: &DVector<f64>| {
        times.push(t);
        values.push(output(t, x));
    };
    let x = propagate(ss, &f, ss.x0.clone(), 0.0, 2.0 * epsilon, epsilon / 40.0, &mut record)?;
    propagate(ss, &f, x, 2.0 * epsilon, t_end, dt, &mut record)?;
    Ok(Trajectory {
        times,
        values,
        epsilon,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct JumpEstimate {
    pub order: usize,
    /// `y⁽ᵏ⁾(5ε) − y⁽ᵏ⁾(0⁻)` per width.
    pub raw: Vec<f64>,
    pub extrapolated: f64,
    /// Log-log slope of `|raw − extrapolated|` against `ε`; `None` when the raw values are already exact.
    pub slope: Option<f64>,
    pub converged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct JumpEstimates {
    /// Widths, widest first.
    pub epsilons: Vec<f64>,
    pub orders: Vec<JumpEstimate>,
}

/// Polynomial extrapolation of `(xs, ys)` to `x = 0` by Neville's scheme.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let j = i + level;
            p[i] = (xs[i] * p[i + 1] - xs[j] * p[i]) / (xs[i] - xs[j]);
        }
    }
    p[0]
}

/// Least-squares slope of `log|values − target|` against `log ε`.
pub fn convergence_slope(epsilons: &[f64], values: &[f64], target: f64) -> Option<f64> {
    let floor = 1e-12 * (1.0 + target.abs());
    let pts: Vec<(f64, f64)> = epsilons
        .iter()
        .zip(values)
        .map(|(e, v)| (e.ln(), (v - target).abs()))
        .collect();
    if pts.iter().all(|(_, err)| *err <= floor) {
        return None;
    }
    let pts: Vec<(f64, f64)> = pts.iter().map(|(x, e)| (*x, e.max(floor).ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}

fn sorted_ladder(epsilons: &[f64]) -> Result<Vec<f64>> {
    if epsilons.len() < 2 {
        return Err(Error::StepSize("at least two mollifier widths are required".into()));
    }
    let mut eps = epsilons.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    for w in eps.windows(2) {
        if !(w[1] > 0.0) || w[0] / w[1] < 2.0 * (1.0 - 1e-12) {
            return Err(Error::StepSize(format!(
                "successive widths need ratio >= 2, got {} and {}",
                w[0], w[1]
            )));
        }
    }
    Ok(eps)
}

pub fn estimate_jumps(ss: &StateSpace, input: &GenSignal, epsilons: &[f64]) -> Result<JumpEstimates> {
    estimate_jumps_opts(ss, input, epsilons, OracleOptions::default())
}

pub fn estimate_jumps_opts(
    ss: &StateSpace,
    input: &GenSignal,
    epsilons: &[f64],
    opts: OracleOptions,
) -> Result<JumpEstimates> {
    let eps = sorted_ladder(epsilons)?;
    let n = ss.order();
    let input_derivs: Vec<FloatSignal> = (0..n)
        .map(|k| FloatSignal::new(&input.regular.nth_derivative(k)))
        .collect();
    let mut raw = vec![Vec::with_capacity(eps.len()); n];
    for &e in &eps {
        let f = Forcing::new(input, e, opts)?;
        let h = e / 40.0;
        let x = propagate(ss, &f, ss.x0.clone(), 0.0, 2.0 * e, h, |_, _| {})?;
        let x = propagate(ss, &f, x, 2.0 * e, 5.0 * e, h, |_, _| {})?;
        let t = 5.0 * e;
        for (k, row) in raw.iter_mut().enumerate() {
            let feed: f64 = (0..=k).map(|i| ss.beta[i] * input_derivs[k - i].eval(t)).sum();
            row.push(x[k] + feed - ss.y_pre[k]);
        }
    }
    let orders = raw
        .into_iter()
        .enumerate()
        .map(|(order, raw)| {
            let extrapolated = extrapolate_to_zero(&eps, &raw);
            let tol = 1e-9 * (1.0 + extrapolated.abs());
            let diffs: Vec<f64> = raw.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
            let converged = diffs.windows(2).all(|d| d[1] < d[0] || d[1] <= tol);
            JumpEstimate {
                order,
                slope: convergence_slope(&eps, &raw, extrapolated),
                raw,
                extrapolated,
                converged,
            }
        })
        .collect();
    Ok(JumpEstimates {
        epsilons: eps,
        orders,
    })
}

/// Oracle run against an analytic solution.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub estimates: JumpEstimates,
    pub analytic_jumps: Vec<f64>,
    /// Slope of the raw estimates against the analytic jumps, per order.
    pub slopes: Vec<Option<f64>>,
    pub jump_errors: Vec<f64>,
    pub t_end: f64,
    /// `max |y − y_r|` over `[10ε, t_end]`, per width.
    pub trajectory_errors: Vec<f64>,
    /// Fitted `C` in `error ≤ C·ε`.
    pub error_constant: f64,
    pub errors_decreasing: bool,
    pub pass: bool,
}

pub const SLOPE_MIN: f64 = 0.9;
pub const JUMP_TOL: f64 = 1e-2;

pub fn verify(
    sys: &SysSpec,
    solution: &Solution,
    epsilons: &[f64],
    t_end: f64,
    opts: OracleOptions,
) -> Result<OracleReport> {
    let ss = realize_state_space(sys)?;
    let estimates = estimate_jumps_opts(&ss, sys.input(), epsilons, opts)?;
    let analytic_jumps: Vec<f64> = solution.report.jumps().iter().map(q_to_f64).collect();
    let slopes: Vec<Option<f64>> = estimates
        .orders
        .iter()
        .map(|e| convergence_slope(&estimates.epsilons, &e.raw, analytic_jumps[e.order]))
        .collect();
    let jump_errors: Vec<f64> = estimates
        .orders
        .iter()
        .map(|e| (e.extrapolated - analytic_jumps[e.order]).abs())
        .collect();
    let mut trajectory_errors = Vec::new();
    for &e in &estimates.epsilons {
        let traj = integrate_mollified_opts(&ss, sys.input(), e, t_end, e / 20.0, opts)?;
        trajectory_errors.push(traj.max_error(10.0 * e, t_end, |t| solution.eval(t))?);
    }
    let error_constant = trajectory_errors
        .iter()
        .zip(&estimates.epsilons)
        .map(|(err, e)| err / e)
        .fold(0.0, f64::max);
    let errors_decreasing = trajectory_errors.windows(2).all(|w| w[1] < w[0]);
    let slopes_ok = slopes.iter().all(|s| s.is_none_or(|s| s >= SLOPE_MIN));
    let jumps_ok = jump_errors
        .iter()
        .zip(&analytic_jumps)
        .all(|(err, j)| *err <= JUMP_TOL * (1.0 + j.abs()));
    Ok(OracleReport {
        pass: slopes_ok && jumps_ok && errors_decreasing,
        estimates,
        analytic_jumps,
        slopes,
        jump_errors,
        t_end,
        trajectory_errors,
        error_constant,
        errors_decreasing,
    })
}
