//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! verdict lines are always printed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{qi, random_known_ratfn, random_systems, rng};
use laplace_init::algebra::{Cplx, Poly, RatFn, Q};
use laplace_init::decomposition::singular_stage;
use laplace_init::laplace::{
    check_zero_plus, compare_methods, comparison_grid, comparison_horizon, invert, Lminus, ModifiedLplus,
    NaiveLplus,
};
use laplace_init::oracle::{verify, OracleOptions};
use laplace_init::render;
use laplace_init::signals::{Atom, GenSignal, RegSig, SingDist};
use laplace_init::{Method, Solver, SolverRegistry, SysSpec};
use num::complex::Complex64;
use num::Zero;
use rand::Rng;

const SEED: u64 = 0x5eed_0001;
const SUITE_SIZE: usize = 200;

type Outcome = Result<String, String>;

fn manometer() -> SysSpec {
    SysSpec::new(vec![qi(1), qi(2), qi(1)], vec![qi(1), qi(0)], vec![qi(1), qi(-2)], GenSignal::impulse(qi(1)))
        .unwrap()
}

fn p(c: &[i64]) -> Poly<Q> {
    Poly::from_i64s(c)
}

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn manometer_golden() -> Outcome {
    let sol = ModifiedLplus.solve(&manometer()).map_err(|e| e.to_string())?;
    ensure(sol.report.jumps() == vec![qi(1), qi(-2)], format!("jumps {:?}", sol.report.jumps()))?;
    ensure(sol.post_values() == vec![qi(2), qi(-4)], "post-initial values")?;
    let expected = RatFn::new(p(&[0, 2]), p(&[1, 2, 1])).unwrap();
    ensure(sol.transform == expected, format!("transform {}", render::ratfn(&sol.transform)))?;
    let closed = RegSig::new(
        vec![
            Atom::new(Cplx::real(qi(2)), 0, Cplx::real(qi(-1))),
            Atom::new(Cplx::real(qi(-2)), 1, Cplx::real(qi(-1))),
        ],
        qi(0),
    );
    ensure(sol.regular == closed && sol.regular.is_exact(), "closed form atoms")?;
    ensure(sol.singular.is_zero(), "y_s should vanish")?;
    let ivt = sol.ivt().map_err(|e| e.to_string())?;
    ensure(ivt.value == qi(2) && ivt.pass, format!("IVT {}", ivt.value))?;
    Ok(format!(
        "jumps (1, -2), post (2, -4), Y_r = {}, y_r = {}, IVT = {} (exact)",
        render::ratfn(&sol.transform),
        render::closed_form(&sol.regular),
        ivt.value
    ))
}

fn consistency_suite(systems: &[SysSpec]) -> Outcome {
    let mut worst_abs: f64 = 0.0;
    let mut failures = Vec::new();
    let mut exact = 0;
    for (i, sys) in systems.iter().enumerate() {
        match ModifiedLplus.solve(sys) {
            Ok(sol) => {
                let post = sol.post_values();
                let check = check_zero_plus(&sol.regular, &post);
                worst_abs = worst_abs.max(check.max_error);
                if sol.regular.is_exact() {
                    exact += 1;
                }
                if !check.pass {
                    failures.push(format!("#{i}: error {:e}", check.max_error));
                }
            }
            Err(e) => failures.push(format!("#{i}: {e}")),
        }
    }
    ensure(failures.is_empty(), format!("{} failures: {}", failures.len(), failures.join("; ")))?;
    Ok(format!(
        "{} systems, max |y_r^(k)(0+) - post_k| = {:.3e} (tol 1e-9 relative), {exact} on the exact path",
        systems.len(),
        worst_abs
    ))
}

fn singular_residual_suite(systems: &[SysSpec]) -> Outcome {
    let mut failures = Vec::new();
    let mut max_order = 0;
    for (i, sys) in systems.iter().enumerate() {
        match singular_stage(sys) {
            Ok(s) => {
                let r = s.residual(sys);
                if !r.is_zero() {
                    failures.push(format!("#{i}: residual {}", render::sing_dist(&r)));
                }
                if !s.is_chain_consistent() {
                    failures.push(format!("#{i}: derivative parts do not chain"));
                }
                max_order = max_order.max(s.derivative_parts.iter().filter_map(SingDist::max_order).max().unwrap_or(0));
            }
            Err(e) => failures.push(format!("#{i}: {e}")),
        }
    }
    ensure(failures.is_empty(), format!("{} failures: {}", failures.len(), failures.join("; ")))?;
    Ok(format!("{} systems, residual identically zero, derivative parts chain by plain deltas, highest delta order {max_order}", systems.len()))
}

fn lminus_equivalence_suite(systems: &[SysSpec]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for (i, sys) in systems.iter().enumerate() {
        let (m, l) = match (ModifiedLplus.solve(sys), Lminus.solve(sys)) {
            (Ok(m), Ok(l)) => (m, l),
            (Err(e), _) | (_, Err(e)) => {
                failures.push(format!("#{i}: {e}"));
                continue;
            }
        };
        if m.transform != l.transform {
            failures.push(format!("#{i}: transforms differ"));
            continue;
        }
        if m.singular != l.singular {
            failures.push(format!("#{i}: singular parts differ"));
            continue;
        }
        let grid = comparison_grid(comparison_horizon(&m.regular));
        let mut dev: f64 = 0.0;
        for &t in &grid {
            let (a, b) = (m.eval(t), l.eval(t));
            match (a, b) {
                (Ok(a), Ok(b)) => dev = dev.max((a - b).abs()),
                _ => dev = f64::INFINITY,
            }
        }
        worst = worst.max(dev);
        if !(dev <= 1e-8) {
            failures.push(format!("#{i}: deviation {dev:e}"));
        }
    }
    ensure(failures.is_empty(), format!("{} failures: {}", failures.len(), failures.join("; ")))?;
    Ok(format!(
        "{} systems, identical canonical transforms and delta parts, max grid deviation {worst:.3e}",
        systems.len()
    ))
}

fn naive_critique() -> Outcome {
    let sys = SysSpec::new(vec![qi(1), qi(1)], vec![qi(1)], vec![qi(0)], GenSignal::impulse(qi(1))).unwrap();
    let naive = NaiveLplus.solve(&sys).map_err(|e| e.to_string())?;
    let modified = ModifiedLplus.solve(&sys).map_err(|e| e.to_string())?;
    let lminus = Lminus.solve(&sys).map_err(|e| e.to_string())?;
    let decay = RegSig::exponential(qi(1), qi(-1));
    ensure(naive.is_identically_zero(), "naive solution should be identically zero")?;
    ensure(modified.regular == decay && modified.singular.is_zero(), "modified should give e^{-t}")?;
    ensure(lminus.regular == decay && lminus.singular.is_zero(), "lminus should give e^{-t}")?;
    let c = compare_methods(&sys, &SolverRegistry::builtin()).map_err(|e| e.to_string())?;
    let n = c.get(Method::NaiveLplus).ok_or("naive missing from comparison")?;
    ensure(n.identically_zero && !n.consistent && n.max_deviation == 1.0, "comparison should flag naive")?;
    ensure(!n.ivt.pass && n.ivt.value.is_zero() && n.ivt.expected == qi(1), "naive IVT")?;
    let l = c.get(Method::Lminus).ok_or("lminus missing")?;
    ensure(l.max_deviation == 0.0 && l.consistent, "lminus should match")?;
    Ok(format!(
        "naive y = {} vs modified/lminus y = {}; compare: naive deviation {}, IVT {} vs expected {}",
        render::closed_form(&naive.regular),
        render::closed_form(&modified.regular),
        n.max_deviation,
        n.ivt.value,
        n.ivt.expected
    ))
}

fn oracle_agreement() -> Outcome {
    let sys = manometer();
    let sol = ModifiedLplus.solve(&sys).map_err(|e| e.to_string())?;
    let r = verify(&sys, &sol, &[1e-2, 5e-3, 2.5e-3], 8.0, OracleOptions::default()).map_err(|e| e.to_string())?;
    let slopes: Vec<f64> = r.slopes.iter().map(|s| s.unwrap_or(f64::INFINITY)).collect();
    let extrapolated: Vec<f64> = r.estimates.orders.iter().map(|o| o.extrapolated).collect();
    let detail = format!(
        "jumps -> ({:.6}, {:.6}), slopes ({:.3}, {:.3}), max errors {:?}, final {:.4}",
        extrapolated[0],
        extrapolated[1],
        slopes[0],
        slopes[1],
        r.trajectory_errors.iter().map(|e| format!("{e:.4}")).collect::<Vec<_>>(),
        r.trajectory_errors.last().copied().unwrap_or(f64::NAN)
    );
    ensure((extrapolated[0] - 1.0).abs() <= 1e-3, format!("y jump: {detail}"))?;
    ensure((extrapolated[1] + 2.0).abs() <= 1e-2, format!("y' jump: {detail}"))?;
    ensure(slopes.iter().all(|s| *s >= 0.9), format!("slope: {detail}"))?;
    ensure(r.errors_decreasing, format!("errors not decreasing: {detail}"))?;
    ensure(r.trajectory_errors.last().is_some_and(|e| *e <= 0.02), format!("final error: {detail}"))?;
    Ok(detail)
}

fn inversion_suite() -> Outcome {
    let mut r = rng(SEED ^ 0x7);
    let (mut exact, mut float) = (0, 0);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for i in 0..100 {
        let known = random_known_ratfn(&mut r);
        let (sig, sing) = match invert(&known.f) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("#{i}: {e}"));
                continue;
            }
        };
        if !sing.is_zero() {
            failures.push(format!("#{i}: delta content from a strictly proper transform"));
            continue;
        }
        if known.rational_path() {
            exact += 1;
            match sig.laplace() {
                Ok(back) if back == known.f => {}
                Ok(back) => failures.push(format!(
                    "#{i}: {} re-transformed to {}",
                    render::ratfn(&known.f),
                    render::ratfn(&back)
                )),
                Err(e) => failures.push(format!("#{i}: {e}")),
            }
        } else {
            float += 1;
            for _ in 0..20 {
                let s = Complex64::new(r.gen_range(-6.0..6.0), r.gen_range(-6.0..6.0));
                let direct = match known.f.eval_c64(s) {
                    Ok(v) => v,
                    Err(_) => continue,
                };
                let err = (sig.laplace_eval(s) - direct).norm() / (1.0 + direct.norm());
                worst = worst.max(err);
                if !(err <= 1e-8) {
                    failures.push(format!("#{i}: error {err:e} at s = {s}"));
                    break;
                }
            }
        }
    }
    ensure(failures.is_empty(), format!("{} failures: {}", failures.len(), failures.join("; ")))?;
    Ok(format!("{exact} exact round trips identical, {float} float cases within {worst:.2e} at 20 points each"))
}

fn main() -> ExitCode {
    let systems = random_systems(SEED, SUITE_SIZE);
    let criteria: Vec<(u8, &str, Duration, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, "manometer golden case", Duration::from_secs(1), Box::new(manometer_golden)),
        (2, "0+ consistency", Duration::from_secs(30), Box::new(|| consistency_suite(&systems))),
        (3, "singular residual", Duration::from_secs(5), Box::new(|| singular_residual_suite(&systems))),
        (4, "lminus equivalence", Duration::from_secs(60), Box::new(|| lminus_equivalence_suite(&systems))),
        (5, "naive lplus critique", Duration::from_secs(5), Box::new(naive_critique)),
        (6, "oracle agreement", Duration::from_secs(60), Box::new(oracle_agreement)),
        (7, "inversion correctness", Duration::from_secs(10), Box::new(inversion_suite)),
    ];
    let mut failed = 0;
    for (id, name, budget, check) in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| check()))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget:?} budget")),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "[{}] criterion {id} ({name}): {detail} [{:.2}s]",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
