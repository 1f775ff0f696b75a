//! Worked examples end to end, one module boundary at a time.

mod common;

use common::{q, qi};
use laplace_init::algebra::{poly_roots_exact, Cplx, Poly, RatFn, Q};
use laplace_init::decomposition::{build_singular_system, decompose, singular_stage};
use laplace_init::initialization::{compute_jumps, post_initial_conditions, JumpReport};
use laplace_init::laplace::{
    compare_methods, ivt_check, lminus_solve, lplus_solve_regular, naive_lplus_solve, ModifiedLplus,
};
use laplace_init::render;
use laplace_init::signals::{Atom, GenSignal, RegSig, SingDist};
use laplace_init::{Method, Solver, SolverRegistry, SysSpec};

fn p(c: &[i64]) -> Poly<Q> {
    Poly::from_i64s(c)
}

fn rf(num: &[i64], den: &[i64]) -> RatFn<Q> {
    RatFn::new(p(num), p(den)).unwrap()
}

fn manometer() -> SysSpec {
    SysSpec::new(vec![qi(1), qi(2), qi(1)], vec![qi(1), qi(0)], vec![qi(1), qi(-2)], GenSignal::impulse(qi(1)))
        .unwrap()
}

fn first_order(b: Vec<Q>, input: GenSignal) -> SysSpec {
    SysSpec::new(vec![qi(1), qi(1)], b, vec![qi(0)], input).unwrap()
}

fn manometer_closed_form() -> RegSig {
    RegSig::new(
        vec![
            Atom::new(Cplx::real(qi(2)), 0, Cplx::real(qi(-1))),
            Atom::new(Cplx::real(qi(-2)), 1, Cplx::real(qi(-1))),
        ],
        qi(0),
    )
}

#[test]
fn manometer_stage_by_stage() {
    let sys = manometer();
    let system = build_singular_system(&sys);
    assert_eq!(system.equations[1].rhs, SingDist::delta(qi(1), 0));
    let singular = singular_stage(&sys).unwrap();
    assert_eq!(singular.derivative_parts[0], SingDist::zero());
    assert_eq!(singular.derivative_parts[1], SingDist::delta(qi(1), 0));
    assert_eq!(singular.derivative_parts[2], SingDist::new(vec![qi(-2), qi(1)]));
    let report = compute_jumps(&singular, &sys).unwrap();
    assert_eq!(report.jumps(), vec![qi(1), qi(-2)]);
    let post = post_initial_conditions(&report);
    assert_eq!(post, vec![qi(2), qi(-4)]);
    let (_, regular) = decompose(&sys);
    assert!(regular.forcing().is_zero());
    let r = lplus_solve_regular(&sys, &post).unwrap();
    assert_eq!(r.transform, rf(&[0, 2], &[1, 2, 1]));
    assert_eq!(r.regular, manometer_closed_form());
    let ivt = ivt_check(&r.transform, &post[0]).unwrap();
    assert!(ivt.pass && ivt.value == qi(2));
}

#[test]
fn manometer_closed_form_values() {
    let y = ModifiedLplus.solve(&manometer()).unwrap();
    assert_eq!(y.eval(0.0).unwrap(), 2.0);
    assert!(y.eval(1.0).unwrap().abs() < 1e-15);
    for t in [0.1f64, 0.5, 2.0, 7.5] {
        let expected = 2.0 * (-t).exp() * (1.0 - t);
        assert!((y.eval(t).unwrap() - expected).abs() < 1e-14);
    }
    assert_eq!(y.regular.exact_derivative_at_zero_plus(1), Some(qi(-4)));
}

#[test]
fn manometer_partial_fractions() {
    let pf = rf(&[0, 2], &[1, 2, 1]).partial_fractions().unwrap();
    assert_eq!(pf.terms.len(), 2);
    for t in &pf.terms {
        assert_eq!(t.pole, Cplx::real(qi(-1)));
        let expected = if t.order == 1 { qi(2) } else { qi(-2) };
        assert_eq!(t.residue, Cplx::real(expected));
    }
    assert_eq!(pf.recombine_exact().unwrap(), rf(&[0, 2], &[1, 2, 1]));
}

#[test]
fn first_order_impulse_jumps_to_one() {
    let sys = first_order(vec![qi(1)], GenSignal::impulse(qi(1)));
    let report = compute_jumps(&singular_stage(&sys).unwrap(), &sys).unwrap();
    assert_eq!(post_initial_conditions(&report), vec![qi(1)]);
    let sol = ModifiedLplus.solve(&sys).unwrap();
    assert_eq!(sol.regular, RegSig::exponential(qi(1), qi(-1)));
    assert_eq!(sol.transform, rf(&[1], &[1, 1]));
}

#[test]
fn biproper_impulse_is_a_pure_delta() {
    let sys = first_order(vec![qi(1), qi(1)], GenSignal::impulse(qi(1)));
    for sol in [ModifiedLplus.solve(&sys).unwrap(), lminus_solve(&sys).unwrap()] {
        assert!(sol.regular.is_zero());
        assert_eq!(sol.singular, SingDist::delta(qi(1), 0));
        assert_eq!(sol.report.jumps(), vec![qi(0)]);
    }
}

#[test]
fn zero_problem_gives_zero_solution() {
    let sys = SysSpec::new(vec![qi(1), qi(3), qi(2)], vec![qi(1)], vec![qi(0), qi(0)], GenSignal::default()).unwrap();
    let sol = ModifiedLplus.solve(&sys).unwrap();
    assert!(sol.is_identically_zero());
    assert_eq!(sol.report, JumpReport::from_pre_post(&[qi(0), qi(0)], &[qi(0), qi(0)]).unwrap());
}

#[test]
fn continuity_without_singular_content() {
    let sys = SysSpec::new(vec![qi(1), qi(3), qi(2)], vec![qi(1)], vec![qi(3), qi(1)], GenSignal::default()).unwrap();
    let report = compute_jumps(&singular_stage(&sys).unwrap(), &sys).unwrap();
    assert_eq!(post_initial_conditions(&report), vec![qi(3), qi(1)]);
}

#[test]
fn unit_step_forcing() {
    let sys = first_order(vec![qi(1)], GenSignal::new(RegSig::step(qi(1)), SingDist::zero()));
    let sol = ModifiedLplus.solve(&sys).unwrap();
    assert_eq!(sol.regular, RegSig::step(qi(1)).add(&RegSig::exponential(qi(-1), qi(-1))));
    assert!((sol.eval(1.0).unwrap() - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
}

#[test]
fn naive_lplus_examples() {
    let impulse = first_order(vec![qi(1)], GenSignal::impulse(qi(1)));
    assert!(naive_lplus_solve(&impulse).unwrap().is_identically_zero());
    let man = naive_lplus_solve(&manometer()).unwrap();
    assert_eq!(man.transform, rf(&[0, 1], &[1, 2, 1]));
    let ivt = ivt_check(&man.transform, &qi(2)).unwrap();
    assert_eq!(ivt.value, qi(1));
    assert!(!ivt.pass);
}

#[test]
fn compare_table_for_manometer() {
    let c = compare_methods(&manometer(), &SolverRegistry::builtin()).unwrap();
    assert_eq!(c.get(Method::Lminus).unwrap().max_deviation, 0.0);
    let naive = c.get(Method::NaiveLplus).unwrap();
    assert!(naive.max_deviation > 0.3);
    assert_eq!((naive.ivt.value.clone(), naive.ivt.expected.clone()), (qi(1), qi(2)));
}

#[test]
fn step_problem_all_methods_agree() {
    let sys = SysSpec::new(
        vec![qi(1), qi(3), qi(2)],
        vec![qi(2)],
        vec![qi(1), qi(-1)],
        GenSignal::new(RegSig::step(qi(1)).with_pre_value(qi(1)), SingDist::zero()),
    )
    .unwrap();
    let c = compare_methods(&sys, &SolverRegistry::builtin()).unwrap();
    for m in &c.methods {
        assert!(m.max_deviation <= 1e-9, "{}: {}", m.method, m.max_deviation);
        assert!(m.consistent);
    }
}

#[test]
fn complex_poles_stay_exact_and_real() {
    // y'' + 2y' + 5y = x, x = δ: y = (1/2) e^{-t} sin(2t)
    let sys = SysSpec::new(vec![qi(1), qi(2), qi(5)], vec![qi(1)], vec![qi(0), qi(0)], GenSignal::impulse(qi(1)))
        .unwrap();
    let sol = ModifiedLplus.solve(&sys).unwrap();
    assert!(sol.regular.is_exact());
    assert_eq!(render::closed_form(&sol.regular), "e^{-1 t} (1/2 sin(2 t))");
    for t in [0.3f64, 1.7, 4.0] {
        let expected = 0.5 * (-t).exp() * (2.0 * t).sin();
        assert!((sol.eval(t).unwrap() - expected).abs() < 1e-14);
    }
}

#[test]
fn irrational_poles_take_the_float_path() {
    // y'' - 2y = x, pre [1, 0], x = 0: y = cosh(√2 t)
    let sys = SysSpec::new(vec![qi(1), qi(0), qi(-2)], vec![qi(1)], vec![qi(1), qi(0)], GenSignal::default()).unwrap();
    let sol = ModifiedLplus.solve(&sys).unwrap();
    assert!(!sol.regular.is_exact());
    assert!(sol.zero_plus_consistency().pass);
    let t = 0.8f64;
    assert!((sol.eval(t).unwrap() - (2f64.sqrt() * t).cosh()).abs() < 1e-12);
}

#[test]
fn resonant_input_raises_multiplicity() {
    // y' + y = x, x = e^{-t} (from 0): y = t e^{-t}
    let input = GenSignal::new(RegSig::exponential(qi(1), qi(-1)), SingDist::zero());
    let sol = ModifiedLplus.solve(&first_order(vec![qi(1)], input)).unwrap();
    assert_eq!(sol.regular, RegSig::new(vec![Atom::new(Cplx::real(qi(1)), 1, Cplx::real(qi(-1)))], qi(0)));
}

#[test]
fn doublet_through_second_order() {
    // y'' + 3y' + 2y = x' + x, x = δ', pre [0, 0]
    let input = GenSignal::new(RegSig::zero(), SingDist::delta(qi(1), 1));
    let sys = SysSpec::new(vec![qi(1), qi(3), qi(2)], vec![qi(1), qi(1)], vec![qi(0), qi(0)], input).unwrap();
    let m = ModifiedLplus.solve(&sys).unwrap();
    let l = lminus_solve(&sys).unwrap();
    // Y = s(s+1)/((s+1)(s+2)) = s/(s+2) = 1 - 2/(s+2)
    assert_eq!(l.singular, SingDist::delta(qi(1), 0));
    assert_eq!(m.singular, l.singular);
    assert_eq!(m.transform, rf(&[-2], &[2, 1]));
    assert_eq!(m.transform, l.transform);
}

#[test]
fn scaled_coefficients_normalize() {
    let a = SysSpec::new(vec![qi(2), qi(4), qi(2)], vec![qi(2), qi(0)], vec![qi(1), qi(-2)], GenSignal::impulse(qi(1)))
        .unwrap();
    let sol = ModifiedLplus.solve(&a).unwrap();
    assert_eq!(sol.regular, manometer_closed_form());
}

#[test]
fn exact_roots_of_the_manometer_denominator() {
    let r = poly_roots_exact(&p(&[1, 2, 1])).unwrap();
    assert_eq!(r.roots.len(), 1);
    assert_eq!(r.roots[0].multiplicity, 2);
    assert_eq!(r.roots[0].value, Cplx::real(qi(-1)));
}

#[test]
fn rational_step_amplitude() {
    let input = GenSignal::new(RegSig::step(q(3, 2)), SingDist::zero());
    let sol = ModifiedLplus.solve(&first_order(vec![q(1, 3)], input)).unwrap();
    assert_eq!(sol.regular.exact_derivative_at_zero_plus(0), Some(qi(0)));
    assert_eq!(render::closed_form(&sol.regular), "1/2 - 1/2 e^{-1 t}");
}
