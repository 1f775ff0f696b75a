//! Text rendering of polynomials, transforms, closed forms and delta trains.

use num::{One, Signed, Zero};
use serde::Serializer;

use crate::algebra::{poly_roots_exact, Cplx, Poly, RatFn, Q};
use crate::signals::{Atom, RegSig, SingDist};

/// `%g`-style formatting with 12 significant digits.
pub fn fmt_g(x: f64) -> String {
    fmt_sig(x, 12)
}

pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= sig as i32 {
        let m = strip_zeros(mantissa);
        return format!("{m}e{exp}");
    }
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    strip_zeros(&format!("{:.*}", decimals, x))
}

fn strip_zeros(s: &str) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" {
            "0".into()
        } else {
            t.into()
        }
    } else {
        s.into()
    }
}

pub fn ser_q<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub fn ser_q_vec<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

fn coeff_prefix(c: &Q) -> String {
    if c.is_one() {
        String::new()
    } else if *c == -Q::one() {
        "-".into()
    } else if c.is_integer() {
        c.to_string()
    } else if c.is_negative() {
        format!("-({})", -c)
    } else {
        format!("({c})")
    }
}

/// `s^2+2s+1`, highest degree first.
pub fn poly(p: &Poly<Q>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let term = match k {
            0 => c.to_string(),
            1 => format!("{}s", coeff_prefix(c)),
            _ => format!("{}s^{k}", coeff_prefix(c)),
        };
        if !out.is_empty() && !term.starts_with('-') {
            out.push('+');
        }
        out.push_str(&term);
    }
    out
}

fn term_count(p: &Poly<Q>) -> usize {
    p.coeffs().iter().filter(|c| !c.is_zero()).count()
}

fn power_suffix(m: usize) -> String {
    if m > 1 {
        format!("^{m}")
    } else {
        String::new()
    }
}

/// Denominator factored over its exactly known roots, e.g. `(s+1)^2`.
fn factored_den(den: &Poly<Q>) -> String {
    let Ok(roots) = poly_roots_exact(den) else {
        return poly(den);
    };
    let mut factors = Vec::new();
    let mut exact_part = Poly::one();
    for root in &roots.roots {
        match root.value.as_exact() {
            Some(z) if z.im.is_zero() => {
                let lin = Poly::linear_factor(z.re.clone());
                let body = if z.re.is_zero() { "s".to_string() } else { format!("({})", poly(&lin)) };
                factors.push(format!("{body}{}", power_suffix(root.multiplicity)));
                exact_part = &exact_part * &lin.pow(root.multiplicity as u32);
            }
            Some(z) if z.im.is_positive() => {
                let quad = Poly::new(vec![
                    &z.re * &z.re + &z.im * &z.im,
                    -(&z.re + &z.re),
                    Q::one(),
                ]);
                factors.push(format!("({}){}", poly(&quad), power_suffix(root.multiplicity)));
                exact_part = &exact_part * &quad.pow(root.multiplicity as u32);
            }
            _ => {}
        }
    }
    // bare powers of s lead: s(s+1), not (s+1)s
    factors.sort_by_key(|f| !f.starts_with('s'));
    let (rest, _) = den.divmod(&exact_part).expect("nonzero");
    if rest.degree().unwrap_or(0) > 0 {
        factors.push(format!("({})", poly(&rest)));
    }
    match factors.len() {
        0 => "1".into(),
        1 => factors.remove(0),
        _ => format!("({})", factors.concat()),
    }
}

/// `2s/(s+1)^2`
pub fn ratfn(f: &RatFn<Q>) -> String {
    if f.is_zero() {
        return "0".into();
    }
    if f.den().degree() == Some(0) {
        return poly(f.num());
    }
    let num = if term_count(f.num()) > 1 {
        format!("({})", poly(f.num()))
    } else {
        poly(f.num())
    };
    format!("{num}/{}", factored_den(f.den()))
}

fn real_str(c: &Cplx) -> String {
    match c {
        Cplx::Exact(z) => z.re.to_string(),
        Cplx::Float(z) => fmt_g(z.re),
    }
}

/// `c` followed by space-separated factors, with unit coefficients elided.
fn scaled(c: &Cplx, factors: &str) -> String {
    let s = real_str(c);
    if factors.is_empty() {
        return s;
    }
    match s.as_str() {
        "1" => factors.to_string(),
        "-1" => format!("-{factors}"),
        _ => format!("{s} {factors}"),
    }
}

fn time_factors(power: u32, growth: &Cplx) -> Vec<String> {
    let mut f = Vec::new();
    match power {
        0 => {}
        1 => f.push("t".into()),
        p => f.push(format!("t^{p}")),
    }
    if !growth.is_zero() {
        f.push(format!("e^{{{} t}}", real_str(growth)));
    }
    f
}

fn join_terms(terms: Vec<String>) -> String {
    let mut out = String::new();
    for t in terms {
        if out.is_empty() {
            out = t;
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn real_of(c: &Cplx) -> Cplx {
    match c {
        Cplx::Exact(z) => Cplx::real(z.re.clone()),
        Cplx::Float(z) => Cplx::float(z.re, 0.0),
    }
}

fn imag_of(c: &Cplx) -> Cplx {
    match c {
        Cplx::Exact(z) => Cplx::real(z.im.clone()),
        Cplx::Float(z) => Cplx::float(z.im, 0.0),
    }
}

fn pair_term(a: &Atom) -> String {
    // c e^{(α+iβ)t} + c̄ e^{(α−iβ)t} = e^{αt}(2Re c cos βt − 2Im c sin βt)
    let two = Cplx::real(Q::from_integer(2.into()));
    let cos_c = &two * &real_of(&a.coeff);
    let sin_c = -(&two * &imag_of(&a.coeff));
    let beta = real_str(&imag_of(&a.rate));
    let mut inner = Vec::new();
    if !cos_c.is_zero() {
        inner.push(scaled(&cos_c, &format!("cos({beta} t)")));
    }
    if !sin_c.is_zero() {
        inner.push(scaled(&sin_c, &format!("sin({beta} t)")));
    }
    let mut factors = time_factors(a.power, &real_of(&a.rate));
    factors.push(format!("({})", join_terms(inner)));
    factors.join(" ")
}

/// `Σ c·tᵖ·e^{λt}` with conjugate pairs collapsed to cos/sin form.
pub fn closed_form(sig: &RegSig) -> String {
    let atoms = sig.atoms();
    let mut terms = Vec::new();
    for a in atoms {
        let im = a.rate.im_f64();
        if im == 0.0 {
            terms.push(scaled(&real_of(&a.coeff), &time_factors(a.power, &a.rate).join(" ")));
            continue;
        }
        let has_partner = atoms.iter().any(|b| {
            b.power == a.power && b.rate.approx_eq(&a.rate.conj(), 1e-12) && b.coeff.approx_eq(&a.coeff.conj(), 1e-9)
        });
        if !has_partner {
            terms.push(format!(
                "({}) {}",
                a.coeff,
                time_factors(a.power, &Cplx::zero()).into_iter().chain([format!("e^{{({}) t}}", a.rate)]).collect::<Vec<_>>().join(" ")
            ));
        } else if im > 0.0 {
            terms.push(pair_term(a));
        }
    }
    join_terms(terms)
}

fn delta_name(k: usize) -> String {
    match k {
        0 => "δ".into(),
        1 => "δ'".into(),
        2 => "δ''".into(),
        k => format!("δ^({k})"),
    }
}

/// `2 δ - δ'`
pub fn sing_dist(d: &SingDist) -> String {
    let terms = d
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| scaled(&Cplx::real(c.clone()), &delta_name(k)))
        .collect();
    join_terms(terms)
}

/// Derivative label: `y`, `y'`, `y''`, `y^(3)`.
pub fn derivative_label(k: usize) -> String {
    match k {
        0 => "y".into(),
        1 => "y'".into(),
        2 => "y''".into(),
        k => format!("y^({k})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};

    fn p(c: &[i64]) -> Poly<Q> {
        Poly::from_i64s(c)
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(0.02), "0.02");
        assert_eq!(fmt_g(-1.960198013), "-1.960198013");
        assert_eq!(fmt_g(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_g(1e-7), "1e-7");
        assert_eq!(fmt_g(2.5e13), "2.5e13");
        assert_eq!(fmt_g(-0.0), "0");
    }

    #[test]
    fn polynomial_text() {
        assert_eq!(poly(&p(&[1, 2, 1])), "s^2+2s+1");
        assert_eq!(poly(&p(&[0, 2])), "2s");
        assert_eq!(poly(&p(&[3, -1])), "-s+3");
        assert_eq!(poly(&Poly::new(vec![qi(0), q(-3, 2)])), "-(3/2)s");
    }

    #[test]
    fn transform_text() {
        assert_eq!(ratfn(&RatFn::new(p(&[0, 2]), p(&[1, 2, 1])).unwrap()), "2s/(s+1)^2");
        assert_eq!(ratfn(&RatFn::new(p(&[1]), p(&[0, 1, 1])).unwrap()), "1/(s(s+1))");
        assert_eq!(ratfn(&RatFn::new(p(&[1, 1]), p(&[5, 2, 1])).unwrap()), "(s+1)/(s^2+2s+5)");
        assert_eq!(ratfn(&RatFn::new(p(&[1]), p(&[-2, 0, 1])).unwrap()), "1/(s^2-2)");
        assert_eq!(ratfn(&RatFn::zero()), "0");
    }

    #[test]
    fn closed_form_text() {
        let v = RegSig::new(
            vec![
                Atom::new(Cplx::real(qi(2)), 0, Cplx::real(qi(-1))),
                Atom::new(Cplx::real(qi(-2)), 1, Cplx::real(qi(-1))),
            ],
            qi(0),
        );
        assert_eq!(closed_form(&v), "2 e^{-1 t} - 2 t e^{-1 t}");
        let step = RegSig::step(qi(1)).add(&RegSig::exponential(qi(-1), qi(-1)));
        assert_eq!(closed_form(&step), "1 - e^{-1 t}");
        assert_eq!(closed_form(&RegSig::zero()), "0");
        // e^{-t} sin(2t) = (-i/2) e^{(-1+2i)t} + (i/2) e^{(-1-2i)t}
        let osc = RegSig::new(
            vec![
                Atom::new(Cplx::exact(qi(0), q(-1, 2)), 0, Cplx::exact(qi(-1), qi(2))),
                Atom::new(Cplx::exact(qi(0), q(1, 2)), 0, Cplx::exact(qi(-1), qi(-2))),
            ],
            qi(0),
        );
        assert_eq!(closed_form(&osc), "e^{-1 t} (sin(2 t))");
    }

    #[test]
    fn delta_train_text() {
        assert_eq!(sing_dist(&SingDist::new(vec![qi(-2), qi(1)])), "-2 δ + δ'");
        assert_eq!(sing_dist(&SingDist::zero()), "0");
    }
}
