use std::fmt::Write as _;

use laplace_init::algebra::Q;
use laplace_init::decomposition::{SingularSolution, SysSpec};
use laplace_init::initialization::JumpReport;
use laplace_init::laplace::{check_zero_plus, ivt_check, Comparison};
use laplace_init::oracle::OracleReport;
use laplace_init::render::{self, derivative_label, fmt_g, fmt_sig};
use laplace_init::signals::{GenSignal, RegSig, SingDist};
use laplace_init::{Result, Solution};
use serde_json::{json, Value};

fn zero() -> Q {
    Q::from_integer(0.into())
}

fn coeff_term(c: &Q, symbol: &str) -> String {
    let one = Q::from_integer(1.into());
    if *c == one {
        symbol.to_string()
    } else if *c == -one {
        format!("-{symbol}")
    } else if c.is_integer() {
        format!("{c}{symbol}")
    } else {
        format!("({c}){symbol}")
    }
}

fn signed_sum(terms: Vec<String>) -> String {
    let mut out = String::new();
    for t in terms {
        if out.is_empty() {
            out = t;
        } else if let Some(rest) = t.strip_prefix('-') {
            let _ = write!(out, " - {rest}");
        } else {
            let _ = write!(out, " + {t}");
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn input_label(k: usize) -> String {
    derivative_label(k).replacen('y', "x", 1)
}

/// `y'' + 2y' + y = x'`, in the original (unnormalized) coefficients.
pub fn equation(sys: &SysSpec) -> String {
    let n = sys.order();
    let m = sys.input_order();
    let side = |coeffs: &[Q], order: usize, label: fn(usize) -> String| {
        signed_sum(
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != zero())
                .map(|(i, c)| coeff_term(c, &label(order - i)))
                .collect(),
        )
    };
    format!(
        "{} = {}",
        side(sys.a_raw(), n, derivative_label),
        side(sys.b_raw(), m, input_label)
    )
}

/// The combined solution: delta train plus closed form.
pub fn combined(singular: &SingDist, regular: &RegSig) -> String {
    match (singular.is_zero(), regular.is_zero()) {
        (true, _) => render::closed_form(regular),
        (false, true) => render::sing_dist(singular),
        (false, false) => format!("{} + ({})", render::sing_dist(singular), render::closed_form(regular)),
    }
}

pub fn input(sig: &GenSignal) -> String {
    let body = combined(&sig.singular, &sig.regular);
    let pre = sig.regular.pre_value();
    if *pre == zero() {
        body
    } else {
        format!("{body} (x(0-) = {pre})")
    }
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let mut s = String::from(" ");
        for (cell, w) in cells.iter().zip(&widths) {
            let pad = w - cell.chars().count();
            let _ = write!(s, " {cell}{}", " ".repeat(pad));
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.iter().map(|h| h.to_string()).collect());
    for r in rows {
        out += &line(r.clone());
    }
    out
}

fn jump_table(report: &JumpReport) -> String {
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| vec![derivative_label(r.order), r.pre.to_string(), r.jump.to_string(), r.post.to_string()])
        .collect();
    table(&["derivative", "pre", "jump", "post"], &rows)
}

fn post_lines(report: &JumpReport) -> String {
    report
        .rows
        .iter()
        .map(|r| format!("{}(0+) = {}\n", derivative_label(r.order), r.post))
        .collect()
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn yes(ok: bool) -> &'static str {
    if ok {
        "yes"
    } else {
        "no"
    }
}

pub struct SolveReport {
    pub text: String,
    pub json: Value,
    pub ok: bool,
}

/// `reference` holds the model-based post-initial values the checks are held to.
pub fn solve(sys: &SysSpec, sol: &Solution, reference: &[Q]) -> Result<SolveReport> {
    let ivt = ivt_check(&sol.transform, reference.first().unwrap_or(&zero()))?;
    let consistency = check_zero_plus(&sol.regular, reference);
    let closed = render::closed_form(&sol.regular);
    let singular = render::sing_dist(&sol.singular);
    let transform = render::ratfn(&sol.transform);
    let full = combined(&sol.singular, &sol.regular);
    let mut t = String::new();
    let _ = writeln!(t, "method: {}", sol.method);
    let _ = writeln!(t, "equation: {}", equation(sys));
    let _ = writeln!(t, "input: x = {}", input(sys.input()));
    if !sol.report.rows.is_empty() {
        let _ = writeln!(t, "jumps at t = 0:");
        t += &jump_table(&sol.report);
        t += &post_lines(&sol.report);
    }
    let _ = writeln!(t, "y_s = {singular}");
    let _ = writeln!(t, "Y_r(s) = {transform}");
    let _ = writeln!(t, "y(t) = {closed}");
    if !sol.singular.is_zero() {
        let _ = writeln!(t, "y = {full}");
    }
    let _ = writeln!(
        t,
        "IVT: lim s Y_r(s) = {}, expected y(0+) = {}: {}",
        ivt.value,
        ivt.expected,
        pass(ivt.pass)
    );
    let _ = writeln!(
        t,
        "0+ consistency: max error {}: {}",
        fmt_g(consistency.max_error),
        pass(consistency.pass)
    );
    for w in &sol.warnings {
        let _ = writeln!(t, "warning: {w}");
    }
    let json = json!({
        "command": "solve",
        "method": sol.method,
        "equation": equation(sys),
        "input": input(sys.input()),
        "jumps": sol.report,
        "post_initial": sol.post_values().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "singular": singular,
        "transform": transform,
        "closed_form": closed,
        "solution": full,
        "ivt": ivt,
        "consistency": consistency,
        "warnings": sol.warnings,
    });
    Ok(SolveReport {
        ok: ivt.pass && consistency.pass,
        text: t,
        json,
    })
}

pub fn jumps(sys: &SysSpec, singular: &SingularSolution, report: &JumpReport) -> (String, Value) {
    let mut t = String::new();
    let _ = writeln!(t, "equation: {}", equation(sys));
    let _ = writeln!(t, "input: x = {}", input(sys.input()));
    let _ = writeln!(t, "singular parts:");
    let parts: Vec<String> = singular.derivative_parts.iter().map(render::sing_dist).collect();
    for (k, p) in parts.iter().enumerate() {
        let _ = writeln!(t, "  ({})_s = {p}", derivative_label(k));
    }
    if !report.rows.is_empty() {
        let _ = writeln!(t, "jumps at t = 0:");
        t += &jump_table(report);
        t += &post_lines(report);
    }
    let json = json!({
        "command": "jumps",
        "equation": equation(sys),
        "input": input(sys.input()),
        "singular_parts": parts,
        "jumps": report,
        "post_initial": report.rows.iter().map(|r| r.post.to_string()).collect::<Vec<_>>(),
    });
    (t, json)
}

pub fn compare(sys: &SysSpec, c: &Comparison) -> (String, Value) {
    let mut t = String::new();
    let _ = writeln!(t, "equation: {}", equation(sys));
    let post: Vec<String> = c
        .reference_post
        .iter()
        .enumerate()
        .map(|(k, q)| format!("{}(0+) = {q}", derivative_label(k)))
        .collect();
    let _ = writeln!(t, "reference (modified-lplus): {}", post.join(", "));
    let _ = writeln!(t, "grid: [0, {}] with {} points", fmt_g(c.horizon), c.grid_points);
    let rows: Vec<Vec<String>> = c
        .methods
        .iter()
        .map(|m| {
            vec![
                m.method.to_string(),
                fmt_sig(m.max_deviation, 6),
                m.ivt.value.to_string(),
                m.ivt.expected.to_string(),
                yes(m.consistent).into(),
                yes(m.singular_matches).into(),
                yes(m.identically_zero).into(),
            ]
        })
        .collect();
    t += &table(
        &["method", "max deviation", "IVT", "expected", "0+ consistent", "singular matches", "identically zero"],
        &rows,
    );
    let _ = writeln!(t, "closed forms:");
    for m in &c.methods {
        let _ = writeln!(t, "  {}: y(t) = {}; y_s = {}", m.method, m.closed_form, m.singular);
    }
    for m in &c.methods {
        for w in &m.warnings {
            let _ = writeln!(t, "warning ({}): {w}", m.method);
        }
    }
    let mut json = serde_json::to_value(c).expect("serializable");
    json["command"] = json!("compare");
    json["equation"] = json!(equation(sys));
    (t, json)
}

pub fn verify(sys: &SysSpec, sol: &Solution, r: &OracleReport) -> (String, Value) {
    let mut t = String::new();
    let eps = &r.estimates.epsilons;
    let eps_txt: Vec<String> = eps.iter().map(|e| fmt_g(*e)).collect();
    let _ = writeln!(t, "equation: {}", equation(sys));
    let _ = writeln!(t, "method under test: {}", sol.method);
    let _ = writeln!(t, "oracle: RK4 with mollified impulses, widths {}", eps_txt.join(", "));
    let _ = writeln!(t, "jump estimates y^(k)(5e) - y^(k)(0-):");
    let mut header: Vec<String> = vec!["derivative".into(), "analytic".into()];
    header.extend(eps.iter().map(|e| format!("e={}", fmt_g(*e))));
    header.extend(["extrapolated", "error", "slope"].map(String::from));
    let rows: Vec<Vec<String>> = r
        .estimates
        .orders
        .iter()
        .map(|o| {
            let mut row = vec![derivative_label(o.order), fmt_sig(r.analytic_jumps[o.order], 8)];
            row.extend(o.raw.iter().map(|v| fmt_sig(*v, 8)));
            row.push(fmt_sig(o.extrapolated, 8));
            row.push(fmt_sig(r.jump_errors[o.order], 3));
            row.push(match r.slopes[o.order] {
                Some(s) => fmt_sig(s, 4),
                None => "exact".into(),
            });
            row
        })
        .collect();
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    t += &table(&header_refs, &rows);
    let _ = writeln!(t, "trajectory error max |y - y_r| on [10e, {}]:", fmt_g(r.t_end));
    for (e, err) in eps.iter().zip(&r.trajectory_errors) {
        let _ = writeln!(t, "  e={}: {}", fmt_g(*e), fmt_sig(*err, 6));
    }
    let _ = writeln!(t, "fitted C (error <= C e): {}", fmt_sig(r.error_constant, 6));
    let _ = writeln!(t, "strictly decreasing: {}", yes(r.errors_decreasing));
    let _ = writeln!(t, "oracle agreement: {}", pass(r.pass));
    let mut json = serde_json::to_value(r).expect("serializable");
    json["command"] = json!("verify");
    json["method"] = json!(sol.method);
    json["equation"] = json!(equation(sys));
    (t, json)
}

/// `t,y_regular` rows behind a `# singular:` comment line.
pub fn sample_csv(sol: &Solution, t_end: f64, dt: f64) -> Result<String> {
    let mut out = format!("# singular: {}\nt,y_regular\n", render::sing_dist(&sol.singular));
    let steps = (t_end / dt + 1e-9).floor() as usize;
    for i in 0..=steps {
        let t = i as f64 * dt;
        let _ = writeln!(out, "{},{}", fmt_g(t), fmt_g(sol.eval(t)?));
    }
    Ok(out)
}
