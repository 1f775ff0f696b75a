//! JSON problem files: exact number parsing, validation and round-trip serialization.

use std::path::Path;

use num::{BigInt, One, Zero};
use serde_json::{json, Map, Value};

use crate::algebra::{q_to_f64, Cplx, Q};
use crate::decomposition::SysSpec;
use crate::error::{Error, Result};
use crate::laplace::Method;
use crate::signals::{Atom, GenSignal, RegSig, SingDist};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunOptions {
    pub method: Option<Method>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub epsilon: Vec<f64>,
    pub out: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemFile {
    pub sys: SysSpec,
    pub options: RunOptions,
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

/// Exact value of `12`, `-0.25`, `1.5e-3` or `"3/4"`.
pub fn parse_exact(text: &str) -> Option<Q> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Q::from_integer(all);
    let factor = Q::from_integer(num::pow(ten, scale.unsigned_abs() as usize));
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Some(if neg { -value } else { value })
}

fn number(v: &Value, path: &str) -> Result<Q> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(schema(path, "expected a number or a \"p/q\" string")),
    };
    parse_exact(&text).ok_or_else(|| schema(path, format!("cannot parse '{text}' as an exact number")))
}

fn float(v: &Value, path: &str) -> Result<f64> {
    number(v, path).map(|q| q_to_f64(&q))
}

fn nonneg_int(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let obj = v.as_object().ok_or_else(|| schema(path, "expected an object"))?;
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(schema(&join(path, key), "unknown field"));
        }
    }
    Ok(obj)
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn required<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(&join(path, key), "missing required field"))
}

fn numbers(v: &Value, path: &str) -> Result<Vec<Q>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| number(x, &format!("{path}[{i}]")))
        .collect()
}

fn parse_input(v: Option<&Value>) -> Result<GenSignal> {
    let Some(v) = v else {
        return Ok(GenSignal::default());
    };
    let obj = object(v, "input", &["singular", "regular", "pre_value"])?;
    let mut singular = SingDist::zero();
    if let Some(list) = obj.get("singular") {
        for (i, entry) in array(list, "input.singular")?.iter().enumerate() {
            let p = format!("input.singular[{i}]");
            let e = object(entry, &p, &["order", "coeff"])?;
            let order = nonneg_int(required(e, &p, "order")?, &join(&p, "order"))?;
            let coeff = number(required(e, &p, "coeff")?, &join(&p, "coeff"))?;
            singular = &singular + &SingDist::delta(coeff, order);
        }
    }
    let mut atoms = Vec::new();
    if let Some(list) = obj.get("regular") {
        for (i, entry) in array(list, "input.regular")?.iter().enumerate() {
            let p = format!("input.regular[{i}]");
            let e = object(entry, &p, &["coeff", "coeff_im", "power", "rate_re", "rate_im"])?;
            let get = |key: &str| -> Result<Q> {
                match e.get(key) {
                    Some(x) => number(x, &join(&p, key)),
                    None => Ok(Q::zero()),
                }
            };
            let coeff = number(required(e, &p, "coeff")?, &join(&p, "coeff"))?;
            let power = nonneg_int(required(e, &p, "power")?, &join(&p, "power"))?;
            atoms.push(Atom::new(
                Cplx::exact(coeff, get("coeff_im")?),
                power as u32,
                Cplx::exact(get("rate_re")?, get("rate_im")?),
            ));
        }
    }
    let pre_value = match obj.get("pre_value") {
        Some(x) => number(x, "input.pre_value")?,
        None => Q::zero(),
    };
    Ok(GenSignal::new(RegSig::new(atoms, pre_value), singular))
}

fn parse_options(v: Option<&Value>) -> Result<RunOptions> {
    let Some(v) = v else {
        return Ok(RunOptions::default());
    };
    let obj = object(v, "options", &["method", "t_end", "dt", "epsilon", "out"])?;
    let mut opts = RunOptions::default();
    if let Some(m) = obj.get("method") {
        let name = m.as_str().ok_or_else(|| schema("options.method", "expected a string"))?;
        opts.method = Some(name.parse().map_err(|_| {
            schema("options.method", format!("unknown method '{name}'"))
        })?);
    }
    if let Some(x) = obj.get("t_end") {
        opts.t_end = Some(float(x, "options.t_end")?);
    }
    if let Some(x) = obj.get("dt") {
        opts.dt = Some(float(x, "options.dt")?);
    }
    if let Some(x) = obj.get("epsilon") {
        opts.epsilon = match x {
            Value::Array(items) => items
                .iter()
                .enumerate()
                .map(|(i, e)| float(e, &format!("options.epsilon[{i}]")))
                .collect::<Result<_>>()?,
            other => vec![float(other, "options.epsilon")?],
        };
    }
    if let Some(x) = obj.get("out") {
        opts.out = Some(
            x.as_str()
                .ok_or_else(|| schema("options.out", "expected a string"))?
                .to_string(),
        );
    }
    Ok(opts)
}

pub fn parse_problem_value(v: &Value) -> Result<ProblemFile> {
    let root = object(v, "", &["system", "pre_initial", "input", "options"])?;
    let system = object(required(root, "", "system")?, "system", &["a", "b"])?;
    let a = numbers(required(system, "system", "a")?, "system.a")?;
    let b = numbers(required(system, "system", "b")?, "system.b")?;
    let y_pre = match root.get("pre_initial") {
        Some(x) => numbers(x, "pre_initial")?,
        None => Vec::new(),
    };
    let input = parse_input(root.get("input"))?;
    let options = parse_options(root.get("options"))?;
    let sys = SysSpec::new(a, b, y_pre, input)?;
    Ok(ProblemFile { sys, options })
}

pub fn parse_problem_str(text: &str) -> Result<ProblemFile> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema("", format!("malformed JSON: {e}")))?;
    parse_problem_value(&v)
}

pub fn parse_problem(path: &Path) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| schema(&path.display().to_string(), format!("cannot read problem file: {e}")))?;
    parse_problem_str(&text)
}

/// Integers stay JSON integers; other rationals become `"p/q"` strings.
fn q_json(q: &Q) -> Value {
    if q.denom().is_one() {
        if let Ok(i) = i64::try_from(q.numer().clone()) {
            return json!(i);
        }
    }
    Value::String(q.to_string())
}

fn exact_parts(c: &Cplx) -> (Q, Q) {
    match c.as_exact() {
        Some(z) => (z.re.clone(), z.im.clone()),
        None => unreachable!("problem inputs are validated exact"),
    }
}

impl ProblemFile {
    pub fn to_value(&self) -> Value {
        let sys = &self.sys;
        let input = &sys.input();
        let singular: Vec<Value> = input
            .singular
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| json!({"order": k, "coeff": q_json(c)}))
            .collect();
        let regular: Vec<Value> = input
            .regular
            .atoms()
            .iter()
            .map(|a| {
                let (cr, ci) = exact_parts(&a.coeff);
                let (rr, ri) = exact_parts(&a.rate);
                let mut e = json!({
                    "coeff": q_json(&cr),
                    "power": a.power,
                    "rate_re": q_json(&rr),
                    "rate_im": q_json(&ri),
                });
                if !ci.is_zero() {
                    e["coeff_im"] = q_json(&ci);
                }
                e
            })
            .collect();
        let mut options = Map::new();
        let o = &self.options;
        if let Some(m) = o.method {
            options.insert("method".into(), json!(m.as_str()));
        }
        if let Some(t) = o.t_end {
            options.insert("t_end".into(), json!(t));
        }
        if let Some(dt) = o.dt {
            options.insert("dt".into(), json!(dt));
        }
        if !o.epsilon.is_empty() {
            options.insert("epsilon".into(), json!(o.epsilon));
        }
        if let Some(out) = &o.out {
            options.insert("out".into(), json!(out));
        }
        let mut root = json!({
            "system": {
                "a": sys.a_raw().iter().map(q_json).collect::<Vec<_>>(),
                "b": sys.b_raw().iter().map(q_json).collect::<Vec<_>>(),
            },
            "pre_initial": sys.y_pre().iter().map(q_json).collect::<Vec<_>>(),
            "input": {
                "singular": singular,
                "regular": regular,
                "pre_value": q_json(input.regular.pre_value()),
            },
        });
        if !options.is_empty() {
            root["options"] = Value::Object(options);
        }
        root
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializable")
    }
}
