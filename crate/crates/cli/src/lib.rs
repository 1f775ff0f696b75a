//! `laplace-init` command line: parse a problem file, run the pipeline, report.

mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use laplace_init::decomposition::singular_stage;
use laplace_init::initialization::{compute_jumps, post_initial_conditions};
use laplace_init::laplace::compare_methods;
use laplace_init::oracle::{verify, OracleOptions};
use laplace_init::problem::{parse_problem, ProblemFile};
use laplace_init::{Error, Method, SolverRegistry};

pub use report::equation;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CONSISTENCY: i32 = 2;

const DEFAULT_T_END: f64 = 10.0;
const DEFAULT_DT: f64 = 0.01;
const DEFAULT_VERIFY_T_END: f64 = 8.0;
const DEFAULT_EPSILONS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

#[derive(Parser, Debug)]
#[command(
    name = "laplace-init",
    version,
    about = "Consistent 0+ initial conditions and closed-form solutions for LTI ODEs with impulsive inputs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full pipeline: singular stage, jumps, transform solve and checks.
    Solve(CommonArgs),
    /// Singular stage and jump report only.
    Jumps(CommonArgs),
    /// All registered methods side by side.
    Compare(CommonArgs),
    /// CSV samples of the regular part.
    Sample(CommonArgs),
    /// Numerical oracle runs against the analytic solution.
    Verify(CommonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Problem file (JSON).
    pub problem: PathBuf,
    /// Solution method: modified-lplus, lminus or naive-lplus.
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Mollifier width; repeat for a ladder.
    #[arg(long = "epsilon")]
    pub epsilon: Vec<f64>,
    /// Write the output here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Machine-readable JSON report.
    #[arg(long)]
    pub json: bool,
    /// Let the oracle mollify second derivatives of the impulse.
    #[arg(long)]
    pub allow_delta2: bool,
}

/// Exit code for a failed run: bad input is 1, a failed internal check is 2.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Schema { .. }
        | Error::InvalidSystem(_)
        | Error::UnsupportedInput(_)
        | Error::LengthMismatch { .. }
        | Error::StepSize(_)
        | Error::NegativeTime(_) => EXIT_INPUT,
        _ => EXIT_CONSISTENCY,
    }
}

struct Output {
    body: String,
    code: i32,
}

struct Settings {
    method: Method,
    t_end: Option<f64>,
    dt: Option<f64>,
    epsilon: Vec<f64>,
    out: Option<PathBuf>,
    json: bool,
    oracle: OracleOptions,
}

fn settings(args: &CommonArgs, problem: &ProblemFile, registry: &SolverRegistry) -> Result<Settings, Error> {
    let o = &problem.options;
    let method = match &args.method {
        Some(name) => registry.must_get(name)?.method(),
        None => o.method.unwrap_or(Method::ModifiedLplus),
    };
    Ok(Settings {
        method,
        t_end: args.t_end.or(o.t_end),
        dt: args.dt.or(o.dt),
        epsilon: if args.epsilon.is_empty() { o.epsilon.clone() } else { args.epsilon.clone() },
        out: args.out.clone().or_else(|| o.out.clone().map(PathBuf::from)),
        json: args.json,
        oracle: OracleOptions {
            allow_second_derivative: args.allow_delta2,
        },
    })
}

fn render_json(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn execute(command: &Command, registry: &SolverRegistry) -> Result<(Output, Option<PathBuf>), Error> {
    let (Command::Solve(args)
    | Command::Jumps(args)
    | Command::Compare(args)
    | Command::Sample(args)
    | Command::Verify(args)) = command;
    let problem = parse_problem(&args.problem)?;
    let s = settings(args, &problem, registry)?;
    let sys = &problem.sys;
    let pick = |text: String, json: serde_json::Value| if s.json { render_json(&json) } else { text };
    let out = match command {
        Command::Solve(_) => {
            let sol = registry.must_get(s.method.as_str())?.solve(sys)?;
            // Checks run against the singular-stage jumps, not the method's own claim.
            let reference = post_initial_conditions(&compute_jumps(&singular_stage(sys)?, sys)?);
            let r = report::solve(sys, &sol, &reference)?;
            Output {
                code: if r.ok { EXIT_OK } else { EXIT_CONSISTENCY },
                body: pick(r.text, r.json),
            }
        }
        Command::Jumps(_) => {
            let singular = singular_stage(sys)?;
            let jumps = compute_jumps(&singular, sys)?;
            let (text, json) = report::jumps(sys, &singular, &jumps);
            Output { body: pick(text, json), code: EXIT_OK }
        }
        Command::Compare(_) => {
            let c = compare_methods(sys, registry)?;
            let reference_ok = c.get(Method::ModifiedLplus).is_some_and(|m| m.consistent && m.ivt.pass);
            let (text, json) = report::compare(sys, &c);
            Output {
                body: pick(text, json),
                code: if reference_ok { EXIT_OK } else { EXIT_CONSISTENCY },
            }
        }
        Command::Sample(_) => {
            let t_end = s.t_end.unwrap_or(DEFAULT_T_END);
            let dt = s.dt.unwrap_or(DEFAULT_DT);
            if !(dt > 0.0 && t_end >= 0.0 && t_end.is_finite()) {
                return Err(Error::StepSize(format!("sampling needs dt > 0 and t_end >= 0, got dt = {dt}, t_end = {t_end}")));
            }
            let sol = registry.must_get(s.method.as_str())?.solve(sys)?;
            Output {
                body: report::sample_csv(&sol, t_end, dt)?,
                code: EXIT_OK,
            }
        }
        Command::Verify(_) => {
            let sol = registry.must_get(s.method.as_str())?.solve(sys)?;
            let eps = if s.epsilon.is_empty() { DEFAULT_EPSILONS.to_vec() } else { s.epsilon.clone() };
            let t_end = s.t_end.unwrap_or(DEFAULT_VERIFY_T_END);
            let r = verify(sys, &sol, &eps, t_end, s.oracle)?;
            let (text, json) = report::verify(sys, &sol, &r);
            Output {
                body: pick(text, json),
                code: if r.pass { EXIT_OK } else { EXIT_CONSISTENCY },
            }
        }
    };
    Ok((out, s.out))
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let registry = SolverRegistry::builtin();
    match execute(&cli.command, &registry) {
        Ok((output, path)) => {
            let written = match path {
                Some(p) => std::fs::write(&p, &output.body)
                    .map_err(|e| format!("cannot write {}: {e}", p.display())),
                None => stdout.write_all(output.body.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(msg) = written {
                let _ = writeln!(stderr, "error: {msg}");
                return EXIT_INPUT;
            }
            if output.code == EXIT_CONSISTENCY {
                let _ = writeln!(stderr, "error: consistency check failed");
            }
            output.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
