//! The `gibbsfit` command line.
//!
//! Exit codes: 0 success, 1 verification failed, 2 locally incompatible
//! marginals, 3 entropy-condition violation, 4 boundary or infeasible,
//! 5 iteration limit, 6 problem/result digest mismatch, 64 usage error,
//! 65 malformed input, 66 unreadable input, 70 internal numerical failure,
//! 74 output error.

pub mod format;
pub mod gen;
pub mod surface;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::Error;
use crate::linalg::MAX_QUBITS;
use crate::problem::{check_independence, diagnose, translate_to_zero, Problem, Verdict};
use crate::solver::{solve, solve_expectations, verify, SolveOptions, Status};
use format::{input_digest, parse_json, ProblemFile, ResultFile};
use surface::GridRange;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INCOMPATIBLE: i32 = 2;
pub const EXIT_ENTROPY: i32 = 3;
pub const EXIT_BOUNDARY: i32 = 4;
pub const EXIT_ITERATION_LIMIT: i32 = 5;
pub const EXIT_DIGEST_MISMATCH: i32 = 6;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;
pub const EXIT_SOFTWARE: i32 = 70;
pub const EXIT_IO: i32 = 74;

pub const MAX_QUBITS_ENV: &str = "GIBBSFIT_MAX_QUBITS";

#[derive(Parser, Debug)]
#[command(name = "gibbsfit", version, about = "Fit Gibbs states exp(Σθ_i·T_i)/Z to marginals or expectation values")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Necessary-condition checks: overlap agreement and the entropy
    /// inequality for marginals, linear independence for observables.
    Check {
        problem: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the Gibbs state and write a result file.
    Solve {
        problem: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Include the per-iteration trace in the result.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the fitted state from a result file and check it.
    Verify {
        problem: PathBuf,
        result: PathBuf,
        /// Residual tolerance; defaults to the one recorded in the result.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the exact marginals of a random thermal state.
    Gen {
        #[arg(long)]
        n: usize,
        /// Qubit subsets, e.g. "0,1;1,2".
        #[arg(long)]
        subsets: String,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample ψ on a grid for a problem with one or two observables.
    Surface {
        problem: PathBuf,
        /// lo:hi:steps, applied to every axis.
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SolverArgs {
    /// Convergence threshold on the largest residual.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 5000)]
    max_iter: usize,
    #[arg(long, default_value_t = 50.0)]
    theta_cap: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Draw the start point from a ball of this radius (0 starts at θ = 0).
    #[arg(long, default_value_t = 0.0)]
    start_radius: f64,
    /// Disable Newton polishing near the optimum.
    #[arg(long)]
    no_refine: bool,
}

impl SolverArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            grad_tol: self.tol,
            max_iter: self.max_iter,
            theta_cap: self.theta_cap,
            seed: self.seed,
            start_radius: self.start_radius,
            refine: !self.no_refine,
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl std::fmt::Display) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

fn library_failure(e: Error) -> Failure {
    let code = match &e {
        Error::LocallyIncompatible(_) | Error::TargetConflict { .. } => EXIT_INCOMPATIBLE,
        Error::InvalidOptions(_) => EXIT_USAGE,
        Error::EigenConvergence { .. } | Error::ExpOverflow(_) => EXIT_SOFTWARE,
        _ => EXIT_DATA,
    };
    fail(code, e)
}

/// Qubit cap after applying the environment override, which may only lower
/// it.
fn qubit_cap() -> Result<usize, Failure> {
    match std::env::var(MAX_QUBITS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(MAX_QUBITS),
        Err(e) => Err(fail(EXIT_USAGE, format!("{MAX_QUBITS_ENV}: {e}"))),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(|c| c.min(MAX_QUBITS))
            .map_err(|e| fail(EXIT_USAGE, format!("{MAX_QUBITS_ENV}={v:?}: {e}"))),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| fail(EXIT_NO_INPUT, format!("cannot read {}: {e}", path.display())))
}

/// Problem plus the digest of its raw bytes.
fn load_problem(path: &Path) -> Result<(Problem, String), Failure> {
    let bytes = read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))?;
    let file: ProblemFile = parse_json(text).map_err(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))?;
    let problem = file
        .to_problem(qubit_cap()?)
        .map_err(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))?;
    Ok((problem, input_digest(&bytes)))
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| fail(EXIT_IO, format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| fail(EXIT_IO, e)),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

pub fn status_code(status: Status) -> i32 {
    match status {
        Status::Converged => EXIT_OK,
        Status::BoundaryOrInfeasible => EXIT_BOUNDARY,
        Status::IterationLimit => EXIT_ITERATION_LIMIT,
    }
}

fn cmd_check(problem: &Path, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let (problem, _) = load_problem(problem)?;
    match problem {
        Problem::Marginals(mp) => {
            let report = diagnose(&mp).map_err(library_failure)?;
            emit(&to_json(&report), out, stdout)?;
            Ok(match report.verdict {
                Verdict::LocallyIncompatible => EXIT_INCOMPATIBLE,
                Verdict::Compatible if !report.entropy_violations.is_empty() => EXIT_ENTROPY,
                Verdict::Compatible => EXIT_OK,
            })
        }
        Problem::Expectations(ep) => {
            let report = check_independence(&ep).map_err(library_failure)?;
            emit(&to_json(&report), out, stdout)?;
            Ok(if report.independent { EXIT_OK } else { EXIT_DATA })
        }
    }
}

/// Solves and builds the result file; shared with the tests of determinism.
pub fn solve_to_result(problem: &Problem, digest: String, opts: &SolveOptions, with_trace: bool) -> Result<ResultFile, Error> {
    let result = solve(problem, opts)?;
    let report = verify(&result.theta, problem)?;
    Ok(ResultFile::new(problem, &result, &report, opts, digest, with_trace))
}

fn cmd_solve(problem: &Path, args: &SolverArgs, trace: bool, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let (problem, digest) = load_problem(problem)?;
    let file = solve_to_result(&problem, digest, &args.options(), trace).map_err(library_failure)?;
    emit(&to_json(&file), out, stdout)?;
    Ok(match file.status.as_str() {
        "Converged" => EXIT_OK,
        "BoundaryOrInfeasible" => EXIT_BOUNDARY,
        _ => EXIT_ITERATION_LIMIT,
    })
}

#[derive(Serialize)]
struct VerifyOutput {
    passes: bool,
    tol: f64,
    #[serde(flatten)]
    report: crate::solver::VerificationReport,
}

fn cmd_verify(problem: &Path, result: &Path, tol: Option<f64>, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let (problem, digest) = load_problem(problem)?;
    let bytes = read(result)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| fail(EXIT_DATA, format!("{}: {e}", result.display())))?;
    let file: ResultFile = parse_json(text).map_err(|e| fail(EXIT_DATA, format!("{}: {e}", result.display())))?;
    if file.input_digest != digest {
        return Err(fail(
            EXIT_DIGEST_MISMATCH,
            format!("result was computed for {} but the problem hashes to {digest}", file.input_digest),
        ));
    }
    let tol = tol.unwrap_or(file.grad_tol);
    if !(tol > 0.0) {
        return Err(fail(EXIT_USAGE, format!("tolerance must be positive, got {tol}")));
    }
    if file.theta.iter().any(|t| !t.is_finite()) {
        return Err(fail(EXIT_DATA, format!("{}: non-finite theta", result.display())));
    }
    let report = verify(&file.theta, &problem).map_err(library_failure)?;
    let passes = report.passes(tol, &problem);
    emit(&to_json(&VerifyOutput { passes, tol, report }), out, stdout)?;
    Ok(if passes { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn cmd_gen(n: usize, subsets: &str, beta: f64, seed: u64, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let cap = qubit_cap()?;
    if n > cap {
        return Err(fail(EXIT_USAGE, Error::QubitCap { n, cap }));
    }
    let subsets = gen::parse_subsets(subsets).map_err(|e| fail(EXIT_USAGE, format!("--subsets: {e}")))?;
    let generated = gen::generate(n, &subsets, beta, seed).map_err(|e| fail(EXIT_USAGE, e))?;
    let file = ProblemFile::from_problem(&Problem::Marginals(generated.problem));
    emit(&to_json(&file), out, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_surface(problem: &Path, range: &str, args: &SolverArgs, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let range = GridRange::parse(range).map_err(|e| fail(EXIT_USAGE, format!("--range: {e}")))?;
    let (problem, _) = load_problem(problem)?;
    let ep = match problem {
        Problem::Expectations(ep) => ep,
        Problem::Marginals(mp) => crate::problem::reduce_to_expectations(&mp).map_err(library_failure)?.problem,
    };
    if !(1..=2).contains(&ep.len()) {
        return Err(fail(EXIT_USAGE, format!("surface needs 1 or 2 observables, the problem has {}", ep.len())));
    }
    let result = solve_expectations(&ep, &args.options()).map_err(library_failure)?;
    let translated = translate_to_zero(&ep);
    let points = surface::evaluate_grid(translated.observables(), &range).map_err(library_failure)?;
    let mut buf = Vec::new();
    surface::write_csv(&points, &result, &mut buf).map_err(|e| fail(EXIT_IO, e))?;
    emit(std::str::from_utf8(&buf).expect("CSV is UTF-8"), out, stdout)?;
    Ok(EXIT_OK)
}

/// Runs one command and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let outcome = match &cli.command {
        Command::Check { problem, out } => cmd_check(problem, out.as_deref(), stdout),
        Command::Solve { problem, solver, trace, out } => cmd_solve(problem, solver, *trace, out.as_deref(), stdout),
        Command::Verify { problem, result, tol, out } => cmd_verify(problem, result, *tol, out.as_deref(), stdout),
        Command::Gen { n, subsets, beta, seed, out } => cmd_gen(*n, subsets, *beta, *seed, out.as_deref(), stdout),
        Command::Surface { problem, range, solver, out } => cmd_surface(problem, range, solver, out.as_deref(), stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "gibbsfit: {}", f.message);
            f.code
        }
    }
}
