//! Command-line driver for `schinzel-core`: every operation runs as a job
//! and produces a JSON report with a stable key order.

mod commands;
pub mod job;
mod encode;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use serde_json::{json, Value};

use schinzel_core::Error;

pub use job::{CommandName, JobSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Finished invocation: exit code, report (absent for usage errors caught
/// before a job could be formed) and text for standard error.
#[derive(Debug)]
pub struct Invocation {
    pub code: i32,
    pub report: Option<Value>,
    pub message: String,
    /// Where the report should also be written.
    pub out: Option<PathBuf>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded(_) => EXIT_BUDGET,
        Error::Refused(_) | Error::FixedPrime { .. } | Error::Hypothesis { .. } | Error::NotCoprime(_) => EXIT_FALSE,
        _ => EXIT_USAGE,
    }
}

fn usage(message: String) -> Invocation {
    Invocation { code: EXIT_USAGE, report: None, message, out: None }
}

/// Parses `args` (including the program name), resolves the job and runs it.
pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match JobSpec::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return Invocation { code, report: None, message: e.render().to_string(), out: None };
        }
    };
    let base = match &cli.job {
        None => JobSpec::default(),
        Some(path) => match std::fs::read_to_string(path) {
            Err(e) => return usage(format!("cannot read job file {}: {e}", path.display())),
            Ok(text) => match JobSpec::from_toml(&text) {
                Ok(j) => j,
                Err(e) => return usage(format!("invalid job file {}: {e}", path.display())),
            },
        },
    };
    let job = cli.or(base);
    let Some(command) = job.command else {
        return usage("no command given (pass one on the command line or as `command` in the job file)".into());
    };
    run_job(command, &job)
}

/// Runs a resolved job.
pub fn run_job(command: CommandName, job: &JobSpec) -> Invocation {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(job.threads.unwrap_or(0)).build();
    let outcome = match pool {
        Ok(pool) => pool.install(|| commands::dispatch(command, job)),
        Err(e) => return usage(format!("cannot start worker threads: {e}")),
    };
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let (code, verdict, result, error, message) = match outcome {
        Ok(o) => {
            let code = if o.verdict == Some(false) { EXIT_FALSE } else { EXIT_OK };
            (code, o.verdict, o.result, Value::Null, String::new())
        }
        Err(f) => {
            let verdict = (exit_code(&f.error) == EXIT_FALSE).then_some(false);
            (exit_code(&f.error), verdict, f.result, encode::error(&f.error), format!("error: {}", f.error))
        }
    };
    let mut echo = job.clone();
    echo.command = Some(command);
    echo.out = None;
    echo.threads = None;
    let report = json!({
        "tool": "schinzel",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command.as_str(),
        "job": serde_json::to_value(&echo).expect("job specs always serialize"),
        "seed": job.seed,
        "verdict": verdict,
        "result": result,
        "error": error,
        "exit_code": code,
        "timing_ms": elapsed,
    });
    Invocation { code, report: Some(report), message, out: job.out.clone() }
}

/// Report with timing fields removed, for reproducibility comparisons.
pub fn masked(report: &Value) -> Value {
    let mut r = report.clone();
    if let Some(obj) = r.as_object_mut() {
        obj.remove("timing_ms");
    }
    r
}
