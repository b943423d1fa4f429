//! The `pppca` command line: `estimate`, `simulate`, `bench` and `profile`.
//!
//! [`run_from`] parses arguments, runs one command and returns the process
//! exit code, writing to the given streams so that tests can capture them.

pub mod args;
pub mod bench;
pub mod estimate;
pub mod format;
pub mod input;
pub mod profile;
pub mod report;
pub mod simulate;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde::Serialize;

pub use args::{Cli, Command};

/// Exit code for bad input, infeasible settings and usage errors.
pub const EXIT_INPUT: i32 = 1;
/// Exit code for internal numerical failures.
pub const EXIT_INTERNAL: i32 = 2;

/// A failure reported as `{"error": {"kind", "message"}}` on stderr.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    #[serde(skip)]
    pub code: i32,
}

impl CliError {
    pub fn new(kind: &str, message: impl Into<String>, code: i32) -> Self {
        CliError {
            kind: kind.to_owned(),
            message: message.into(),
            code,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::new("UsageError", message, EXIT_INPUT)
    }

    /// Failure to write an output file.
    pub fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        CliError::new("IoError", format!("{}: {e}", path.display()), EXIT_INPUT)
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl From<pppca::Error> for CliError {
    fn from(e: pppca::Error) -> Self {
        let code = if e.is_internal() { EXIT_INTERNAL } else { EXIT_INPUT };
        CliError::new(e.kind(), e.to_string(), code)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Runs `f` on a pool of `threads` workers, or on rayon's global pool.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> CliResult<R> {
    match threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::new("ConfigError", e.to_string(), EXIT_INPUT))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

/// Parses `args` (program name first), runs the command, returns the exit code.
pub fn run_from<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = write!(err, "{}", e.render());
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            let _ = writeln!(err, "{}", CliError::usage(first).to_json());
            return EXIT_INPUT;
        }
    };
    match run(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", e.to_json());
            e.code
        }
    }
}

/// Runs a parsed command. `Ok` carries the exit code, which is non-zero when
/// some method failed but a report was still written.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    match &cli.command {
        Command::Estimate(a) => estimate::cmd_estimate(a, cli.threads, out, err),
        Command::Simulate(a) => simulate::cmd_simulate(a, cli.threads, out, err),
        Command::Bench(a) => bench::cmd_bench(a, cli.threads, out, err),
        Command::Profile(a) => profile::cmd_profile(a, out, err),
    }
}
