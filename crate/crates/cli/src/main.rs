//! `disc`: command-line driver for the discrepancy toolkit.
//!
//! Five subcommands cover the three algorithm families plus the estimators:
//! `color` (Spencer-type set-system coloring), `partial` (one LP partial
//! coloring of a symmetric body), `walk` (coordinate walk on a convex body),
//! `contain-check` (random-coloring containment certificate), and `estimate`
//! (Monte Carlo measure / mean width). Every command reads its problem from
//! a file, computes with a seeded random source, and emits two key=value
//! documents: the result payload (stdout, or `--out FILE`) and a run
//! manifest (stderr, or `FILE.manifest`). The payload is a pure function of
//! the command line and the input bytes; timings and log lines stay in the
//! manifest and on stderr so payloads diff cleanly across reruns.
//!
//! Exit codes: 0 success; 1 when the request never reached an algorithm
//! (usage, I/O, malformed input); 2 when an algorithm ran and failed
//! (infeasible bodies, exhausted retries, stalled walks, vanished measures).

mod commands;
mod manifest;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "disc", version, about = "Discrepancy-minimization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Color a set system with ±1 signs by recursive LP partial coloring.
    Color {
        /// Set-system file: `n m` header, then one line of element indices
        /// per set.
        input: PathBuf,
        /// Scale of the per-level set-sum bound c0·√(n·ln(2m/n + 2)).
        #[arg(long, default_value_t = 1.5)]
        c0: f64,
        /// Recursion rounds the last LP point once at most this many
        /// elements remain uncolored.
        #[arg(long, default_value_t = 8)]
        n_stop: usize,
        /// Minimum fraction of coordinates each LP level must pin at ±1.
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the payload here (and the manifest to `<OUT>.manifest`)
        /// instead of stdout/stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one LP partial coloring of a symmetric body file.
    Partial {
        /// Body file (`dim` header, then `box` / `interval` / `strip` /
        /// `fixed` records).
        input: PathBuf,
        /// Minimum fraction of coordinates that must land on ±1.
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the payload here (and the manifest to `<OUT>.manifest`)
        /// instead of stdout/stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pin coordinates of a (possibly non-symmetric) body at ±alpha by the
    /// sampled coordinate walk.
    Walk {
        /// Body file; halfspace cuts are allowed here.
        input: PathBuf,
        /// Pinning level.
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Parameter profile: `rigorous` derives every constant from the
        /// admissibility bounds (tiny step counts at desk scale);
        /// `practical` keeps the bookkeeping but loosens thresholds enough
        /// to pin ⌊n/10⌋ coordinates.
        #[arg(long, value_enum, default_value_t = Profile::Practical)]
        profile: Profile,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the payload here (and the manifest to `<OUT>.manifest`)
        /// instead of stdout/stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify that a dilation of a symmetric body captures at least half
    /// of all random sign vectors.
    ContainCheck {
        /// Body file; must describe a symmetric body.
        input: PathBuf,
        /// Required lower bound on the body's Gaussian measure.
        #[arg(long, default_value_t = 0.25)]
        delta: f64,
        /// Monte Carlo draws per estimate.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the payload here (and the manifest to `<OUT>.manifest`)
        /// instead of stdout/stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimators for body functionals.
    Estimate {
        /// Body file.
        input: PathBuf,
        /// Which functional to estimate.
        #[arg(value_enum)]
        quantity: Quantity,
        /// Monte Carlo draws (LP solves, for `width`).
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Worker threads for the sharded measure estimator. The estimate
        /// is sharded over a fixed number of substreams, so the result
        /// never depends on this value.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the payload here (and the manifest to `<OUT>.manifest`)
        /// instead of stdout/stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Profile {
    Practical,
    Rigorous,
}

impl Profile {
    fn name(self) -> &'static str {
        match self {
            Profile::Practical => "practical",
            Profile::Rigorous => "rigorous",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Quantity {
    /// Gaussian measure of the body (slice measure when coordinates are
    /// fixed).
    Measure,
    /// Gaussian mean width, one LP solve per draw.
    Width,
}

impl Quantity {
    fn name(self) -> &'static str {
        match self {
            Quantity::Measure => "measure",
            Quantity::Width => "width",
        }
    }
}

/// Failures the driver can report, split by exit code.
#[derive(Debug)]
enum CliError {
    /// The request never reached an algorithm: bad flags, unreadable or
    /// malformed input files, unwritable outputs. Exit code 1.
    Usage(String),
    /// An algorithm ran and reported failure. Exit code 2.
    Algorithm(discrepancy::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Algorithm(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Algorithm(err) => write!(f, "{err}"),
        }
    }
}

impl From<discrepancy::Error> for CliError {
    fn from(err: discrepancy::Error) -> Self {
        match err {
            discrepancy::Error::Parse(_) => CliError::Usage(err.to_string()),
            other => CliError::Algorithm(other),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap renders help/version to stdout (success) and genuine
            // usage errors to stderr; fold the latter into exit code 1.
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
