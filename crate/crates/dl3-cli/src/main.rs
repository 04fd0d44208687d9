//! `dl3`: curve-spec ingestion, Frenet sampling, Mannheim pair construction
//! and verification, CSV/JSON emission.
//!
//! Exit codes: 0 success, 2 validation/compute error, 3 pair-verification
//! failure. Errors are machine-readable JSON on standard error and a
//! human-readable line on standard output. `DL3_THREADS` caps internal
//! parallelism (0 or unset = automatic).

mod commands;
mod specfile;

use clap::{Parser, Subcommand};
use dl3::mannheim::ReportLevel;
use dl3::Error;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Parse,
    Validate,
    Compute,
    Io,
}

#[derive(Debug)]
pub struct CmdError {
    stage: Stage,
    error: Error,
}

impl CmdError {
    pub fn new(stage: Stage, error: Error) -> Self {
        Self { stage, error }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    stage: Stage,
    kind: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    error: ErrorBody<'a>,
}

#[derive(Parser)]
#[command(
    name = "dl3",
    version,
    about = "Dual Lorentzian curve toolkit: Frenet data and Mannheim partner pairs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample position, frame, curvature and torsion along a curve into CSV
    Frenet {
        /// Curve spec JSON
        #[arg(long)]
        spec: PathBuf,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        /// Override the spec's sample count
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Construct a Mannheim partner pair from a torsion profile Q and lambda
    Partner {
        /// Invariants-source spec JSON with Q and lambda (no P)
        #[arg(long)]
        spec: PathBuf,
        /// Output directory for alpha.csv, beta.csv, pair.json
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the pair property and write a residual report (exit 3 on failure)
    Verify {
        /// Directory holding alpha.csv, beta.csv, pair.json
        pair_dir: PathBuf,
        /// Verification tolerance
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Report path (default: <pair_dir>/report.json)
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Full identity report including real/dual component splits
    Theorems {
        /// Directory holding alpha.csv, beta.csv, pair.json
        pair_dir: PathBuf,
        /// Verification tolerance
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Report path (default: <pair_dir>/theorems.json)
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<(), CmdError> {
    match std::env::var("DL3_THREADS") {
        Err(_) => Ok(()),
        Ok(v) => {
            let n: usize = v.parse().map_err(|_| {
                CmdError::new(
                    Stage::Validate,
                    Error::Input(format!(
                        "DL3_THREADS must be a non-negative integer, got `{v}`"
                    )),
                )
            })?;
            dl3::exec::configure_thread_pool(n)
                .map_err(|e| CmdError::new(Stage::Validate, Error::Input(e)))
        }
    }
}

fn run() -> Result<i32, CmdError> {
    configure_threads()?;
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Frenet { spec, out, samples } => commands::cmd_frenet(&spec, &out, samples),
        Cmd::Partner { spec, out } => commands::cmd_partner(&spec, &out),
        Cmd::Verify {
            pair_dir,
            tol,
            report,
        } => commands::cmd_report(&pair_dir, tol, report, ReportLevel::Verify),
        Cmd::Theorems {
            pair_dir,
            tol,
            report,
        } => commands::cmd_report(&pair_dir, tol, report, ReportLevel::Theorems),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            let body = ErrorObject {
                error: ErrorBody {
                    stage: e.stage,
                    kind: e.error.kind(),
                    message: e.error.to_string(),
                },
            };
            eprintln!(
                "{}",
                serde_json::to_string(&body).unwrap_or_else(|_| "{\"error\":{}}".into())
            );
            println!("error: {}", e.error);
            ExitCode::from(2)
        }
    }
}
