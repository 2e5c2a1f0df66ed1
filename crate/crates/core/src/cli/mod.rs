//! Command-line front end. Every command builds one table in memory, so a
//! failed run writes nothing.
//!
//! Exit codes: 0 success, 1 a verified identity failed, 2 configuration or
//! domain error, 3 numerical failure.

mod commands;
mod figures;
pub mod grid;
pub mod output;

use crate::Error;
use clap::{Args, Parser, Subcommand};
use output::{render, Format, Provenance, Table};
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub use figures::{presets, Preset};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED_IDENTITY: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug, Serialize)]
#[command(name = "hyperbasis", version, about = "Eigenbases on the hyperboloid H2+, interbasis coefficients and contraction to the plane")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,
    /// Output file (stdout when absent).
    #[arg(short, long, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Evaluate a basis wavefunction on a grid of its native chart.
    Eval(EvalArgs),
    /// Interbasis coefficients W+, W-, U+, U-, V.
    Coeff(CoeffArgs),
    /// Run the identity suite.
    Verify(VerifyArgs),
    /// Contraction sweeps R -> infinity.
    Contract(ContractArgs),
    /// Effective one-dimensional potentials of the separated equations.
    Potential(PotentialArgs),
    /// Emit preset figure data files.
    Figure(FigureArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct EvalArgs {
    /// ho, ps, eq+, eq-, eq1 or eq2.
    pub basis: String,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: String,
    /// Hyperboloid radius R.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub radius: f64,
    /// Horocyclic label (ho).
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    /// Azimuthal label (ps).
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    /// Equidistant label (eq families).
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub xt: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub yt: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau2: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct CoeffArgs {
    /// W+, W-, U+, U- or V.
    pub family: String,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: String,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    /// Route name, `default` or `all`.
    #[arg(long, default_value = "default")]
    pub route: String,
    #[command(flatten)]
    pub tol: TolArgs,
}

/// Accuracy overrides for the integral and series routes.
#[derive(Args, Debug, Serialize, Default)]
pub struct TolArgs {
    #[arg(long)]
    pub quad_abs: Option<f64>,
    #[arg(long)]
    pub quad_rel: Option<f64>,
    #[arg(long)]
    pub series_rel: Option<f64>,
    #[arg(long)]
    pub series_max_terms: Option<usize>,
    /// Probe radius of the circle projection for V.
    #[arg(long)]
    pub tau_probe: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// `*`, or a comma list of family names or check ids.
    #[arg(long, default_value = "*")]
    pub filter: String,
    /// List families and check counts instead of running.
    #[arg(long)]
    pub list: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct ContractArgs {
    /// ps, eq, ho, U, W or V.
    pub target: String,
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub k1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k2: Option<f64>,
    /// Horocyclic label k2' of the W coefficient.
    #[arg(long, allow_hyphen_values = true)]
    pub k2p: Option<f64>,
    /// even, odd or both (eq and U).
    #[arg(long)]
    pub parity: Option<String>,
    /// List of radii.
    #[arg(long = "R", default_value = "10,20,40,80,160")]
    pub r_list: String,
    /// Probe radii (ps).
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Probe x (eq, ho).
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Probe y (eq, ho).
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    /// Flat angles α (U).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Emit every sample instead of the error curve.
    #[arg(long)]
    pub samples: bool,
    /// V only: evaluate at the given k2 instead of the sup over a k2 band.
    #[arg(long)]
    pub single_k2: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct PotentialArgs {
    /// ps or eq.
    pub chart: String,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    /// τ (ps) or τ1 (eq).
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct FigureArgs {
    /// Preset name, `all`, or `list`.
    pub name: String,
    /// Directory for the data files.
    #[arg(long, default_value = ".")]
    #[serde(skip)]
    pub out_dir: PathBuf,
}

/// Result of one table-producing command.
pub struct Outcome {
    pub table: Table,
    pub provenance: Provenance,
    /// Some identity failed (exit 1, output still written).
    pub failed: bool,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Domain(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

/// Caps the worker pool from HYPERBASIS_THREADS (integer ≥ 1).
fn configure_threads() -> crate::Result<()> {
    let Ok(v) = std::env::var("HYPERBASIS_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| Error::Config(format!("HYPERBASIS_THREADS must be an integer >= 1, got '{v}'")))?;
    // the global pool can be set once per process; later calls keep it
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs one table command and returns the rendered text.
pub fn execute(cli: &Cli) -> crate::Result<(String, bool)> {
    let out = commands::dispatch(cli)?;
    Ok((render(&out.table, &out.provenance, cli.format), out.failed))
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return exit_code(&e);
    }
    let result = match &cli.command {
        Command::Figure(f) => figures::run_figure(f, cli.format),
        _ => execute(&cli).and_then(|(text, failed)| {
            write_output(cli.output.as_deref(), &text)?;
            Ok(if failed { EXIT_FAILED_IDENTITY } else { EXIT_OK })
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn write_output(path: Option<&std::path::Path>, text: &str) -> crate::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush()).map_err(|e| Error::Internal(format!("stdout: {e}")))
        }
    }
}
