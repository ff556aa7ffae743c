//! Command-line front end for `ejq-core`.
//!
//! [`run`] parses argv, executes one subcommand and writes its report. Exit
//! codes: 0 on success, 1 on a failed check or computation error, 2 on usage
//! or input errors.

pub mod commands;
pub mod input;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] ejq_core::Error),
    #[error("cannot write report: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Schema { .. } | CliError::Read { .. } => 2,
            CliError::Core(_) | CliError::Output(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ejq", version, about = "Information measures on Euclidean Jordan algebras")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues and multiplicities of an element.
    Spectrum { file: PathBuf },
    /// Entropy −tr[x ln x] of a positive element.
    Entropy { file: PathBuf },
    /// Divergence D(ρ‖σ), or the sandwiched Rényi divergence with --alpha.
    Div {
        rho: PathBuf,
        sigma: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Capacity of a list of states and its optimal prior.
    Capacity {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Minimax regret of a game.
    Minimax(MinimaxArgs),
    /// Seeded property sweeps.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Orthogonal decompositions and spectrum of a point of a polygon.
    Square {
        /// Point as `x,y` with rational coordinates.
        #[arg(long)]
        point: String,
        /// Polygon file; the unit square when omitted.
        #[arg(long)]
        polygon: Option<PathBuf>,
    },
    /// Look for points with two distinct orthogonal spectra.
    ProbePolygon {
        /// Polygon file; the unit square when omitted.
        file: Option<PathBuf>,
        /// Grid subdivisions per axis of the bounding box.
        #[arg(long, default_value_t = 10)]
        grid: usize,
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    Interval,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct MinimaxSource {
    /// State-list file; predictions range over a simplex grid of mixtures.
    pub file: Option<PathBuf>,
    /// Payoff file {"payoff": [[…], …]}.
    #[arg(long)]
    pub game: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub fixture: Option<Fixture>,
}

#[derive(Debug, Args)]
pub struct MinimaxArgs {
    #[command(flatten)]
    pub source: MinimaxSource,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Denominator of the prediction grid for state-list files.
    #[arg(long, default_value_t = 8)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// `spin:D`, `herm:R|C|H:N`, `albert` or `all`.
    #[arg(long, default_value = "all")]
    pub algebra: String,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, env = "EJQ_SEED")]
    pub seed: u64,
    /// Run trials on one thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DerivativeOrder {
    First,
    Second,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    /// Data processing under random positive trace-preserving channels.
    Dpi {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, default_value_t = ejq_core::checks::DPI_DEPTH)]
        depth: usize,
    },
    /// Concavity of the entropy.
    Concavity {
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Trace-function derivatives against finite differences.
    Derivative {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_enum, default_value_t = DerivativeOrder::Both)]
        order: DerivativeOrder,
    },
    /// Divergence to a mixture with an orthogonal state.
    Locality {
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Bregman identity: interval fixture and divergence sweep.
    BregmanIdentity {
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Recovery of distance-preserving channels on spin factors.
    StrongMonotonicity {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, default_value_t = ejq_core::checks::DPI_DEPTH)]
        depth: usize,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match commands::execute(&cli.command) {
        Ok(outcome) => {
            if let Err(e) = outcome.report.write(cli.format, out) {
                let _ = writeln!(err, "error: {}", CliError::Output(e));
                return 1;
            }
            if outcome.passed {
                0
            } else {
                let _ = writeln!(err, "check failed; see the worst trial above");
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
