//! `qw`: command-line access to walk construction, checks, evolution,
//! spectra, coarse-graining and the classification tools.
//!
//! Exit status is 0 on success, 1 when a check fails or the walk falls
//! outside what the command accepts, and 2 for usage errors (bad flags,
//! unreadable or malformed input files).

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qwalk_core::dihedral::SolutionCase;

mod commands;
mod output;
pub mod spec;

pub use output::OUT_DIR_ENV;

#[derive(Debug, Parser)]
#[command(name = "qw", version, about = "Discrete-time quantum walks on Cayley graphs")]
pub struct Cli {
    /// Tolerance for unitarity and class-membership checks.
    #[arg(long, global = true, default_value_t = qwalk_core::DEFAULT_TOL)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check unitarity and quadrangularity of a walk spec.
    Check { spec: PathBuf },
    /// Evolve a localized state and write the position distribution.
    Evolve(EvolveArgs),
    /// Sample the dispersion relation of a walk on Z.
    Dispersion(DispersionArgs),
    /// Emit a matplotlib script for a dispersion CSV.
    PlotScript {
        csv: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coarse-grain a scalar walk on a dihedral group into a walk on Z.
    CoarseGrain {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Coset representatives `a^m` and `a^m' r`, as `m,m'`.
        #[arg(long, value_parser = parse_pair)]
        tiling: Option<(i64, i64)>,
    },
    /// Decompose a scalar walk on an infinite Abelian group into shifts.
    Classify { spec: PathBuf },
    /// Multi-start search for unitary scalar walks on a presentation.
    Solve(SolveArgs),
    /// Walks on the infinite dihedral group.
    #[command(subcommand)]
    Dihedral(DihedralCommand),
    /// Look for a parity operator of a two-component walk on Z.
    Parity { spec: PathBuf },
    /// Fit the parity-invariant normal form to a two-component walk on Z.
    Canonical { spec: PathBuf },
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    pub spec: PathBuf,
    #[arg(long)]
    pub steps: usize,
    /// Starting site and coin component (zero-based), e.g. `0`, `3,1` or `(2,1),0`.
    #[arg(long)]
    pub init: String,
    #[arg(long)]
    pub out: PathBuf,
    /// Ring size of the truncated lattice; chosen automatically when absent.
    #[arg(long)]
    pub ring: Option<usize>,
    /// Allow the wavefront to wrap around the ring (requires `--ring`).
    #[arg(long, requires = "ring")]
    pub periodic: bool,
}

#[derive(Debug, Args)]
pub struct DispersionArgs {
    pub spec: PathBuf,
    #[arg(long, default_value_t = 1024)]
    pub samples: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Add group velocity and diffusion coefficient of the first branch.
    #[arg(long)]
    pub derivatives: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Presentation text, or a file containing it.
    pub presentation: String,
    #[arg(long, default_value_t = 256)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum DihedralCommand {
    /// Write the walk of one solution family as a spec.
    Make(MakeArgs),
    /// List admissible generating sets up to relabelling.
    Enumerate {
        #[arg(long, default_value_t = 2)]
        max_n: u32,
    },
}

#[derive(Debug, Args)]
pub struct MakeArgs {
    #[arg(long = "case")]
    pub case: SolutionCase,
    #[arg(long)]
    pub p: f64,
    /// Defaults to `p` (no-stay) or `1 - p` (no-reflection).
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub s1: i32,
    /// Defaults to +1, or -1 for no-reflection.
    #[arg(long, allow_negative_numbers = true)]
    pub s2: Option<i32>,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub s3: i32,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phase: f64,
    /// Instantiate on the finite dihedral group of this order instead.
    #[arg(long)]
    pub finite: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `m,m'`, got `{s}`"))?;
    let int = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("`{t}`: {e}"));
    Ok((int(a)?, int(b)?))
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad invocation or unreadable input; exit status 2.
    Usage(String),
    /// The command ran but the walk failed a check; exit status 1.
    Rejected(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Rejected(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

impl From<spec::SpecError> for Failure {
    fn from(e: spec::SpecError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<qwalk_core::Error> for Failure {
    fn from(e: qwalk_core::Error) -> Self {
        Failure::Rejected(e.to_string())
    }
}

pub type CmdResult = Result<(), Failure>;

/// Parses `args` and runs the command, returning the process exit status.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) => format!("error: {m}"),
                Failure::Rejected(m) => format!("failed: {m}"),
            };
            eprintln!("{msg}");
            ExitCode::from(f.code())
        }
    }
}
