//! `qsi`: semi-invariant dimensions, stretch tables and flag translations
//! from the command line.
//!
//! Exit status: 0 on success, 2 for usage and input errors, 3 when the
//! dimension data is incompatible (non-orthogonal vectors, cyclic quivers,
//! too many rows), 4 when a domain check fails (codimension or
//! nonnegativity of a flag problem, a KTT violation, an oracle mismatch).

mod commands;
mod input;
mod output;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use quiver_si::lab::SearchBounds;
use quiver_si::Partition;

use crate::input::VectorArg;
use crate::output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "qsi",
    version,
    about = "Semi-invariants of quivers and their stretching behavior"
)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "QSI_SEED", default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stretched Littlewood-Richardson coefficient c^{n nu}_{n lambda, n mu}.
    Lr {
        #[arg(long)]
        lam: Partition,
        #[arg(long)]
        mu: Partition,
        #[arg(long)]
        nu: Partition,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },

    /// Stretch table n -> dim SI(Q, alpha)_{n sigma}.
    ///
    /// Vectors are positional (`1,1`) or keyed by vertex id (`v1=1,v2=1`).
    /// Values in the quiver file take precedence over flags.
    Si {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long)]
        alpha: Option<VectorArg>,
        #[arg(long, conflicts_with = "sigma")]
        beta: Option<VectorArg>,
        /// Weight to use instead of sigma_beta.
        #[arg(long)]
        sigma: Option<VectorArg>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        stretch: u64,
        /// Cross-check every value with the evaluation oracle.
        #[arg(long)]
        oracle: bool,
        /// Run the oracle with integer entries in [-BOUND, BOUND] and exact
        /// arithmetic instead of modular arithmetic.
        #[arg(long, value_name = "BOUND", requires = "oracle", value_parser = clap::value_parser!(i64).range(1..))]
        exact: Option<i64>,
        /// Check saturation, Fulton, KTT and polynomial consistency.
        #[arg(long)]
        check: bool,
    },

    /// Flag quiver of a tuple of partitions, compared against SL_r invariants.
    Translate {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, conflicts_with = "stretch", value_parser = clap::value_parser!(u64).range(1..))]
        n: Option<u64>,
        /// Check every stretch 1..=N.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        stretch: Option<u64>,
    },

    /// Enumerate small quivers and test the KTT prediction wherever the first
    /// stretch value is 2. Prints one JSON object per finding.
    Search {
        #[arg(long, default_value_t = 3)]
        vertices: usize,
        #[arg(long, default_value_t = 2)]
        dim: i64,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
        stretch: u64,
        #[arg(long, default_value_t = 2)]
        parallel: usize,
        #[arg(long)]
        oracle: bool,
    },

    /// Compare Ext(V, W) with Ext(ker phi, W) for a generic phi: V -> W.
    ExtDescent {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long)]
        alpha: Option<VectorArg>,
        #[arg(long)]
        beta: Option<VectorArg>,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
    },

    /// King semistability of a generic representation.
    Semistable {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long)]
        alpha: Option<VectorArg>,
        #[arg(long, conflicts_with = "sigma")]
        beta: Option<VectorArg>,
        #[arg(long)]
        sigma: Option<VectorArg>,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
    },
}

/// A completed run whose result still calls for a nonzero exit status.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn new(code: u8, message: String) -> Self {
        Self { code, message }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

fn exit_code(err: &anyhow::Error) -> u8 {
    use quiver_si::Error as E;
    if let Some(f) = err.downcast_ref::<Failure>() {
        return f.code;
    }
    match err.downcast_ref::<E>() {
        Some(
            E::NotOrthogonal { .. } | E::WeightNotOrthogonal { .. } | E::CyclicQuiver { .. } | E::TooManyRows { .. },
        ) => 3,
        Some(E::CodimFailure { .. } | E::NonnegativityFailure { .. }) => 4,
        Some(E::NonSquare { .. } | E::QuiverMismatch | E::ShapeMismatch(_) | E::IntertwiningViolation { .. }) => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<commands::Outcome> {
    let format = cli.format;
    let seed = cli.seed;
    match cli.command {
        Command::Lr { lam, mu, nu, n } => commands::lr(lam, mu, nu, n as usize, format),
        Command::Si {
            quiver,
            alpha,
            beta,
            sigma,
            stretch,
            oracle,
            exact,
            check,
        } => commands::si(
            commands::SiArgs {
                quiver: &quiver,
                alpha,
                beta,
                sigma,
                stretch: stretch as usize,
                oracle,
                exact,
                check,
                seed,
            },
            format,
        ),
        Command::Translate { problem, n, stretch } => {
            let stretches = match (n, stretch) {
                (_, Some(s)) => (1..=s as usize).collect(),
                (n, None) => vec![n.unwrap_or(1) as usize],
            };
            commands::translate(&problem, stretches, format)
        }
        Command::Search {
            vertices,
            dim,
            stretch,
            parallel,
            oracle,
        } => {
            let bounds = SearchBounds {
                vertex_bound: vertices,
                dim_bound: dim,
                n_max: stretch as usize,
                max_parallel: parallel,
            };
            commands::search(bounds, oracle, seed, format)
        }
        Command::ExtDescent {
            quiver,
            alpha,
            beta,
            trials,
        } => commands::ext_descent(&quiver, alpha, beta, trials as usize, seed, format),
        Command::Semistable {
            quiver,
            alpha,
            beta,
            sigma,
            trials,
        } => commands::semistable(&quiver, alpha, beta, sigma, trials as usize, seed, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not worth reporting.
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            let _ = stdout.flush();
            match outcome.failure {
                None => ExitCode::SUCCESS,
                Some(f) => {
                    eprintln!("{f}");
                    ExitCode::from(f.code)
                }
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
