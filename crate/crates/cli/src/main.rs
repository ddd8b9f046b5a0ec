//! `locent` command-line driver. Qubit and node labels on the command line and
//! in every emitted file are 1-based.

mod commands;
mod error;
mod fit;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::CliResult;

#[derive(Parser)]
#[command(
    name = "locent",
    version,
    about = "Localizable-entanglement bounds for noisy stabilizer states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a square-hexagonal color code and write its lattice JSON.
    Code {
        #[arg(long)]
        distance: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert a stabilizer state into an LC-equivalent graph state.
    Stab2graph {
        /// Tableau JSON file.
        #[arg(
            long,
            conflicts_with = "seven_qubit",
            required_unless_present = "seven_qubit"
        )]
        tableau: Option<PathBuf>,
        /// Use the logical |+> state of the 7-qubit color code.
        #[arg(long)]
        seven_qubit: bool,
        /// Randomizes the control selection; required with --force-pair.
        #[arg(long)]
        seed: Option<u64>,
        /// Control `a` and target `b` that must end up linked.
        #[arg(long, num_args = 2, value_names = ["A", "B"], requires = "seed")]
        force_pair: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Create the link (a, b) by adaptive local complementation.
    Alc {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        /// Seed for the random simple path.
        #[arg(long, required_unless_present = "path", conflicts_with = "path")]
        seed: Option<u64>,
        /// Explicit path such as "1,4,9".
        #[arg(long)]
        path: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep a bound over pair distances and noise strengths into CSV.
    Sweep {
        #[arg(long, value_enum)]
        bound: Bound,
        #[arg(long)]
        distance: usize,
        /// Explicit pair; by default one bulk pair per requested d.
        #[arg(long, num_args = 2, value_names = ["A", "B"], conflicts_with = "d")]
        pair: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        d: Vec<usize>,
        #[arg(long)]
        kind: String,
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        n_samples: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Alc)]
        strategy: StrategyArg,
        /// Required for the mlb bound.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit ln(value) = a' + b d per (bound, kind, q) group of a sweep CSV.
    Fit { csv: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Bound {
    Wlb,
    Mlb,
}

impl Bound {
    pub fn name(self) -> &'static str {
        match self {
            Bound::Wlb => "wlb",
            Bound::Mlb => "mlb",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Alc,
    DirectLink,
}

fn configure_threads() {
    if let Some(n) = std::env::var("STABLE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Code { distance, out } => commands::code(distance, out.as_deref()),
        Command::Stab2graph {
            tableau,
            seven_qubit,
            seed,
            force_pair,
            out,
        } => {
            let pair = force_pair.map(|p| (p[0], p[1]));
            commands::stab2graph(tableau.as_deref(), seven_qubit, seed, pair, out.as_deref())
        }
        Command::Alc {
            graph,
            a,
            b,
            seed,
            path,
            out,
        } => commands::alc(&graph, a, b, seed, path.as_deref(), out.as_deref()),
        Command::Sweep {
            bound,
            distance,
            pair,
            d,
            kind,
            q,
            n_samples,
            strategy,
            seed,
            out,
        } => {
            let args = sweep::SweepArgs {
                bound,
                distance,
                pair: pair.map(|p| (p[0], p[1])),
                d_list: d,
                kind: kind.parse()?,
                q_list: q,
                n_samples,
                strategy,
                seed,
            };
            sweep::run(&args, out.as_deref())
        }
        Command::Fit { csv } => fit::run(&csv),
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
