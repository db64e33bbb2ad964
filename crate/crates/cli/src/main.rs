//! `netgame`: build, verify, enumerate and sweep network formation game
//! equilibria from the command line.
//!
//! Exit codes: 0 success, 2 argument error, 3 enumeration cap exceeded,
//! 4 internal invariant violation.

mod bounds;
mod config;
mod construct;
mod enumerate;
mod output;
mod sweep;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Axis, Config, Format, GameKind, KRule};
use output::{Failure, Outcome};

#[derive(Parser, Debug)]
#[command(
    name = "netgame",
    version,
    about = "Exact analysis of UC and UBBC network formation games"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default, Clone)]
pub struct Global {
    /// Game: uc or ubbc.
    #[arg(long, global = true, value_enum)]
    pub game: Option<GameKind>,
    /// Number of agents.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Uniform budget (UBBC) or center purchases (star).
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Edge price for UC, as "p/q" or an integer.
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    /// Per-agent budgets for UBBC, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub budgets: Option<Vec<usize>>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Maximum number of joint profiles to enumerate.
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    /// Seed for anything random. Defaults to 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// JSON file with defaults for any flag; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a named construction and its predicted costs.
    Construct {
        /// complete-balanced, complete-max, star, equality-cycle,
        /// wind-turbine or general-wind-turbine.
        #[arg(long)]
        name: Option<String>,
    },
    /// Check a profile: Nash status, structural criteria and metrics.
    Verify {
        /// Profile as a file path, inline JSON, or "-" for stdin.
        #[arg(long, conflicts_with = "random")]
        profile: Option<String>,
        /// Verify a seeded random feasible profile instead.
        #[arg(long)]
        random: bool,
    },
    /// Enumerate every Nash equilibrium by brute force.
    Enumerate {
        /// Keep profiles with parallel declarations (UC).
        #[arg(long)]
        no_prune_parallel: bool,
        /// Keep disconnected profiles (UC).
        #[arg(long)]
        no_prune_disconnected: bool,
        /// Include the equilibrium list in JSON output.
        #[arg(long)]
        profiles: bool,
    },
    /// One row per parameter value: construction ratios, bounds, oracle NIR.
    Sweep {
        #[arg(long, value_enum)]
        axis: Option<Axis>,
        /// Comma separated list, or an inclusive integer range "a..b".
        #[arg(long)]
        values: Option<String>,
        /// Construction evaluated on every row.
        #[arg(long)]
        name: Option<String>,
        /// Derive k from n: quarter gives k = ceil((n-1)/4).
        #[arg(long, value_enum)]
        k_rule: Option<KRule>,
        /// Derive k = floor(density * n + offset).
        #[arg(long, allow_hyphen_values = true)]
        density: Option<String>,
        #[arg(long, requires = "density", allow_hyphen_values = true)]
        offset: Option<String>,
    },
    /// Closed-form bounds for a list of alpha values.
    Bounds {
        /// Comma separated alpha values.
        #[arg(long)]
        values: Option<String>,
    },
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file = match &cli.global.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let settings = file.merge_global(&cli.global)?;
    let outcome: Outcome = match cli.command {
        Command::Construct { name } => {
            let name = name.or(file.name.clone());
            construct::run(&settings, name)
        }
        Command::Verify { profile, random } => {
            let source = profile.or(file.profile_source());
            verify::run(&settings, source, random || file.random.unwrap_or(false))
        }
        Command::Enumerate {
            no_prune_parallel,
            no_prune_disconnected,
            profiles,
        } => enumerate::run(
            &settings,
            enumerate::Flags {
                prune_parallel: !(no_prune_parallel || file.no_prune_parallel.unwrap_or(false)),
                prune_disconnected: !(no_prune_disconnected
                    || file.no_prune_disconnected.unwrap_or(false)),
                include_profiles: profiles || file.profiles.unwrap_or(false),
            },
        ),
        Command::Sweep {
            axis,
            values,
            name,
            k_rule,
            density,
            offset,
        } => sweep::run(
            &settings,
            sweep::Request {
                axis: axis.or(file.axis),
                values: values.or(file.values_text()),
                name: name.or(file.name.clone()),
                k_rule: k_rule.or(file.k_rule),
                density: density.or(file.density_text()),
                offset: offset.or(file.offset_text()),
            },
        ),
        Command::Bounds { values } => bounds::run(&settings, values.or(file.values_text())),
    }?;
    outcome.emit(settings.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("netgame: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
