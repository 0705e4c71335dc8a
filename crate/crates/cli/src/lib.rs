//! Command-line front end for the `incentive_chain` library.

pub mod commands;
pub mod figures;
pub mod output;
pub mod params;
pub mod sweep;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use crate::output::Format;
use crate::params::{usage, ModelArgs};
use crate::sweep::{Axis, Cell, Measure, Sweep};

pub use params::UsageError;

#[derive(Debug, Parser)]
#[command(
    name = "incentive-chain",
    version,
    about = "Fixation, stationary and ISS computations for incentive processes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,

    /// Output file (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact fixation probabilities rho_1..rho_{N-1} and the B/A ratio
    Fixation {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate a measure over the Cartesian product of parameter axes
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        /// Axis as name=v1,v2,... or name=start:stop:step; repeatable
        #[arg(long = "axis", required = true)]
        axes: Vec<Axis>,
        #[arg(long, value_enum, default_value = "fixation")]
        measure: Measure,
        /// Mutation rate, for the stationary measure
        #[arg(long)]
        mu: Option<f64>,
        /// Initial number of A individuals, for the fixation measure
        #[arg(long, default_value_t = 1)]
        start: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// ISS candidate locations
    Iss {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo estimate of a fixation probability
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1)]
        start: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Random seed (required)
        #[arg(long)]
        seed: Option<u64>,
        /// Per-trajectory step cap (default 100 N^2)
        #[arg(long)]
        max_steps: Option<u64>,
        /// Must be 0; fixation is undefined with mutation
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Stationary distribution of the chain with mutation
    Stationary {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        mu: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Write the data files for figures 1-4 into a directory
    Figures {
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fixation { model, output } => {
            commands::fixation(&model.resolve()?)?.emit(output.format, output.out.as_deref())
        }
        Command::Sweep {
            model,
            axes,
            measure,
            mu,
            start,
            output,
        } => {
            let sweep = Sweep {
                base: Cell {
                    params: model.resolve_partial(),
                    mu,
                    start,
                },
                axes,
                measure,
            };
            sweep.run()?.emit(output.format, output.out.as_deref())
        }
        Command::Iss { model, output } => {
            commands::iss(&model.resolve()?)?.emit(output.format, output.out.as_deref())
        }
        Command::Simulate {
            model,
            start,
            trials,
            seed,
            max_steps,
            mu,
            output,
        } => {
            let seed = seed.ok_or_else(|| usage!("simulate requires an explicit --seed"))?;
            if mu != 0.0 {
                return Err(usage!("simulate estimates fixation, which needs --mu 0").into());
            }
            let opts = commands::SimulateOptions {
                start,
                trials,
                seed,
                max_steps,
            };
            commands::simulate(&model.resolve()?, opts)?.emit(output.format, output.out.as_deref())
        }
        Command::Stationary { model, mu, output } => {
            commands::stationary_table(&model.resolve()?, mu)?
                .emit(output.format, output.out.as_deref())
        }
        Command::Figures { format, out } => {
            for path in figures::write_all(&out, format)? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

/// Exit status for an error returned by [`run`]: 2 for bad input, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    use incentive_chain::Error;
    if err.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Numerical(_) | Error::AllCensored(_)) | None => 1,
        Some(_) => 2,
    }
}
