use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use almost_core::TieBreak;
use almost_core_cli::commands::{self, BenchConfig, BenchModel};
use almost_core_cli::{CliError, Instance, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Exact almost-core analysis of cooperative cost games.
#[derive(Parser)]
#[command(name = "acore", version)]
struct Cli {
    /// Add approximate decimal values next to the exact ones.
    #[arg(long, global = true)]
    decimal: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Core emptiness, almost-core optima and every relaxation value.
    Analyze {
        file: PathBuf,
        /// Analyze the monotonized game instead.
        #[arg(long)]
        monotonize: bool,
        /// Add the nonnegative optimum and its last-monotone bound.
        #[arg(long)]
        nonneg: bool,
    },
    /// Minimum-cost spanning tree games.
    #[command(subcommand)]
    Mst(MstCommand),
    /// Random MST instances: the 2-approximation against the exact optimum.
    Bench {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        /// Agent counts, `k` or `a..b` inclusive.
        #[arg(long = "n", default_value = "2..8")]
        n: String,
        #[arg(long, value_enum, default_value_t = Model::Uniform)]
        model: Model,
        /// Worker threads; defaults to one per core.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Almost-core membership of a point via the core separation reduction.
    Separate {
        file: PathBuf,
        /// Comma-separated shares, e.g. `0,1,1/2`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Separate over the almost core intersected with `x >= 0`.
        #[arg(long)]
        nonneg: bool,
        #[arg(long)]
        monotonize: bool,
    },
}

#[derive(Subcommand)]
enum MstCommand {
    /// Run the 2-approximation and compare with the exact optimum.
    Approx {
        file: PathBuf,
        /// Also report whether the output exceeds the monotonized costs.
        #[arg(long)]
        monotonize: bool,
        /// Largest agent count for which the exact optimum is computed.
        #[arg(long, default_value_t = 12)]
        limit: usize,
        #[arg(long, value_enum, default_value_t = Tie::Lowest)]
        tie: Tie,
    },
    /// The Granot-Huberman core allocation.
    Gh { file: PathBuf },
    /// Dump the characteristic table.
    Table {
        file: PathBuf,
        #[arg(long)]
        monotonize: bool,
        /// Print an explicit instance file instead of JSON.
        #[arg(long)]
        instance: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Uniform,
    Euclidean,
    Path,
    Tight,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tie {
    Lowest,
    Highest,
}

#[derive(Serialize)]
struct SummaryLine {
    summary: almost_core_cli::report::BenchSummary,
}

fn print_json(value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    writeln!(io::stdout(), "{text}").map_err(|e| CliError::Output(e.to_string()))
}

fn run(cli: Cli) -> Result<()> {
    let decimal = cli.decimal;
    match cli.command {
        Command::Analyze {
            file,
            monotonize,
            nonneg,
        } => print_json(&commands::analyze(&Instance::read(&file)?, monotonize, nonneg, decimal)?),
        Command::Mst(MstCommand::Approx {
            file,
            monotonize,
            limit,
            tie,
        }) => {
            let tie = match tie {
                Tie::Lowest => TieBreak::LowestIndex,
                Tie::Highest => TieBreak::HighestIndex,
            };
            print_json(&commands::mst_approx(&Instance::read(&file)?, monotonize, limit, tie, decimal)?)
        }
        Command::Mst(MstCommand::Gh { file }) => print_json(&commands::mst_gh(&Instance::read(&file)?, decimal)?),
        Command::Mst(MstCommand::Table {
            file,
            monotonize,
            instance,
        }) => {
            let inst = Instance::read(&file)?;
            if instance {
                let text = commands::mst_table_instance(&inst, monotonize)?.to_toml();
                write!(io::stdout(), "{text}").map_err(|e| CliError::Output(e.to_string()))
            } else {
                print_json(&commands::mst_table(&inst, monotonize)?)
            }
        }
        Command::Bench {
            seed,
            count,
            n,
            model,
            jobs,
        } => {
            let (n_min, n_max) = commands::parse_range(&n)?;
            let cfg = BenchConfig {
                seed,
                count,
                n_min,
                n_max,
                model: match model {
                    Model::Uniform => BenchModel::Uniform,
                    Model::Euclidean => BenchModel::Euclidean,
                    Model::Path => BenchModel::Path,
                    Model::Tight => BenchModel::Tight,
                },
                decimal,
            };
            if let Some(jobs) = jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build_global()
                    .map_err(|e| CliError::Usage(e.to_string()))?;
            }
            let mut out = io::stdout().lock();
            let summary = commands::bench(&cfg, |record| {
                let line = serde_json::to_string(record).map_err(|e| CliError::Output(e.to_string()))?;
                writeln!(out, "{line}").map_err(|e| CliError::Output(e.to_string()))
            })?;
            let line = serde_json::to_string(&SummaryLine { summary })
                .map_err(|e| CliError::Output(e.to_string()))?;
            writeln!(out, "{line}").map_err(|e| CliError::Output(e.to_string()))
        }
        Command::Separate {
            file,
            point,
            nonneg,
            monotonize,
        } => {
            let inst = Instance::read(&file)?;
            let point = commands::parse_point(&point)?;
            print_json(&commands::separate(&inst, &point, nonneg, monotonize)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
