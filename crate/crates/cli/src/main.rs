use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use levelstat_cli::config::DEFAULT_FRACTIONS;
use levelstat_cli::{
    run, AnalyzeConfig, GenerateConfig, MissingLevelsConfig, RunConfig, Source,
};
use levelstat_core::{DegeneracyPolicy, ScanGrid, SpinChainParams};

/// Symmetry-sector inference from higher-order spacing ratios.
#[derive(Debug, Parser)]
#[command(name = "levelstat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic or model spectrum as a level file.
    Generate {
        #[command(subcommand)]
        source: SourceArgs,
    },
    /// Run the estimator on a level file.
    Analyze(AnalyzeArgs),
    /// Delete random levels and track the estimate.
    MissingLevels(MissingArgs),
}

#[derive(Debug, Args)]
struct OutArgs {
    #[arg(long, default_value = ".")]
    outdir: PathBuf,
    /// Output file stem (default: the source kind).
    #[arg(long)]
    name: Option<String>,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, default_value_t = 0.5)]
    grid_lo: f64,
    #[arg(long, default_value_t = 8.0)]
    grid_hi: f64,
    #[arg(long, default_value_t = 0.1)]
    grid_step: f64,
}

impl GridArgs {
    fn grid(&self) -> ScanGrid {
        ScanGrid { lo: self.grid_lo, hi: self.grid_hi, step: self.grid_step }
    }
}

#[derive(Debug, Subcommand)]
enum SourceArgs {
    /// Superposition of independent GOE blocks.
    Goe {
        #[arg(long, default_value_t = 1)]
        blocks: usize,
        #[arg(long, default_value_t = 5000)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// O(n^2) tridiagonal model (default).
        #[arg(long, conflicts_with = "dense")]
        tridiagonal: bool,
        /// Dense (M + M^T)/2 matrices.
        #[arg(long)]
        dense: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Uncorrelated levels with unit mean spacing.
    Poisson {
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        blocks: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Fixed-magnetization block of the XXZ chain with next-nearest couplings.
    SpinChain {
        #[arg(long, default_value_t = 13)]
        sites: usize,
        #[arg(long, default_value_t = 0.5)]
        eta: f64,
        /// Up spins (default: sites / 2, rounded down).
        #[arg(long)]
        n_up: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        jxy: f64,
        #[arg(long, default_value_t = 0.5)]
        jz: f64,
        #[arg(long, default_value_t = 1.0)]
        jxy2: f64,
        #[arg(long, default_value_t = 0.5)]
        jz2: f64,
        /// Keep numerically coincident eigenvalues.
        #[arg(long)]
        keep_degenerate: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Lowest Dirichlet levels of the unit disk.
    CircleBilliard {
        #[arg(long, default_value_t = 5000)]
        n: usize,
        /// Keep both members of each degenerate pair.
        #[arg(long)]
        keep_both: bool,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = ".")]
    outdir: PathBuf,
    #[arg(long, default_value_t = 8)]
    k_max: usize,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 50)]
    bins: usize,
    /// Histogram upper edge (default 5 for k <= 2, 4 above).
    #[arg(long)]
    cut: Option<f64>,
}

#[derive(Debug, Args)]
struct MissingArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = ".")]
    outdir: PathBuf,
    /// Ratio order.
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[command(flatten)]
    grid: GridArgs,
    /// Comma-separated deletion fractions.
    #[arg(long, value_delimiter = ',')]
    fractions: Option<Vec<f64>>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn to_config(cli: Cli) -> RunConfig {
    match cli.command {
        Command::Generate { source } => {
            let (source, out) = match source {
                SourceArgs::Goe { blocks, dim, seed, dense, out, .. } => {
                    (Source::Goe { blocks, dim, seed, tridiagonal: !dense }, out)
                }
                SourceArgs::Poisson { n, blocks, seed, out } => {
                    (Source::Poisson { n, blocks, seed }, out)
                }
                SourceArgs::SpinChain {
                    sites, eta, n_up, jxy, jz, jxy2, jz2, keep_degenerate, out,
                } => {
                    let params = SpinChainParams {
                        sites,
                        jxy,
                        jz,
                        jxy2,
                        jz2,
                        eta,
                        n_up: n_up.unwrap_or(sites / 2),
                    };
                    (Source::SpinChain { params, keep_degenerate }, out)
                }
                SourceArgs::CircleBilliard { n, keep_both, out } => {
                    let policy = if keep_both {
                        DegeneracyPolicy::KeepBoth
                    } else {
                        DegeneracyPolicy::KeepOnce
                    };
                    (Source::CircleBilliard { n, policy }, out)
                }
            };
            RunConfig::Generate(GenerateConfig { source, outdir: out.outdir, name: out.name })
        }
        Command::Analyze(a) => RunConfig::Analyze(AnalyzeConfig {
            input: a.input,
            outdir: a.outdir,
            k_max: a.k_max,
            grid: a.grid.grid(),
            bins: a.bins,
            cut: a.cut,
        }),
        Command::MissingLevels(m) => RunConfig::MissingLevels(MissingLevelsConfig {
            input: m.input,
            outdir: m.outdir,
            k: m.k,
            grid: m.grid.grid(),
            fractions: m.fractions.unwrap_or_else(|| DEFAULT_FRACTIONS.to_vec()),
            trials: m.trials,
            seed: m.seed,
        }),
    }
}

fn main() -> ExitCode {
    let cfg = to_config(Cli::parse());
    match run(&cfg) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {msg}", e.category());
            ExitCode::FAILURE
        }
    }
}
