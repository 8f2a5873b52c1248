//! `fislab`: explanations, feature importance scores and property audits for
//! discrete classifiers.
//!
//! Exit status is 0 on success, 1 when a verification reports a failure and 2
//! on usage or input errors.

mod commands;
mod input;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(
    name = "fislab",
    version,
    about = "Exact formal feature importance scores"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed of the random problem stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Number of random problems to audit or search.
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Worker threads for parallel sweeps; 1 runs sequentially.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// JSON model document.
    #[arg(long, conflicts_with = "expr")]
    model: Option<PathBuf>,

    /// Boolean expression such as "x1 & (x2 | x3 & x4)".
    #[arg(long)]
    expr: Option<String>,

    /// Number of features of an expression model (default: highest index used).
    #[arg(long, requires = "expr")]
    features: Option<usize>,

    /// Instance as a comma-separated point, or a JSON instance document.
    #[arg(long)]
    instance: Option<String>,

    /// Expected class of the instance; must match the prediction.
    #[arg(long)]
    label: Option<u32>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List AXps, CXps and relevant features and verify hitting-set duality.
    Explain(ModelArgs),
    /// Compute feature importance scores.
    Score {
        #[command(flatten)]
        model: ModelArgs,
        /// Comma-separated score identifiers, or "all".
        #[arg(long, default_value = "all")]
        fis: String,
        /// Also compute the dual of every selected score.
        #[arg(long)]
        dual: bool,
        /// Cross-check Shapley-based scores with the permutation oracle.
        #[arg(long)]
        oracle: bool,
        /// Add a ranking column per score.
        #[arg(long)]
        ranking: bool,
    },
    /// Audit properties P01 to P09.
    Props {
        #[command(flatten)]
        model: ModelArgs,
        /// Comma-separated score identifiers, or "all".
        #[arg(long)]
        fis: Option<String>,
        /// Search random problems for a violation of this property.
        #[arg(long, conflicts_with = "duality")]
        search: Option<String>,
        /// Report duality levels over random problems.
        #[arg(long)]
        duality: bool,
        /// Largest number of features of random problems (at least 2).
        #[arg(long, default_value_t = 6)]
        max_features: usize,
    },
    /// Reproduce the reference worked examples against embedded golden values.
    Repro,
    /// Power indices of a weighted voting game under every template.
    Wvg {
        /// Quota Q.
        #[arg(long)]
        quota: u64,
        /// Comma-separated voter weights.
        #[arg(long)]
        weights: String,
    },
}

/// Failure categories mapped to exit codes.
pub enum Failure {
    Usage(String),
    Check(String),
}

impl From<fislab::Error> for Failure {
    fn from(e: fislab::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn configure_workers(workers: Option<usize>) -> Result<fislab::Execution, Failure> {
    match workers {
        Some(0) => Err(Failure::Usage("--workers must be at least 1".into())),
        Some(1) => Ok(fislab::Execution::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(fislab::Execution::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(fislab::Execution::Sequential),
        None => Ok(fislab::Execution::default()),
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let exec = configure_workers(cli.workers)?;
    let ctx = commands::Context {
        format: cli.format,
        seed: cli.seed,
        budget: cli.budget,
        exec,
    };
    match cli.command {
        Command::Explain(model) => commands::explain(&ctx, &model),
        Command::Score {
            model,
            fis,
            dual,
            oracle,
            ranking,
        } => commands::score(&ctx, &model, &fis, dual, oracle, ranking),
        Command::Props {
            model,
            fis,
            search,
            duality,
            max_features,
        } => commands::props(
            &ctx,
            &model,
            fis.as_deref(),
            search.as_deref(),
            duality,
            max_features,
        ),
        Command::Repro => commands::repro(&ctx),
        Command::Wvg { quota, weights } => commands::wvg(&ctx, quota, &weights),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check(report)) => {
            print!("{report}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
