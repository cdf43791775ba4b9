use std::path::PathBuf;
use std::process::ExitCode;

use asd_screen::commands;
use asd_screen::{CliResult, ExperimentPlan, Overrides};
use asd_screen_core::RankingMethod;
use clap::{Args, Parser, Subcommand};

/// Screening-data experiments: ingest, analyze, rank, evaluate, curve,
/// compare and synth read an experiment plan and write CSV reports.
#[derive(Parser)]
#[command(name = "asd-screen", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PlanArgs {
    /// Experiment plan (TOML).
    #[arg(long)]
    plan: PathBuf,
    /// Overrides the plan seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the plan output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the number of folds.
    #[arg(long)]
    k: Option<usize>,
}

impl PlanArgs {
    fn load(&self) -> CliResult<ExperimentPlan> {
        let overrides = Overrides {
            seed: self.seed,
            out: self.out.clone(),
            k: self.k,
        };
        ExperimentPlan::load(&self.plan, &overrides)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Record, attribute and class counts after preprocessing.
    Ingest(PlanArgs),
    /// Demographic correlations and per-category / per-item counts.
    Analyze(PlanArgs),
    /// Feature rankings for every configured ranker.
    Rank(PlanArgs),
    /// Cross-validated metrics and errors for every configured classifier.
    Evaluate(PlanArgs),
    /// SMO accuracy and F-measure over the top m ranked attributes.
    Curve {
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long, default_value = "relief_f")]
        ranker: RankingMethod,
    },
    /// SMO results next to published baselines.
    Compare(PlanArgs),
    /// Writes the plan's synthetic datasets as CSV.
    Synth(PlanArgs),
    /// Applies a saved model to a data file.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn run(command: Command) -> CliResult<Vec<PathBuf>> {
    match command {
        Command::Ingest(a) => commands::ingest(&a.load()?),
        Command::Analyze(a) => commands::analyze(&a.load()?),
        Command::Rank(a) => commands::rank_features(&a.load()?),
        Command::Evaluate(a) => commands::evaluate(&a.load()?),
        Command::Curve { plan, ranker } => commands::curve(&plan.load()?, ranker),
        Command::Compare(a) => commands::compare(&a.load()?),
        Command::Synth(a) => commands::synth(&a.load()?),
        Command::Predict { model, data, out } => commands::predict(&model, &data, &out).map(|p| vec![p]),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ASD_SCREEN_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
