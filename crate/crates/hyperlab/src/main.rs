use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use hyperlab::scenario::{Experiment, LoadedScenario};
use hyperlab::{run_scenario, Error, Overrides, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Verb {
    /// Run whatever experiment the scenario file names.
    Run,
    OrbitSeries,
    ClassifyPair,
    RecurrenceScan,
    UrScan,
    ApScan,
    ChainAnalyze,
    ComponentCycle,
    ScrambledFamily,
    OdometerSignature,
    EntropyGrowth,
    VerifyTheorems,
}

impl Verb {
    fn experiment(self) -> Option<Experiment> {
        Some(match self {
            Verb::Run => return None,
            Verb::OrbitSeries => Experiment::OrbitSeries,
            Verb::ClassifyPair => Experiment::ClassifyPair,
            Verb::RecurrenceScan => Experiment::RecurrenceScan,
            Verb::UrScan => Experiment::UrScan,
            Verb::ApScan => Experiment::ApScan,
            Verb::ChainAnalyze => Experiment::ChainAnalyze,
            Verb::ComponentCycle => Experiment::ComponentCycle,
            Verb::ScrambledFamily => Experiment::ScrambledFamily,
            Verb::OdometerSignature => Experiment::OdometerSignature,
            Verb::EntropyGrowth => Experiment::EntropyGrowth,
            Verb::VerifyTheorems => Experiment::VerifyTheorems,
        })
    }
}

/// Hyperspace dynamics experiments on pointwise periodic systems.
///
/// Exit status: 0 on success, 2 when a checked property fails, 1 on a
/// configuration error.
#[derive(Debug, Parser)]
#[command(name = "hyperlab", version)]
struct Cli {
    #[arg(value_enum)]
    verb: Verb,
    /// Scenario JSON file; without it the verb runs on default parameters.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Report directory (overrides the scenario's `output`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, env = "HYPERLAB_JOBS")]
    jobs: Option<usize>,
    /// Slack for distance-table validation and set-family clustering.
    #[arg(long)]
    tolerance: Option<f64>,
}

fn load(cli: &Cli) -> Result<LoadedScenario, Error> {
    let loaded = match &cli.scenario {
        Some(path) => LoadedScenario::from_path(path)?,
        None => match cli.verb.experiment() {
            Some(e) => LoadedScenario::defaults(e),
            None => return Err(Error::Config("`run` needs --scenario".into())),
        },
    };
    if let Some(e) = cli.verb.experiment() {
        if e != loaded.scenario.experiment {
            return Err(Error::Config(format!(
                "verb {} does not match the scenario's experiment {}",
                e.name(),
                loaded.scenario.experiment.name()
            )));
        }
    }
    Ok(loaded)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("hyperlab: configuration error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("hyperlab: {e}");
            return ExitCode::from(1);
        }
    }
    let overrides = Overrides {
        out: cli.out.clone(),
        seed: cli.seed,
        tolerance: cli.tolerance,
    };
    let result = load(&cli).and_then(|loaded| run_scenario(&loaded, &overrides));
    match result {
        Ok(summary) => {
            println!("reports written to {}", summary.out_dir.display());
            if let Status::Violated(msgs) = &summary.status {
                for m in msgs {
                    eprintln!("hyperlab: check failed: {m}");
                }
            }
            ExitCode::from(summary.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("hyperlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
