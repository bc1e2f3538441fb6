//! File formats, the scenario runner and the checks behind `verify-theorems`
//! for [`hyperlab_core`].

pub mod corpus;
pub mod experiments;
pub mod io;
pub mod parallel;
pub mod report;
pub mod scenario;
pub mod theorems;

use std::path::{Path, PathBuf};

pub use experiments::Status;
use report::ReportWriter;
use scenario::LoadedScenario;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] anyhow::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        1
    }
}

/// Command-line overrides applied on top of a scenario.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
}

/// The outcome of one scenario run.
#[derive(Debug)]
pub struct RunSummary {
    pub status: Status,
    pub out_dir: PathBuf,
    pub manifest: PathBuf,
}

impl RunSummary {
    /// 0 on success, 2 when a checked property was violated.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::Violated(_) => 2,
        }
    }
}

pub const DEFAULT_OUT: &str = "hyperlab-out";

pub fn run_scenario(loaded: &LoadedScenario, overrides: &Overrides) -> Result<RunSummary, Error> {
    let sc = &loaded.scenario;
    let tolerance = overrides.tolerance.unwrap_or_else(|| loaded.tolerance());
    if !(tolerance >= 0.0 && tolerance.is_finite()) {
        return Err(Error::Config(format!(
            "tolerance must be non-negative, got {tolerance}"
        )));
    }
    let seed = overrides.seed.or(sc.seed).unwrap_or(theorems::DEFAULT_SEED);
    let out_dir = match (&overrides.out, &sc.output) {
        (Some(o), _) => o.clone(),
        (None, Some(o)) => loaded.base_dir.join(o),
        (None, None) => Path::new(DEFAULT_OUT).join(sc.experiment.name()),
    };
    let system = sc.system.build(&loaded.base_dir, tolerance)?;
    let mut writer = ReportWriter::new(&out_dir, sc.experiment.name(), &loaded.sha256, seed);
    let status = experiments::run(&mut experiments::Context {
        scenario: loaded,
        system: &system,
        seed,
        tolerance,
        writer: &mut writer,
    })?;
    let label = match &status {
        Status::Ok => "ok",
        Status::Violated(_) => "violated",
    };
    let manifest = writer.finish(label)?;
    Ok(RunSummary {
        status,
        out_dir,
        manifest,
    })
}
