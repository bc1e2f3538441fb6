//! Scenario files: which system, which experiment, its parameters, and where
//! the reports go. `schema/scenario.schema.json` documents the format.

use std::path::{Path, PathBuf};

use hyperlab_core::systems::Builtin;
use hyperlab_core::{Example63Config, FiniteSet, Point, System, DEFAULT_TOLERANCE};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::io::read_permutation;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
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

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::OrbitSeries => "orbit-series",
            Experiment::ClassifyPair => "classify-pair",
            Experiment::RecurrenceScan => "recurrence-scan",
            Experiment::UrScan => "ur-scan",
            Experiment::ApScan => "ap-scan",
            Experiment::ChainAnalyze => "chain-analyze",
            Experiment::ComponentCycle => "component-cycle",
            Experiment::ScrambledFamily => "scrambled-family",
            Experiment::OdometerSignature => "odometer-signature",
            Experiment::EntropyGrowth => "entropy-growth",
            Experiment::VerifyTheorems => "verify-theorems",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemSpec {
    Example63(Example63Config),
    /// The `(1, 1/n)` family for `n <= max_level` with their orbits, plus a
    /// circle mesh.
    Staircase {
        max_level: u64,
        circle_mesh: u64,
    },
    /// Path to a permutation JSON file, relative to the scenario file.
    Permutation(PathBuf),
}

impl Default for SystemSpec {
    fn default() -> Self {
        SystemSpec::Example63(Example63Config::default())
    }
}

impl SystemSpec {
    pub fn build(&self, base_dir: &Path, tolerance: f64) -> Result<System, Error> {
        match self {
            SystemSpec::Example63(cfg) => System::example63(cfg).map_err(|e| Error::Config(e.to_string())),
            SystemSpec::Staircase { max_level, circle_mesh } => {
                System::example63(&Example63Config::staircase(*max_level, *circle_mesh))
                    .map_err(|e| Error::Config(e.to_string()))
            }
            SystemSpec::Permutation(p) => {
                read_permutation(&base_dir.join(p), tolerance).map_err(|e| Error::Config(e.to_string()))
            }
        }
    }
}

/// A set of carrier points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    /// One of the named sets `C`, `D`, `H`.
    Builtin(Builtin),
    /// Explicit points: `[angle_num, angle_den, h_num, h_den]` or integer ids.
    Points(Vec<Point>),
    /// The full orbit `U_n`.
    LevelOrbit(u64),
    /// `m` equispaced circle points.
    CircleMesh(u64),
    Union(Vec<SetSpec>),
}

impl SetSpec {
    pub fn resolve(&self, system: &System) -> Result<FiniteSet, Error> {
        let cfg = |e: hyperlab_core::SystemError| Error::Config(e.to_string());
        let set = match self {
            SetSpec::Builtin(b) => system.builtin_set(b).map_err(cfg)?,
            SetSpec::Points(pts) => FiniteSet::new(pts.iter().cloned()).map_err(|e| Error::Config(e.to_string()))?,
            SetSpec::LevelOrbit(n) => system.level_orbit(*n).map_err(cfg)?,
            SetSpec::CircleMesh(m) => system.circle_points(*m).map_err(cfg)?,
            SetSpec::Union(parts) => {
                let mut it = parts.iter();
                let first = it.next().ok_or_else(|| Error::Config("empty union".into()))?;
                let mut acc = first.resolve(system)?;
                for p in it {
                    acc = acc.union(&p.resolve(system)?);
                }
                acc
            }
        };
        if let Some(p) = set.iter().find(|p| !system.contains(p)) {
            return Err(Error::Config(format!("point {p} is not in the carrier")));
        }
        Ok(set)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub system: SystemSpec,
    pub experiment: Experiment,
    #[serde(default = "empty_object")]
    pub parameters: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

fn empty_object() -> serde_json::Value {
    serde_json::Value::Object(Default::default())
}

/// A scenario together with the bytes it was read from and its location.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub sha256: String,
    pub base_dir: PathBuf,
}

impl LoadedScenario {
    pub fn from_path(path: &Path) -> Result<Self, Error> {
        let bytes = std::fs::read(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let scenario: Scenario =
            serde_json::from_slice(&bytes).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base_dir = path.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf);
        if let SystemSpec::Permutation(p) = &scenario.system {
            let full = base_dir.join(p);
            if !full.is_file() {
                return Err(Error::Config(format!(
                    "permutation file {} does not exist",
                    full.display()
                )));
            }
        }
        Ok(Self {
            scenario,
            sha256: crate::report::sha256_hex(&bytes),
            base_dir,
        })
    }

    /// Default parameters on the default system.
    pub fn defaults(experiment: Experiment) -> Self {
        let scenario = Scenario {
            system: SystemSpec::default(),
            experiment,
            parameters: empty_object(),
            output: None,
            seed: None,
            tolerance: None,
        };
        let canonical = serde_json::to_vec(&scenario).expect("scenario serializes");
        Self {
            scenario,
            sha256: crate::report::sha256_hex(&canonical),
            base_dir: PathBuf::from("."),
        }
    }

    pub fn tolerance(&self) -> f64 {
        self.scenario.tolerance.unwrap_or(DEFAULT_TOLERANCE)
    }

    /// The experiment parameters; an empty object in a defaults run means
    /// `T::default()`, otherwise every required field must be present.
    pub fn parameters<T: DeserializeOwned + Default>(&self) -> Result<T, Error> {
        match &self.scenario.parameters {
            serde_json::Value::Object(m) if m.is_empty() => Ok(T::default()),
            v => serde_json::from_value(v.clone())
                .map_err(|e| Error::Config(format!("parameters of {}: {e}", self.scenario.experiment.name()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_experiment_is_named() {
        let e = serde_json::from_str::<Scenario>(r#"{"system": {"example63": {"levels": [4], "circle_mesh": 4}}}"#)
            .unwrap_err();
        assert!(e.to_string().contains("missing field `experiment`"), "{e}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<Scenario>(r#"{"experiment": "ur-scan", "bogus": 1}"#).is_err());
    }

    #[test]
    fn set_specs_parse() {
        let s: SetSpec = serde_json::from_str(r#"{"builtin": {"name": "C", "depth": 2}}"#).unwrap();
        assert_eq!(s, SetSpec::Builtin(Builtin::C { depth: 2 }));
        let s: SetSpec = serde_json::from_str(r#"{"points": [[0, 1, 1, 4], 3]}"#).unwrap();
        assert_eq!(s, SetSpec::Points(vec![Point::house(4, 0), Point::Abstract(3)]));
    }
}
