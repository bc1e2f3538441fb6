//! Report files. Every file is written to a temporary sibling and renamed
//! into place; JSON reports carry the scenario hash and seed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes `bytes` to `path` via a temporary file in the same directory.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .map_or_else(|| "report".into(), |n| n.to_string_lossy().into_owned());
    let tmp = dir.join(format!(".{name}.tmp"));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

#[derive(Debug, Clone, Serialize)]
struct Envelope<'a, T: Serialize> {
    experiment: &'a str,
    scenario_sha256: &'a str,
    seed: u64,
    report: &'a T,
}

#[derive(Debug, Clone, Serialize)]
struct ManifestEntry {
    file: String,
    sha256: String,
}

#[derive(Debug, Clone, Serialize)]
struct Manifest<'a> {
    experiment: &'a str,
    scenario_sha256: &'a str,
    seed: u64,
    status: &'a str,
    files: &'a [ManifestEntry],
}

/// Collects the files of one run and finishes with `manifest.json`.
#[derive(Debug)]
pub struct ReportWriter {
    dir: PathBuf,
    experiment: String,
    scenario_sha256: String,
    seed: u64,
    files: Vec<ManifestEntry>,
}

impl ReportWriter {
    pub fn new(dir: impl Into<PathBuf>, experiment: &str, scenario_sha256: &str, seed: u64) -> Self {
        Self {
            dir: dir.into(),
            experiment: experiment.to_owned(),
            scenario_sha256: scenario_sha256.to_owned(),
            seed,
            files: Vec::new(),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn put(&mut self, name: &str, bytes: &[u8]) -> std::io::Result<()> {
        atomic_write(&self.dir.join(name), bytes)?;
        self.files.push(ManifestEntry {
            file: name.to_owned(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    /// Pretty JSON wrapped with the run metadata.
    pub fn json<T: Serialize>(&mut self, name: &str, report: &T) -> anyhow::Result<()> {
        let env = Envelope {
            experiment: &self.experiment,
            scenario_sha256: &self.scenario_sha256,
            seed: self.seed,
            report,
        };
        let mut text = serde_json::to_string_pretty(&env)?;
        text.push('\n');
        self.put(name, text.as_bytes())?;
        Ok(())
    }

    /// CSV with a header row, `.` decimals and LF line endings.
    pub fn csv<R, I>(&mut self, name: &str, header: &[&str], rows: I) -> anyhow::Result<()>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator,
        R::Item: AsRef<[u8]>,
    {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
        self.put(name, &bytes)?;
        Ok(())
    }

    pub fn text(&mut self, name: &str, text: &str) -> anyhow::Result<()> {
        self.put(name, text.as_bytes())?;
        Ok(())
    }

    pub fn finish(self, status: &str) -> anyhow::Result<PathBuf> {
        let manifest = Manifest {
            experiment: &self.experiment,
            scenario_sha256: &self.scenario_sha256,
            seed: self.seed,
            status,
            files: &self.files,
        };
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        let path = self.dir.join("manifest.json");
        atomic_write(&path, text.as_bytes())?;
        Ok(path)
    }
}

/// Shortest round-trip decimal form.
pub fn num(v: f64) -> String {
    v.to_string()
}
