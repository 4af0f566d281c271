use std::io::Write;
use std::path::{Path, PathBuf};

use fkdv_core::experiments::format_f64;
use serde::Serialize;
use tempfile::NamedTempFile;

use crate::config::Config;
use crate::error::CliError;

pub const VERSION: &str = env!("FKDV_VERSION");

/// Files produced by one command. Nothing touches the output directory
/// until [`Outputs::commit`], and each file appears by an atomic rename.
pub struct Outputs {
    dir: PathBuf,
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into(), files: Vec::new() }
    }

    pub fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    pub fn names(&self) -> Vec<String> {
        self.files.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn commit(self) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        let mut written = Vec::with_capacity(self.files.len());
        for (name, bytes) in self.files {
            let target = self.dir.join(&name);
            write_atomic(&target, &bytes)?;
            written.push(target);
        }
        Ok(written)
    }
}

pub fn write_atomic(target: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = target.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(target).map_err(|e| CliError::io(target, e.error))?;
    Ok(())
}

/// CSV with a header row; numbers at full precision.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.into_iter().map(format_f64)).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

#[derive(Serialize)]
pub struct Manifest<'a, S: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    /// Fully resolved configuration; `fkdv <command> --config manifest.json` reruns it.
    pub config: &'a Config,
    pub outputs: Vec<String>,
    pub summary: S,
}

impl<'a, S: Serialize> Manifest<'a, S> {
    pub fn new(command: &'static str, config: &'a Config, outputs: Vec<String>, summary: S) -> Self {
        Self { tool: "fkdv", version: VERSION, command, config, outputs, summary }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("manifest serializes");
        out.push(b'\n');
        out
    }
}
