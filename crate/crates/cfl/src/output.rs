//! Output files and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

pub const CONFIG_FILE: &str = "config.toml";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Shortest text that parses back to the same `f64`, with an exponent only
/// for very small or very large magnitudes.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputRecord {
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub status: &'a str,
    pub config: &'a str,
    pub outputs: &'a [OutputRecord],
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// A directory that records the digest of every file written to it.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    records: Vec<OutputRecord>,
}

impl OutputDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(Self { root: root.to_path_buf(), records: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn records(&self) -> &[OutputRecord] {
        &self.records
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> CliResult<PathBuf> {
        let path = self.root.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.records.push(OutputRecord { file: name.to_string(), bytes: bytes.len(), sha256: sha256_hex(bytes) });
        Ok(path)
    }

    /// Header row, one record per row, `\n` line endings.
    pub fn write_csv<R, S>(&mut self, name: &str, header: &[S], rows: impl IntoIterator<Item = R>) -> CliResult<PathBuf>
    where
        R: IntoIterator,
        R::Item: AsRef<[u8]>,
        S: AsRef<[u8]>,
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::invalid(format!("csv buffer: {e}")))?;
        self.write_bytes(name, &bytes)
    }

    /// Pretty JSON in field declaration order, newline-terminated.
    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> CliResult<PathBuf> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.write_bytes(name, &bytes)
    }

    /// Writes the config and the manifest listing every file written so far.
    pub fn finish(mut self, config: &ExperimentConfig, status: &str) -> CliResult<Vec<OutputRecord>> {
        let toml = config.to_toml()?;
        self.write_bytes(CONFIG_FILE, toml.as_bytes())?;
        let command = serde_json::to_value(config.command)?;
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.as_str().unwrap_or_default(),
            status,
            config: &toml,
            outputs: &self.records,
        };
        let mut bytes = serde_json::to_vec_pretty(&manifest)?;
        bytes.push(b'\n');
        let path = self.root.join(MANIFEST_FILE);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        Ok(self.records)
    }
}
