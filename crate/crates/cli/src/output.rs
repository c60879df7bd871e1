//! Atomic file output and run manifests.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use qtl_core::{CoeffGrid, GridTag};
use serde::Serialize;
use serde_json::Value;

/// Writes `bytes` to a temporary file beside `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("cannot move output into {}", path.display()))?;
    Ok(())
}

pub fn grid_bytes(grid: &CoeffGrid, tag: GridTag) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    grid.write_json(tag, &mut buf)?;
    buf.push(b'\n');
    Ok(buf)
}

/// Builds CSV text; every float is written with 17 significant digits.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self { text: format!("{}\n", header.join(",")) }
    }

    pub fn row(&mut self, fields: &[Field]) {
        let cells: Vec<String> = fields.iter().map(Field::render).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

pub enum Field {
    Int(u64),
    Real(f64),
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Real(v) => format!("{v:.16e}"),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub output: PathBuf,
    pub inputs: Vec<PathBuf>,
    pub params: Value,
    pub version: &'static str,
    pub started_unix_secs: u64,
    pub duration_secs: f64,
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}

/// Collects what a run read and how it was configured, then writes one
/// sidecar per output file.
pub struct Run {
    command: String,
    inputs: Vec<PathBuf>,
    params: Value,
    started: SystemTime,
}

impl Run {
    pub fn new(command: &str, inputs: Vec<PathBuf>, params: Value) -> Self {
        Self { command: command.to_owned(), inputs, params, started: SystemTime::now() }
    }

    /// Writes `bytes` to `path` and its manifest beside it, both atomically.
    pub fn emit(&self, path: &Path, bytes: &[u8]) -> Result<()> {
        write_atomic(path, bytes)?;
        let manifest = RunManifest {
            command: self.command.clone(),
            output: path.to_owned(),
            inputs: self.inputs.clone(),
            params: self.params.clone(),
            version: env!("CARGO_PKG_VERSION"),
            started_unix_secs: self
                .started
                .duration_since(UNIX_EPOCH)
                .unwrap_or(Duration::ZERO)
                .as_secs(),
            duration_secs: self.started.elapsed().unwrap_or(Duration::ZERO).as_secs_f64(),
        };
        let mut text = serde_json::to_vec_pretty(&manifest)?;
        text.push(b'\n');
        write_atomic(&manifest_path(path), &text)
    }
}
