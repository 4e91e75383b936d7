use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Everything needed to re-run a command: its argument vector plus the resolved
/// parameters, inputs and outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Arguments after the program name.
    pub command: Vec<String>,
    pub subcommand: String,
    /// Rationals are normalised to `"num/den"`.
    pub params: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub version: String,
    pub hypothesis: Option<Value>,
    pub exit_code: u8,
    pub wall_clock_ms: u64,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Collects manifest fields while a command runs.
pub struct Recorder {
    pub manifest: RunManifest,
    start: Instant,
}

impl Recorder {
    pub fn new(argv: &[String], subcommand: &str) -> Self {
        Recorder {
            manifest: RunManifest {
                command: argv.to_vec(),
                subcommand: subcommand.to_string(),
                params: BTreeMap::new(),
                seed: None,
                inputs: Vec::new(),
                outputs: Vec::new(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                hypothesis: None,
                exit_code: 0,
                wall_clock_ms: 0,
            },
            start: Instant::now(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.manifest.params.insert(key.to_string(), value.to_string());
    }

    pub fn input(&mut self, p: &Path) {
        self.manifest.inputs.push(p.display().to_string());
    }

    /// Writes `bytes` to `out` atomically and records it.
    pub fn output(&mut self, out: &Path, bytes: &[u8]) -> Result<()> {
        write_atomic(out, bytes)?;
        self.manifest.outputs.push(out.display().to_string());
        Ok(())
    }

    pub fn finish(mut self, out: &Path, exit_code: u8) -> Result<()> {
        self.manifest.exit_code = exit_code;
        self.manifest.wall_clock_ms = self.start.elapsed().as_millis() as u64;
        let text = hcl_core::io::to_pretty(&serde_json::to_value(&self.manifest)?);
        write_atomic(&manifest_path(out), text.as_bytes())
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}
