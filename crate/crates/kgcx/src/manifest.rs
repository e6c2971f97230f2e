use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use kgcx_core::seeding::file_sha256;
use kgcx_core::{Error, Result};
use serde::Serialize;
use serde_json::Value;

/// `run_manifest.json`: resolved configuration, input digests and outputs of one run.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool_version: &'static str,
    pub subcommand: &'static str,
    pub config: Value,
    pub threads: usize,
    /// sha256 per input file.
    pub inputs: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub started_unix: u64,
    pub finished_unix: u64,
}

pub fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl Manifest {
    pub fn new(subcommand: &'static str, config: Value) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            subcommand,
            config,
            threads: rayon::current_num_threads(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
            started_unix: unix_now(),
            finished_unix: 0,
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<String> {
        let digest = file_sha256(path)?;
        self.inputs.insert(path.display().to_string(), digest.clone());
        Ok(digest)
    }

    pub fn add_output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    pub fn write(mut self, dir: &Path) -> Result<PathBuf> {
        self.finished_unix = unix_now();
        let path = dir.join("run_manifest.json");
        let body = serde_json::to_string_pretty(&self)? + "\n";
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}
