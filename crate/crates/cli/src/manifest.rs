use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

/// Provenance record written next to a command's outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command_line: Vec<String>,
    pub config: serde_json::Value,
    pub master_seed: Option<u64>,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<OutputDigest>,
}

pub fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl RunManifest {
    pub fn new(config: serde_json::Value, master_seed: Option<u64>, started: String) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command_line: std::env::args().collect(),
            config,
            master_seed,
            started,
            finished: String::new(),
            outputs: Vec::new(),
        }
    }

    /// Hash every output and write `<verb>.manifest.json` into `dir`.
    pub fn write(mut self, dir: &Path, verb: &str, outputs: &[PathBuf]) -> Result<PathBuf, CliError> {
        for p in outputs {
            self.outputs.push(OutputDigest { path: p.display().to_string(), sha256: sha256_file(p)? });
        }
        self.finished = now();
        let path = dir.join(format!("{verb}.manifest.json"));
        let text = serde_json::to_string_pretty(&self).map_err(|e| CliError::Data(e.to_string()))?;
        fs::write(&path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}
