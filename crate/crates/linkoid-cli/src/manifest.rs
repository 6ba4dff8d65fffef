//! Run manifests: every command that writes outputs records what it read,
//! what it wrote, and how it was configured, so deterministic runs can be
//! reproduced byte for byte.

use serde_json::json;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::time::Instant;

pub struct RunManifest {
    command: Vec<String>,
    subcommand: &'static str,
    inputs: Vec<(PathBuf, String)>,
    outputs: Vec<PathBuf>,
    config: serde_json::Value,
    started: Instant,
}

impl RunManifest {
    pub fn new(subcommand: &'static str) -> Self {
        RunManifest {
            command: std::env::args().collect(),
            subcommand,
            inputs: Vec::new(),
            outputs: Vec::new(),
            config: serde_json::Value::Null,
            started: Instant::now(),
        }
    }

    pub fn set_config(&mut self, config: serde_json::Value) {
        self.config = config;
    }

    pub fn record_input(&mut self, path: &Path) {
        let digest = match std::fs::read(path) {
            Ok(bytes) => format!("sha256:{:x}", Sha256::digest(&bytes)),
            Err(_) => "unreadable".to_string(),
        };
        self.inputs.push((path.to_path_buf(), digest));
    }

    pub fn record_output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    /// Write the manifest alongside the primary output file.
    pub fn finish(&self, primary_output: &Path) -> Result<(), super::Failure> {
        let manifest_path = manifest_path_for(primary_output);
        let outputs: Vec<serde_json::Value> = self
            .outputs
            .iter()
            .map(|p| {
                let digest = match std::fs::read(p) {
                    Ok(bytes) => format!("sha256:{:x}", Sha256::digest(&bytes)),
                    Err(_) => "unreadable".to_string(),
                };
                json!({"path": p.display().to_string(), "digest": digest})
            })
            .collect();
        let value = json!({
            "tool": "linkoid",
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": self.subcommand,
            "command": self.command,
            "inputs": self.inputs.iter().map(|(p, d)| json!({
                "path": p.display().to_string(), "digest": d,
            })).collect::<Vec<_>>(),
            "config": self.config,
            "wall_time_seconds": self.started.elapsed().as_secs_f64(),
            "outputs": outputs,
        });
        std::fs::write(
            &manifest_path,
            serde_json::to_string_pretty(&value).unwrap(),
        )
        .map_err(|e| super::Failure::input(format!("cannot write manifest: {e}")))
    }
}

pub fn manifest_path_for(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}
