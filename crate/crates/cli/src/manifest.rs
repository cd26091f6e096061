//! Per-run manifest: effective config, artifact version, wall time, output
//! digests, and the validation summary.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Debug, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Default, Serialize)]
pub struct ValidationSummary {
    pub max_trace_err: Option<f64>,
    pub min_eig: Option<f64>,
    pub invariant_drift: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub config: serde_json::Value,
    pub version: String,
    pub wall_ms: u128,
    pub files: Vec<FileDigest>,
    pub validation: ValidationSummary,
}

impl RunManifest {
    pub fn new(config: serde_json::Value, wall_ms: u128) -> Self {
        RunManifest {
            config,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_ms,
            files: Vec::new(),
            validation: ValidationSummary::default(),
        }
    }

    pub fn add_file(&mut self, path: &Path) -> std::io::Result<()> {
        let bytes = std::fs::read(path)?;
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.files.push(FileDigest {
            path: path.display().to_string(),
            sha256: hex,
        });
        Ok(())
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let json = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, json)
    }
}
