use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const MANIFEST_FILE: &str = "manifest.jsonl";

/// One line of `manifest.jsonl`.
#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub spec_digest: String,
    pub seed: Option<u64>,
    pub parameters: serde_json::Value,
    pub outputs: Vec<String>,
    pub tool_version: String,
    pub started_unix: u64,
    pub wall_time_secs: f64,
}

/// Hex SHA-256 of the canonical code description.
pub fn digest(canonical_spec: &str) -> String {
    format!("{:x}", Sha256::digest(canonical_spec.as_bytes()))
}

pub struct Run {
    started: SystemTime,
    clock: Instant,
}

impl Run {
    pub fn start() -> Self {
        Self {
            started: SystemTime::now(),
            clock: Instant::now(),
        }
    }

    /// Appends the manifest of this run to `dir/manifest.jsonl`.
    pub fn finish<P: Serialize>(
        self,
        dir: &Path,
        command: &str,
        spec_digest: String,
        seed: Option<u64>,
        parameters: &P,
        outputs: Vec<String>,
    ) -> std::io::Result<()> {
        let m = RunManifest {
            command: command.to_string(),
            spec_digest,
            seed,
            parameters: serde_json::to_value(parameters).expect("arguments serialize"),
            outputs,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: self
                .started
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            wall_time_secs: self.clock.elapsed().as_secs_f64(),
        };
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(dir.join(MANIFEST_FILE))?;
        let line = serde_json::to_string(&m).expect("manifest serializes");
        writeln!(f, "{line}")
    }
}
