//! Run manifests: written before any computation so every output file is
//! attributable to exactly one resolved config and code version.

use crate::config::Config;
use serde::Serialize;
use std::path::Path;
use swcp_core::rng::fnv1a;
use swcp_core::{Error, Result};

pub const SEED_RULE: &str =
    "replicate stream = splitmix-mix chain over (master_seed, fnv1a(estimator name), replicate index); \
     trial = mix chain over (stream, time, site key, particle, channel)";

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config_hash: String,
    pub code_version: String,
    /// Unix seconds; honors SOURCE_DATE_EPOCH for byte-reproducible runs.
    pub timestamp: u64,
    pub seed_rule: String,
    pub config: String,
    pub outputs: Vec<String>,
}

fn timestamp() -> u64 {
    if let Ok(epoch) = std::env::var("SOURCE_DATE_EPOCH") {
        if let Ok(t) = epoch.parse() {
            return t;
        }
    }
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl RunManifest {
    pub fn new(command: &str, config: &Config, outputs: &[&str]) -> Self {
        let text = config.canonical_text();
        RunManifest {
            command: command.to_string(),
            config_hash: format!("{:016x}", fnv1a(text.as_bytes())),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp(),
            seed_rule: SEED_RULE.to_string(),
            config: text,
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Serialize to `manifest.json` in `out_dir`. Call before computing.
    pub fn write(&self, out_dir: &Path) -> Result<()> {
        let path = out_dir.join("manifest.json");
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Parse(format!("manifest serialization: {e}")))?;
        std::fs::write(&path, json + "\n")
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
    }
}
