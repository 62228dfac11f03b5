use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// JSON document written by every solving subcommand.
///
/// Everything except `timings_ms` is a function of the input file and the
/// flags when `--threads 1` is used.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance_sha256: Option<String>,
    pub diagnostics: serde_json::Value,
    pub result: serde_json::Value,
    pub certificates: BTreeMap<String, bool>,
    pub ok: bool,
    pub timings_ms: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn new(command: Vec<String>, instance_sha256: Option<String>) -> Self {
        Self {
            command,
            instance_sha256,
            diagnostics: serde_json::Value::Null,
            result: serde_json::Value::Null,
            certificates: BTreeMap::new(),
            ok: true,
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn certify(&mut self, name: &str, holds: bool) {
        if !holds {
            log::warn!("certificate {name} failed");
        }
        self.certificates.insert(name.to_string(), holds);
        self.ok = self.certificates.values().all(|&b| b);
    }

    /// Runs `f` and records its wall-clock time under `stage`.
    pub fn timed<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings_ms
            .insert(stage.to_string(), start.elapsed().as_secs_f64() * 1e3);
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
