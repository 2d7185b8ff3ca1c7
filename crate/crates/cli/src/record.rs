use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

/// Audit record written next to each command's payload files.
///
/// `timestamp` and `duration_secs` are the only fields that change between
/// replays of the same command, config and seed.
#[derive(Debug, Serialize)]
pub struct ExperimentRecord {
    pub command: String,
    pub config: Value,
    pub seed: u64,
    pub version: &'static str,
    pub timestamp: String,
    pub duration_secs: f64,
    pub payload: Value,
}

impl ExperimentRecord {
    pub fn new(command: &str, config: Value, seed: u64, payload: Value, elapsed: Duration) -> Self {
        Self {
            command: command.to_string(),
            config,
            seed,
            version: env!("CARGO_PKG_VERSION"),
            timestamp: chrono::Utc::now().to_rfc3339(),
            duration_secs: elapsed.as_secs_f64(),
            payload,
        }
    }
}

pub struct OutDir {
    dir: PathBuf,
}

impl OutDir {
    pub fn create(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
        })
    }

    pub fn write(&self, name: &str, contents: &str) -> std::io::Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, contents)?;
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> std::io::Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
        text.push('\n');
        self.write(name, &text)
    }
}
