use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use fuzznet::metrics::Conventions;
use serde::Serialize;
use serde_json::Value;

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> Result<PathBuf> {
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, &target).with_context(|| format!("moving {} into place", target.display()))?;
    Ok(target)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(dir, name, text.as_bytes())
}

pub fn prepare_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))
}

/// Record of one run, written next to its outputs.
#[derive(Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub inputs: Vec<String>,
    pub flags: Value,
    pub seed: Option<u64>,
    pub tool_version: &'static str,
    pub conventions: Conventions,
    pub outputs: Vec<String>,
    pub details: Value,
}

impl RunManifest {
    pub fn new(command: &'static str, flags: Value) -> Self {
        RunManifest {
            command,
            inputs: Vec::new(),
            flags,
            seed: None,
            tool_version: env!("CARGO_PKG_VERSION"),
            conventions: Conventions::default(),
            outputs: Vec::new(),
            details: Value::Null,
        }
    }

    pub fn record(&mut self, path: PathBuf) {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        self.outputs.push(name);
    }

    /// The manifest is written last, so its presence means every listed
    /// output exists.
    pub fn finish(mut self, dir: &Path) -> Result<()> {
        self.outputs.push("manifest.json".into());
        write_json(dir, "manifest.json", &self)?;
        Ok(())
    }
}
