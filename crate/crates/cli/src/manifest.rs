//! Run manifests: the resolved configuration of a command, written next to
//! its outputs so the run can be repeated exactly.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub outputs: Vec<PathBuf>,
    pub version: String,
    #[serde(default)]
    pub seeds: BTreeMap<String, u64>,
}

impl RunManifest {
    pub fn new(command: &str, config: &impl Serialize) -> Self {
        Self {
            command: command.to_string(),
            config: serde_json::to_value(config).expect("configs serialise"),
            outputs: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seeds: BTreeMap::new(),
        }
    }

    pub fn with_output(mut self, path: &Path) -> Self {
        self.outputs.push(path.to_path_buf());
        self
    }

    pub fn with_seed(mut self, name: &str, seed: u64) -> Self {
        self.seeds.insert(name.to_string(), seed);
        self
    }

    /// `out/scan.csv` → `out/scan.manifest.json`.
    pub fn path_for(output: &Path) -> PathBuf {
        output.with_extension("manifest.json")
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serialises");
        write_file(path, &(text + "\n"))
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = read_file(path)?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(de).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

pub(crate) fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_path_replaces_extension() {
        assert_eq!(RunManifest::path_for(Path::new("out/scan.csv")), PathBuf::from("out/scan.manifest.json"));
        assert_eq!(RunManifest::path_for(Path::new("report")), PathBuf::from("report.manifest.json"));
    }

    #[test]
    fn json_round_trip() {
        let m = RunManifest::new("verify", &serde_json::json!({"trials": 3}))
            .with_output(Path::new("a.json"))
            .with_seed("verify", 9);
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<RunManifest>(&text).unwrap(), m);
    }
}
