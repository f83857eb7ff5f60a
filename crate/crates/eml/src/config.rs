//! Engine configuration: permission display names and adaptation step
//! sizes, loadable from one JSON file selected by a console flag. Every
//! field is optional and falls back to the built-in defaults.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

use crate::exec::PermissionTable;
use crate::sap::SapStepConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config I/O failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad config: {0}")]
    Parse(String),
}

/// The on-disk shape: `{"permissions": {...}, "sapSteps": {...}}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct EmuConfig {
    /// Extra permission tokens mapped to their report display names;
    /// merged over the built-in disk/process/network table.
    pub permissions: BTreeMap<String, String>,
    pub sap_steps: SapStepConfig,
}

impl EmuConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    /// The permission table this config describes: built-ins first, then
    /// any additional tokens in name order.
    pub fn permission_table(&self) -> PermissionTable {
        let standard = PermissionTable::standard();
        let extras = self
            .permissions
            .iter()
            .filter(|(token, _)| !standard.contains(token))
            .map(|(token, display)| (token.clone(), display.clone()));
        let overridden = standard.tokens().map(|token| {
            let display = self
                .permissions
                .get(token)
                .cloned()
                .unwrap_or_else(|| standard.display_name(token).unwrap().to_string());
            (token.to_string(), display)
        });
        PermissionTable::from_entries(overridden.collect::<Vec<_>>().into_iter().chain(extras))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_the_builtin_table() {
        let cfg = EmuConfig::default();
        let table = cfg.permission_table();
        assert_eq!(table.display_name("disk"), Some("Disk Access"));
        assert_eq!(table.display_name("process"), Some("Process Spawn"));
        assert_eq!(table.display_name("network"), Some("Network Access"));
        assert_eq!(cfg.sap_steps, SapStepConfig::default());
    }

    #[test]
    fn file_extends_and_overrides() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.json");
        std::fs::write(
            &path,
            r#"{
                "permissions": {"gpu": "GPU Access", "disk": "Disk I/O"},
                "sapSteps": {"bwStepMbps": 250}
            }"#,
        )
        .unwrap();
        let cfg = EmuConfig::load(&path).unwrap();
        let table = cfg.permission_table();
        assert_eq!(table.display_name("gpu"), Some("GPU Access"));
        assert_eq!(table.display_name("disk"), Some("Disk I/O"));
        assert_eq!(table.display_name("network"), Some("Network Access"));
        assert_eq!(cfg.sap_steps.bw_step_mbps, 250);
        assert_eq!(cfg.sap_steps.disk_step_mb, 256);
    }

    #[test]
    fn junk_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.json");
        std::fs::write(&path, "not json").unwrap();
        assert!(matches!(EmuConfig::load(&path), Err(ConfigError::Parse(_))));
        assert!(matches!(
            EmuConfig::load(&dir.path().join("missing.json")),
            Err(ConfigError::Io(_))
        ));
    }
}
