//! On-disk state: one JSON document holding the registry, host table,
//! allocator position, simulated nodes, client counters, and the report
//! clock. The same schema serves as the bootstrap world file and as the
//! snapshot a server saves on shutdown.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::registry::ServiceRecord;
use crate::sap::NodeResources;

/// Current schema version; bumped on incompatible changes.
pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("snapshot I/O failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt snapshot: {0}")]
    Corrupt(String),
}

/// The complete persisted state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WorldSnapshot {
    pub version: u32,
    /// Next service ID the allocator will hand out; must exceed every
    /// live service ID.
    pub next_id: i64,
    #[serde(default)]
    pub host_table: BTreeMap<String, String>,
    #[serde(default)]
    pub services: Vec<ServiceRecord>,
    #[serde(default)]
    pub nodes: Vec<NodeResources>,
    /// Live client counters per service ID.
    #[serde(default)]
    pub connections: BTreeMap<i64, u32>,
    /// Frozen report clock; absent means the epoch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clock: Option<NaiveDateTime>,
}

impl WorldSnapshot {
    /// An empty world: no nodes, no services, allocator at 1.
    pub fn empty() -> Self {
        WorldSnapshot {
            version: SNAPSHOT_VERSION,
            next_id: 1,
            host_table: BTreeMap::new(),
            services: Vec::new(),
            nodes: Vec::new(),
            connections: BTreeMap::new(),
            clock: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("snapshot is serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, SnapshotError> {
        serde_json::from_str(text).map_err(|e| SnapshotError::Corrupt(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<(), SnapshotError> {
        let mut text = self.to_json();
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, SnapshotError> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}
