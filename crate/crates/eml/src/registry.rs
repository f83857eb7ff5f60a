//! The discovery registry: service records, monotonic ID allocation, and
//! hostname→IP resolution for bound URLs.
//!
//! Mutation happens only at the executor's serialization point; reads are
//! safe anywhere in between.

use std::collections::BTreeMap;
use std::net::Ipv4Addr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One registered service.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ServiceRecord {
    pub id: i64,
    pub ip: String,
    pub url: String,
    /// `None` after the WSDL has been deleted; the record itself persists.
    pub wsdl: Option<String>,
    pub enabled: bool,
    pub is_replica: bool,
    /// Granted permission tokens in grant order, no duplicates.
    #[serde(default)]
    pub permissions: Vec<String>,
    /// The node (IPv4) this service runs on.
    pub host_node: String,
}

impl ServiceRecord {
    pub fn grant_permission(&mut self, token: &str) -> bool {
        if self.permissions.iter().any(|t| t == token) {
            false
        } else {
            self.permissions.push(token.to_string());
            true
        }
    }

    pub fn revoke_permission(&mut self, token: &str) -> bool {
        let before = self.permissions.len();
        self.permissions.retain(|t| t != token);
        self.permissions.len() != before
    }
}

/// Hands out service IDs. Strictly monotonic; never reissues an ID within
/// one registry lifetime, even after unbind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdAllocator {
    next_id: i64,
}

impl IdAllocator {
    pub fn seeded(next_id: i64) -> Self {
        IdAllocator {
            next_id: next_id.max(1),
        }
    }

    pub fn peek(&self) -> i64 {
        self.next_id
    }

    pub fn allocate(&mut self) -> i64 {
        let id = self.next_id;
        self.next_id += 1;
        id
    }
}

impl Default for IdAllocator {
    fn default() -> Self {
        IdAllocator::seeded(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("service {0} not found")]
    NotFound(i64),
    #[error("service {0} already registered")]
    DuplicateId(i64),
    #[error("unknown host `{0}`")]
    UnknownHost(String),
}

/// The registry database: live records, the ID allocator, and the host
/// table used to derive a service IP from its URL.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Registry {
    records: BTreeMap<i64, ServiceRecord>,
    allocator: IdAllocator,
    hosts: BTreeMap<String, String>,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    /// A registry whose next allocated ID is `next_id`.
    pub fn with_seed(next_id: i64) -> Self {
        Registry {
            allocator: IdAllocator::seeded(next_id),
            ..Registry::default()
        }
    }

    pub fn allocate_id(&mut self) -> i64 {
        self.allocator.allocate()
    }

    pub fn next_id(&self) -> i64 {
        self.allocator.peek()
    }

    /// Reseed the allocator (console `--seed-id`). The seed must stay above
    /// every live ID to preserve never-reissue, so it is clamped.
    pub fn reseed(&mut self, next_id: i64) {
        let floor = self.records.keys().next_back().map_or(1, |max| max + 1);
        self.allocator = IdAllocator::seeded(next_id.max(floor));
    }

    pub fn add_host(&mut self, hostname: impl Into<String>, ip: impl Into<String>) {
        self.hosts.insert(hostname.into(), ip.into());
    }

    pub fn hosts(&self) -> &BTreeMap<String, String> {
        &self.hosts
    }

    pub fn set_hosts(&mut self, hosts: BTreeMap<String, String>) {
        self.hosts = hosts;
    }

    /// Derive the service IP for a URL: the host part (up to the first
    /// `/`) is looked up in the host table; a literal IPv4 host resolves
    /// to itself.
    pub fn resolve_ip(&self, url: &str) -> Result<String, RegistryError> {
        let host = url.split('/').next().unwrap_or(url);
        if let Some(ip) = self.hosts.get(host) {
            return Ok(ip.clone());
        }
        if host.parse::<Ipv4Addr>().is_ok() {
            return Ok(host.to_string());
        }
        Err(RegistryError::UnknownHost(host.to_string()))
    }

    /// Register a new record. The spelled-out failure is inserting a record
    /// whose ID is already live.
    pub fn insert(&mut self, record: ServiceRecord) -> Result<(), RegistryError> {
        if self.records.contains_key(&record.id) {
            return Err(RegistryError::DuplicateId(record.id));
        }
        self.records.insert(record.id, record);
        Ok(())
    }

    pub fn get(&self, id: i64) -> Result<&ServiceRecord, RegistryError> {
        self.records.get(&id).ok_or(RegistryError::NotFound(id))
    }

    pub fn get_mut(&mut self, id: i64) -> Result<&mut ServiceRecord, RegistryError> {
        self.records.get_mut(&id).ok_or(RegistryError::NotFound(id))
    }

    pub fn remove(&mut self, id: i64) -> Result<ServiceRecord, RegistryError> {
        self.records.remove(&id).ok_or(RegistryError::NotFound(id))
    }

    pub fn contains(&self, id: i64) -> bool {
        self.records.contains_key(&id)
    }

    pub fn find_by_url(&self, url: &str) -> Option<&ServiceRecord> {
        self.records.values().find(|r| r.url == url)
    }

    pub fn records(&self) -> impl Iterator<Item = &ServiceRecord> {
        self.records.values()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}
