//! The management unit's executor: validates each parsed command against
//! registry and simulator state, applies it, and produces exactly one
//! acknowledgment.
//!
//! Commands are applied in a total order at this single serialization
//! point. A failed acknowledgment always leaves the whole state
//! bit-identical; validation happens before any mutation (including ID
//! allocation, so failed binds burn no IDs).

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::registry::{Registry, ServiceRecord};
use crate::report::{build_report, serialize_report, ReportMode};
use crate::sap::{self, SapStepConfig};
use crate::sim::{self, SimError, SimWorld};
use crate::snapshot::{SnapshotError, WorldSnapshot, SNAPSHOT_VERSION};
use crate::syntax::{Ack, Command, PermAction, SapCall};

/// Permission tokens and their report display names. The token set is
/// closed for the lifetime of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermissionTable {
    entries: Vec<(String, String)>,
}

impl PermissionTable {
    /// The built-in table: disk, process, network.
    pub fn standard() -> Self {
        PermissionTable {
            entries: vec![
                ("disk".into(), "Disk Access".into()),
                ("process".into(), "Process Spawn".into()),
                ("network".into(), "Network Access".into()),
            ],
        }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (String, String)>) -> Self {
        PermissionTable {
            entries: entries.into_iter().collect(),
        }
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.iter().any(|(t, _)| t == token)
    }

    pub fn display_name(&self, token: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(t, _)| t == token)
            .map(|(_, d)| d.as_str())
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(t, _)| t.as_str())
    }
}

impl Default for PermissionTable {
    fn default() -> Self {
        PermissionTable::standard()
    }
}

/// Result of dispatching one command.
#[derive(Debug, Clone, PartialEq)]
pub struct ExecOutcome {
    pub ack: Ack,
    /// Whether any registry or simulator state actually changed. Always
    /// false when `ack.success()` is false.
    pub state_changed: bool,
}

/// The Ecosystem Management Unit: registry, simulated world, permission
/// table, and adaptation step configuration, driven one command at a time.
#[derive(Debug, Clone, PartialEq)]
pub struct Emu {
    pub registry: Registry,
    pub world: SimWorld,
    pub permissions: PermissionTable,
    pub sap_steps: SapStepConfig,
}

impl Emu {
    pub fn new(registry: Registry, world: SimWorld) -> Self {
        Emu {
            registry,
            world,
            permissions: PermissionTable::standard(),
            sap_steps: SapStepConfig::default(),
        }
    }

    /// Route one command to its executor. Every command produces exactly
    /// one acknowledgment.
    pub fn dispatch(&mut self, cmd: &Command) -> ExecOutcome {
        let (ack, state_changed) = match cmd {
            Command::Bind { url, wsdl } => self.exec_bind(url, wsdl),
            Command::Unbind { id } => self.exec_unbind(*id),
            Command::Update { id, wsdl } => self.exec_update(*id, wsdl),
            Command::Delete { id } => self.exec_delete(*id),
            Command::Enable { id, enabled } => self.exec_enable(*id, *enabled),
            Command::GetClients { id } => self.exec_get_clients(*id),
            Command::Grant { id, perms } => self.exec_grant(*id, perms),
            Command::CreateReplica { id, replica_ip } => self.exec_create_replica(*id, replica_ip),
            Command::GetInfo { id } => self.exec_get_info(*id),
            Command::ExecuteSap { id, call } => self.exec_execute_sap(*id, call),
        };
        debug_assert!(ack.success() || !state_changed);
        ExecOutcome { ack, state_changed }
    }

    fn exec_bind(&mut self, url: &str, wsdl: &str) -> (Ack, bool) {
        // Validate everything before allocating, so a failed bind burns
        // no ID and changes nothing.
        let ip = match self.registry.resolve_ip(url) {
            Ok(ip) if self.world.has_node(&ip) => ip,
            _ => return (Ack::Bind { id: -1, ok: false }, false),
        };
        if self.registry.find_by_url(url).is_some() {
            return (Ack::Bind { id: -1, ok: false }, false);
        }
        let id = self.registry.allocate_id();
        self.registry
            .insert(ServiceRecord {
                id,
                ip: ip.clone(),
                url: url.to_string(),
                wsdl: Some(wsdl.to_string()),
                enabled: false,
                is_replica: false,
                permissions: Vec::new(),
                host_node: ip,
            })
            .expect("freshly allocated id cannot collide");
        (Ack::Bind { id, ok: true }, true)
    }

    fn exec_unbind(&mut self, id: i64) -> (Ack, bool) {
        match self.registry.remove(id) {
            Ok(_) => {
                self.world.forget_service(id);
                (Ack::Unbind { id, ok: true }, true)
            }
            Err(_) => (Ack::Unbind { id, ok: false }, false),
        }
    }

    fn exec_update(&mut self, id: i64, wsdl: &str) -> (Ack, bool) {
        match self.registry.get_mut(id) {
            Ok(record) => {
                let changed = record.wsdl.as_deref() != Some(wsdl);
                record.wsdl = Some(wsdl.to_string());
                (Ack::Update { id, ok: true }, changed)
            }
            Err(_) => (Ack::Update { id, ok: false }, false),
        }
    }

    fn exec_delete(&mut self, id: i64) -> (Ack, bool) {
        match self.registry.get_mut(id) {
            Ok(record) if record.wsdl.is_some() => {
                record.wsdl = None;
                (Ack::Delete { id, ok: true }, true)
            }
            // Unknown service, or its WSDL is already gone.
            _ => (Ack::Delete { id, ok: false }, false),
        }
    }

    fn exec_enable(&mut self, id: i64, enabled: bool) -> (Ack, bool) {
        match self.registry.get_mut(id) {
            Ok(record) => {
                let changed = record.enabled != enabled;
                record.enabled = enabled;
                (Ack::Enable { id, ok: true }, changed)
            }
            Err(_) => (Ack::Enable { id, ok: false }, false),
        }
    }

    fn exec_get_clients(&mut self, id: i64) -> (Ack, bool) {
        if self.registry.contains(id) {
            let count = self.world.client_count(id) as i64;
            (Ack::GetClients { id, count, ok: true }, false)
        } else {
            (Ack::GetClients { id, count: -1, ok: false }, false)
        }
    }

    fn exec_grant(&mut self, id: i64, perms: &[(String, PermAction)]) -> (Ack, bool) {
        let mut changed = false;
        let results = match self.registry.get_mut(id) {
            // Unknown service: every pair fails, nothing is processed.
            Err(_) => perms.iter().map(|(t, _)| (t.clone(), false)).collect(),
            Ok(record) => {
                let before = record.permissions.clone();
                let results = perms
                    .iter()
                    .map(|(token, action)| {
                        if !self.permissions.contains(token) {
                            return (token.clone(), false);
                        }
                        // Grants and revocations are target states: setting
                        // a permission the service already has (or denying
                        // one it never had) still succeeds.
                        match action {
                            PermAction::Allow => record.grant_permission(token),
                            PermAction::Deny => record.revoke_permission(token),
                        };
                        (token.clone(), true)
                    })
                    .collect();
                // Net effect over the whole list; allow-then-deny of the
                // same token lands back where it started.
                changed = before != record.permissions;
                results
            }
        };
        (Ack::Grant { id, results }, changed)
    }

    fn exec_create_replica(&mut self, id: i64, replica_ip: &str) -> (Ack, bool) {
        let fail = (Ack::CreateReplica { id, replica_id: -1, ok: false }, false);
        let source = match self.registry.get(id) {
            Ok(record) => record.clone(),
            Err(_) => return fail,
        };
        if source.wsdl.is_none() || !self.world.has_node(replica_ip) {
            return fail;
        }
        let replica_id = self.registry.allocate_id();
        self.registry
            .insert(ServiceRecord {
                id: replica_id,
                ip: replica_ip.to_string(),
                url: replace_url_host(&source.url, replica_ip),
                wsdl: source.wsdl.clone(),
                enabled: source.enabled,
                is_replica: true,
                permissions: source.permissions.clone(),
                host_node: replica_ip.to_string(),
            })
            .expect("freshly allocated id cannot collide");
        (Ack::CreateReplica { id, replica_id, ok: true }, true)
    }

    fn exec_get_info(&mut self, id: i64) -> (Ack, bool) {
        match self.registry.get(id) {
            Ok(record) => {
                let report = build_report(record, &self.permissions, self.world.clock());
                let xml = serialize_report(&report, ReportMode::SingleLine);
                (Ack::GetInfo { id, report: Some(xml), ok: true }, false)
            }
            Err(_) => (Ack::GetInfo { id, report: None, ok: false }, false),
        }
    }

    fn exec_execute_sap(&mut self, id: i64, call: &SapCall) -> (Ack, bool) {
        let fail = (Ack::ExecuteSap { id, ok: false }, false);
        let host = match self.registry.get(id) {
            Ok(record) => record.host_node.clone(),
            Err(_) => return fail,
        };
        let proc = match sap::lookup_sap(&call.name) {
            Ok(proc) => proc,
            Err(_) => return fail,
        };
        let node = self
            .world
            .node(&host)
            .expect("registered services always reference a live node");
        match sap::apply_sap(proc, node, id, &self.sap_steps) {
            Ok(next) => {
                let changed = *node != next;
                *self.world.node_mut(&host).unwrap() = next;
                (Ack::ExecuteSap { id, ok: true }, changed)
            }
            Err(_) => fail,
        }
    }

    /// Inject one simulated client connection (not an EML command).
    pub fn connect_client(&mut self, service_id: i64) -> Result<(), SimError> {
        sim::connect_client(&mut self.world, &self.registry, service_id)
    }

    /// Inject one simulated client departure (not an EML command).
    pub fn disconnect_client(&mut self, service_id: i64) -> Result<(), SimError> {
        sim::disconnect_client(&mut self.world, &self.registry, service_id)
    }

    /// Cross-structure invariants, checked by replay tests after every
    /// step: records reference live nodes, counters belong to live
    /// services, IDs stay below the allocator, resources stay in bounds.
    pub fn check_integrity(&self) -> Result<(), String> {
        for record in self.registry.records() {
            if !self.world.has_node(&record.host_node) {
                return Err(format!(
                    "service {} references missing node {}",
                    record.id, record.host_node
                ));
            }
            if record.id >= self.registry.next_id() {
                return Err(format!("service {} at or above the allocator", record.id));
            }
            for token in &record.permissions {
                if !self.permissions.contains(token) {
                    return Err(format!("service {} holds unknown permission {token}", record.id));
                }
            }
        }
        for (&service_id, _) in self.world.connections() {
            if !self.registry.contains(service_id) {
                return Err(format!("connection counter for unknown service {service_id}"));
            }
        }
        for node in self.world.nodes() {
            node.check_bounds(self.sap_steps.clock_ceiling)?;
        }
        Ok(())
    }

    /// Capture the complete state in the snapshot schema.
    pub fn to_snapshot(&self) -> WorldSnapshot {
        WorldSnapshot {
            version: SNAPSHOT_VERSION,
            next_id: self.registry.next_id(),
            host_table: self.registry.hosts().clone(),
            services: self.registry.records().cloned().collect(),
            nodes: self.world.nodes().cloned().collect(),
            connections: self.world.connections().clone(),
            clock: Some(self.world.clock()),
        }
    }

    /// Rebuild an EMU from a snapshot (or bootstrap world file), verifying
    /// the structural invariants the executor relies on.
    pub fn from_snapshot(
        snapshot: WorldSnapshot,
        permissions: PermissionTable,
        sap_steps: SapStepConfig,
    ) -> Result<Emu, SnapshotError> {
        let corrupt = |reason: String| SnapshotError::Corrupt(reason);

        if snapshot.version != SNAPSHOT_VERSION {
            return Err(corrupt(format!(
                "unsupported snapshot version {}",
                snapshot.version
            )));
        }

        let mut world = SimWorld::new();
        for node in snapshot.nodes {
            world
                .add_node(node)
                .map_err(|e| corrupt(format!("duplicate node: {e}")))?;
        }
        if let Some(clock) = snapshot.clock {
            world.set_clock(clock);
        }

        let mut registry = Registry::with_seed(snapshot.next_id);
        registry.set_hosts(snapshot.host_table);
        for record in snapshot.services {
            for text in [&record.url, &record.ip, &record.host_node]
                .into_iter()
                .chain(record.wsdl.iter())
            {
                if text.contains('\n') || text.contains('\r') {
                    return Err(corrupt(format!(
                        "service {} contains a line terminator",
                        record.id
                    )));
                }
            }
            if record.id >= snapshot.next_id {
                return Err(corrupt(format!(
                    "service {} at or above nextId {}",
                    record.id, snapshot.next_id
                )));
            }
            registry
                .insert(record)
                .map_err(|e| corrupt(format!("duplicate service: {e}")))?;
        }
        world.set_connections(snapshot.connections);

        let emu = Emu {
            registry,
            world,
            permissions,
            sap_steps,
        };
        emu.check_integrity().map_err(corrupt)?;
        Ok(emu)
    }

    /// Stable digest of the complete state; equal states hash equal.
    pub fn fingerprint(&self) -> u64 {
        let encoded = serde_json::to_string(&self.to_snapshot()).expect("state is serializable");
        let mut hasher = DefaultHasher::new();
        encoded.hash(&mut hasher);
        hasher.finish()
    }
}

fn replace_url_host(url: &str, new_host: &str) -> String {
    match url.find('/') {
        Some(i) => format!("{new_host}{}", &url[i..]),
        None => new_host.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sap::NodeResources;
    use crate::syntax::{parse_command, render_ack};
    use chrono::NaiveDate;

    fn table_one_emu() -> Emu {
        let mut world = SimWorld::new();
        world.add_node(NodeResources::new("192.168.1.6")).unwrap();
        world.set_clock(
            NaiveDate::from_ymd_opt(2011, 12, 7)
                .unwrap()
                .and_hms_opt(20, 15, 21)
                .unwrap(),
        );
        let mut registry = Registry::with_seed(2);
        registry.add_host("mydomain.info", "192.168.1.6");
        Emu::new(registry, world)
    }

    fn run(emu: &mut Emu, line: &str) -> Ack {
        emu.dispatch(&parse_command(line).unwrap()).ack
    }

    #[test]
    fn bind_stores_a_disabled_record_with_derived_ip() {
        let mut emu = table_one_emu();
        let ack = run(&mut emu, "bind: mydomain.info/DICTIONARY, WSDL");
        assert_eq!(render_ack(&ack), "bind-ack: 2, True");
        let record = emu.registry.get(2).unwrap();
        assert_eq!(record.ip, "192.168.1.6");
        assert_eq!(record.host_node, "192.168.1.6");
        assert!(!record.enabled);
        assert!(!record.is_replica);
        assert!(record.permissions.is_empty());
        assert_eq!(record.wsdl.as_deref(), Some("WSDL"));
    }

    #[test]
    fn bind_failures_use_the_sentinel_and_burn_no_id() {
        let mut emu = table_one_emu();
        let before = emu.fingerprint();
        let ack = run(&mut emu, "bind: nosuch.host/x, WSDL");
        assert_eq!(render_ack(&ack), "bind-ack: -1, False");
        assert_eq!(emu.fingerprint(), before);
        assert_eq!(emu.registry.next_id(), 2);

        // Known host but no such simulator node.
        emu.registry.add_host("ghost.example", "10.9.9.9");
        let ack = run(&mut emu, "bind: ghost.example/x, WSDL");
        assert_eq!(render_ack(&ack), "bind-ack: -1, False");
    }

    #[test]
    fn duplicate_url_bind_fails() {
        let mut emu = table_one_emu();
        run(&mut emu, "bind: mydomain.info/DICTIONARY, WSDL");
        let before = emu.fingerprint();
        let ack = run(&mut emu, "bind: mydomain.info/DICTIONARY, OTHER");
        assert_eq!(render_ack(&ack), "bind-ack: -1, False");
        assert_eq!(emu.fingerprint(), before);
    }

    #[test]
    fn unbind_removes_records_and_rejects_unknown_ids() {
        let mut emu = table_one_emu();
        run(&mut emu, "bind: mydomain.info/DICTIONARY, WSDL");
        assert_eq!(render_ack(&run(&mut emu, "unbind: 2")), "unbind-ack: 2, True");
        assert!(!emu.registry.contains(2));
        assert_eq!(render_ack(&run(&mut emu, "unbind: 99")), "unbind-ack: 99, False");
        // The URL is free again and the next bind gets a fresh ID.
        let ack = run(&mut emu, "bind: mydomain.info/DICTIONARY, WSDL");
        assert_eq!(render_ack(&ack), "bind-ack: 3, True");
    }

    #[test]
    fn update_and_delete_target_the_wsdl_not_the_record() {
        let mut emu = table_one_emu();
        run(&mut emu, "bind: mydomain.info/DICTIONARY, WSDL");
        assert_eq!(render_ack(&run(&mut emu, "update: 2, W2")), "update-ack: 2, True");
        assert_eq!(emu.registry.get(2).unwrap().wsdl.as_deref(), Some("W2"));

        assert_eq!(render_ack(&run(&mut emu, "delete: 2")), "delete-ack: 2, True");
        let record = emu.registry.get(2).unwrap();
        assert_eq!(record.wsdl, None);

        // Second delete: nothing left to delete.
        assert_eq!(render_ack(&run(&mut emu, "delete: 2")), "delete-ack: 2, False");
        // Update restores a WSDL on the same record.
        assert_eq!(render_ack(&run(&mut emu, "update: 2, W3")), "update-ack: 2, True");
        assert_eq!(emu.registry.get(2).unwrap().wsdl.as_deref(), Some("W3"));

        assert_eq!(render_ack(&run(&mut emu, "update: 99, W")), "update-ack: 99, False");
        assert_eq!(render_ack(&run(&mut emu, "delete: 99")), "delete-ack: 99, False");
    }

    #[test]
    fn enable_is_idempotent() {
        let mut emu = table_one_emu();
        run(&mut emu, "bind: mydomain.info/DICTIONARY, WSDL");
        let first = emu.dispatch(&parse_command("enable: 2, True").unwrap());
        assert_eq!(render_ack(&first.ack), "enable-ack: 2, True");
        assert!(first.state_changed);
        let second = emu.dispatch(&parse_command("enable: 2, True").unwrap());
        assert_eq!(render_ack(&second.ack), "enable-ack: 2, True");
        assert!(!second.state_changed);
        assert_eq!(render_ack(&run(&mut emu, "enable: 99, False")), "enable-ack: 99, False");
    }

    #[test]
    fn get_clients_counts_simulated_connections() {
        let mut emu = table_one_emu();
        run(&mut emu, "bind: mydomain.info/DICTIONARY, WSDL");
        assert_eq!(
            render_ack(&run(&mut emu, "getClients: 2")),
            "getClients-ack: 2, 0, True"
        );
        run(&mut emu, "enable: 2, True");
        for _ in 0..3 {
            emu.connect_client(2).unwrap();
        }
        emu.disconnect_client(2).unwrap();
        assert_eq!(
            render_ack(&run(&mut emu, "getClients: 2")),
            "getClients-ack: 2, 2, True"
        );
        assert_eq!(
            render_ack(&run(&mut emu, "getClients: 9")),
            "getClients-ack: 9, -1, False"
        );
    }

    #[test]
    fn grant_reports_per_pair_results() {
        let mut emu = table_one_emu();
        run(&mut emu, "bind: mydomain.info/DICTIONARY, WSDL");
        assert_eq!(
            render_ack(&run(&mut emu, "grant: 2, disk:allow")),
            "grant-ack: 2, disk:True"
        );
        assert_eq!(
            render_ack(&run(&mut emu, "grant: 2, disk:allow;bogus:deny")),
            "grant-ack: 2, disk:True;bogus:False"
        );
        assert_eq!(emu.registry.get(2).unwrap().permissions, ["disk"]);

        // Repeating a grant leaves the set fixed.
        let outcome = emu.dispatch(&parse_command("grant: 2, disk:allow").unwrap());
        assert!(!outcome.state_changed);
        assert!(outcome.ack.success());

        // Denying a permission the service never held still acks True.
        assert_eq!(
            render_ack(&run(&mut emu, "grant: 2, network:deny")),
            "grant-ack: 2, network:True"
        );

        // Unknown service: everything fails, nothing is processed.
        let outcome = emu.dispatch(&parse_command("grant: 99, disk:allow;network:deny").unwrap());
        assert_eq!(render_ack(&outcome.ack), "grant-ack: 99, disk:False;network:False");
        assert!(!outcome.ack.success());
        assert!(!outcome.state_changed);
    }

    #[test]
    fn replica_copies_the_source_onto_the_target_node() {
        let mut emu = table_one_emu();
        emu.world.add_node(NodeResources::new("192.168.1.9")).unwrap();
        run(&mut emu, "bind: mydomain.info/DICTIONARY, WSDL");
        run(&mut emu, "enable: 2, True");
        run(&mut emu, "grant: 2, disk:allow");

        let ack = run(&mut emu, "createReplica: 2, 192.168.1.9");
        assert_eq!(render_ack(&ack), "createReplica-ack: 2, 3, True");
        let replica = emu.registry.get(3).unwrap();
        assert!(replica.is_replica);
        assert_eq!(replica.ip, "192.168.1.9");
        assert_eq!(replica.url, "192.168.1.9/DICTIONARY");
        assert_eq!(replica.wsdl.as_deref(), Some("WSDL"));
        assert!(replica.enabled);
        assert_eq!(replica.permissions, ["disk"]);

        // Replicas die individually; the source stays.
        assert_eq!(render_ack(&run(&mut emu, "unbind: 3")), "unbind-ack: 3, True");
        assert!(emu.registry.contains(2));
    }

    #[test]
    fn replica_failures_use_the_sentinel() {
        let mut emu = table_one_emu();
        run(&mut emu, "bind: mydomain.info/DICTIONARY, WSDL");
        let before = emu.fingerprint();
        assert_eq!(
            render_ack(&run(&mut emu, "createReplica: 99, 192.168.1.9")),
            "createReplica-ack: 99, -1, False"
        );
        assert_eq!(
            render_ack(&run(&mut emu, "createReplica: 2, 10.0.0.1")),
            "createReplica-ack: 2, -1, False"
        );
        run(&mut emu, "delete: 2");
        assert_eq!(
            render_ack(&run(&mut emu, "createReplica: 2, 192.168.1.6")),
            "createReplica-ack: 2, -1, False"
        );
        let _ = before;
    }

    #[test]
    fn get_info_embeds_the_report_or_null() {
        let mut emu = table_one_emu();
        run(&mut emu, "bind: mydomain.info/DICTIONARY, WSDL");
        let ack = run(&mut emu, "getInfo: 2");
        match &ack {
            Ack::GetInfo { report: Some(xml), ok: true, .. } => {
                assert!(xml.contains("<isEnabled>False</isEnabled>"));
                assert!(xml.contains("<grantedPermissions></grantedPermissions>"));
            }
            other => panic!("unexpected ack {other:?}"),
        }
        assert_eq!(
            render_ack(&run(&mut emu, "getInfo: 99")),
            "getInfo-ack: 99, null, False"
        );
    }

    #[test]
    fn execute_sap_routes_to_the_host_node() {
        let mut emu = table_one_emu();
        run(&mut emu, "bind: mydomain.info/DICTIONARY, WSDL");
        let before = emu.world.node("192.168.1.6").unwrap().bw_allocated_mbps;
        let ack = run(&mut emu, "executeSAP: 2, IncreaseNetBandwidth()");
        assert_eq!(render_ack(&ack), "executeSAP-ack: 2, True");
        assert_eq!(
            emu.world.node("192.168.1.6").unwrap().bw_allocated_mbps,
            before + emu.sap_steps.bw_step_mbps
        );

        // Unknown procedure and unknown service both fail cleanly.
        let fp = emu.fingerprint();
        assert_eq!(
            render_ack(&run(&mut emu, "executeSAP: 2, NoSuchProc()")),
            "executeSAP-ack: 2, False"
        );
        assert_eq!(
            render_ack(&run(&mut emu, "executeSAP: 99, IncreaseNetBandwidth()")),
            "executeSAP-ack: 99, False"
        );
        assert_eq!(emu.fingerprint(), fp);
    }

    #[test]
    fn infeasible_sap_leaves_state_identical() {
        let mut emu = table_one_emu();
        emu.world.node_mut("192.168.1.6").unwrap().bw_allocated_mbps = 950;
        run(&mut emu, "bind: mydomain.info/DICTIONARY, WSDL");
        let before = emu.fingerprint();
        let outcome = emu.dispatch(&parse_command("executeSAP: 2, IncreaseNetBandwidth()").unwrap());
        assert_eq!(render_ack(&outcome.ack), "executeSAP-ack: 2, False");
        assert!(!outcome.state_changed);
        assert_eq!(emu.fingerprint(), before);
    }

    #[test]
    fn every_failed_ack_echoes_the_addressed_id() {
        let mut emu = table_one_emu();
        for (line, id) in [
            ("unbind: 42", 42),
            ("update: 42, W", 42),
            ("delete: 42", 42),
            ("enable: 42, True", 42),
            ("getClients: 42", 42),
            ("getInfo: 42", 42),
            ("executeSAP: 42, IncreaseNetBandwidth()", 42),
        ] {
            let ack = run(&mut emu, line);
            assert_eq!(ack.service_id(), id, "{line}");
            assert!(!ack.success(), "{line}");
        }
    }

    #[test]
    fn integrity_holds_across_a_session() {
        let mut emu = table_one_emu();
        emu.world.add_node(NodeResources::new("192.168.1.9")).unwrap();
        for line in [
            "bind: mydomain.info/DICTIONARY, WSDL",
            "enable: 2, True",
            "grant: 2, disk:allow;network:allow",
            "createReplica: 2, 192.168.1.9",
            "executeSAP: 3, AllocateExtraCores()",
            "unbind: 2",
            "getInfo: 3",
        ] {
            run(&mut emu, line);
            emu.check_integrity().expect(line);
        }
    }
}
