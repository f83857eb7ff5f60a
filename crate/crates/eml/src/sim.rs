//! The simulated ecosystem substrate: machines, client connection
//! counters, printers, and a frozen-until-set clock.
//!
//! The world only changes at the executor's serialization point; replaying
//! the same event/command sequence from the same initial world always
//! produces the same state.

use std::collections::BTreeMap;

use chrono::NaiveDateTime;
use thiserror::Error;

use crate::registry::Registry;
use crate::sap::{NodeResources, PrinterState};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("node {0} already exists")]
    DuplicateNode(String),
    #[error("no printer `{printer}` on node {node}")]
    UnknownPrinter { node: String, printer: String },
    #[error("service {0} is not registered")]
    ServiceUnknown(i64),
    #[error("service {0} is disabled")]
    ServiceDisabled(i64),
    #[error("service {0} has no connected clients")]
    NoClients(i64),
}

/// Simulated machines, per-service client counters, and the report clock.
#[derive(Debug, Clone, PartialEq)]
pub struct SimWorld {
    nodes: BTreeMap<String, NodeResources>,
    connections: BTreeMap<i64, u32>,
    clock: NaiveDateTime,
}

impl SimWorld {
    pub fn new() -> Self {
        SimWorld {
            nodes: BTreeMap::new(),
            connections: BTreeMap::new(),
            // Frozen at the epoch until someone sets it.
            clock: chrono::DateTime::UNIX_EPOCH.naive_utc(),
        }
    }

    pub fn add_node(&mut self, node: NodeResources) -> Result<(), SimError> {
        if self.nodes.contains_key(&node.node_id) {
            return Err(SimError::DuplicateNode(node.node_id));
        }
        self.nodes.insert(node.node_id.clone(), node);
        Ok(())
    }

    pub fn has_node(&self, ip: &str) -> bool {
        self.nodes.contains_key(ip)
    }

    pub fn node(&self, ip: &str) -> Option<&NodeResources> {
        self.nodes.get(ip)
    }

    pub fn node_mut(&mut self, ip: &str) -> Option<&mut NodeResources> {
        self.nodes.get_mut(ip)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NodeResources> {
        self.nodes.values()
    }

    /// Live client count for a service; services start (and stay) at zero
    /// until clients connect.
    pub fn client_count(&self, service_id: i64) -> u32 {
        self.connections.get(&service_id).copied().unwrap_or(0)
    }

    pub fn connections(&self) -> &BTreeMap<i64, u32> {
        &self.connections
    }

    pub fn set_connections(&mut self, connections: BTreeMap<i64, u32>) {
        self.connections = connections;
    }

    /// Drop a service's counter when it is unbound.
    pub fn forget_service(&mut self, service_id: i64) {
        self.connections.remove(&service_id);
    }

    pub fn clock(&self) -> NaiveDateTime {
        self.clock
    }

    /// Freeze the report clock at `t`; it stays there until set again.
    pub fn set_clock(&mut self, t: NaiveDateTime) {
        self.clock = t;
    }

    pub fn set_printer_state(
        &mut self,
        node_ip: &str,
        printer: &str,
        state: PrinterState,
    ) -> Result<(), SimError> {
        let unknown = || SimError::UnknownPrinter {
            node: node_ip.to_string(),
            printer: printer.to_string(),
        };
        let node = self.nodes.get_mut(node_ip).ok_or_else(unknown)?;
        let slot = node
            .printers
            .iter_mut()
            .find(|p| p.name == printer)
            .ok_or_else(unknown)?;
        slot.state = state;
        Ok(())
    }
}

impl Default for SimWorld {
    fn default() -> Self {
        SimWorld::new()
    }
}

/// One more client for a service. Only registered, enabled services accept
/// connections — this is what the `enable` flag observably gates.
pub fn connect_client(
    world: &mut SimWorld,
    registry: &Registry,
    service_id: i64,
) -> Result<(), SimError> {
    let record = registry
        .get(service_id)
        .map_err(|_| SimError::ServiceUnknown(service_id))?;
    if !record.enabled {
        return Err(SimError::ServiceDisabled(service_id));
    }
    *world.connections.entry(service_id).or_insert(0) += 1;
    Ok(())
}

/// One client gone. Requires a live connection to remove.
pub fn disconnect_client(
    world: &mut SimWorld,
    registry: &Registry,
    service_id: i64,
) -> Result<(), SimError> {
    if !registry.contains(service_id) {
        return Err(SimError::ServiceUnknown(service_id));
    }
    match world.connections.get_mut(&service_id) {
        Some(count) if *count > 0 => {
            *count -= 1;
            Ok(())
        }
        _ => Err(SimError::NoClients(service_id)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::ServiceRecord;
    use chrono::NaiveDate;

    fn world_with_node() -> SimWorld {
        let mut world = SimWorld::new();
        world.add_node(NodeResources::new("192.168.1.6")).unwrap();
        world
    }

    fn registry_with_service(id: i64, enabled: bool) -> Registry {
        let mut reg = Registry::new();
        reg.insert(ServiceRecord {
            id,
            ip: "192.168.1.6".into(),
            url: "mydomain.info/x".into(),
            wsdl: Some("W".into()),
            enabled,
            is_replica: false,
            permissions: Vec::new(),
            host_node: "192.168.1.6".into(),
        })
        .unwrap();
        reg
    }

    #[test]
    fn duplicate_nodes_are_rejected() {
        let mut world = world_with_node();
        assert!(world.has_node("192.168.1.6"));
        assert_eq!(
            world.add_node(NodeResources::new("192.168.1.6")),
            Err(SimError::DuplicateNode("192.168.1.6".into()))
        );
    }

    #[test]
    fn counters_follow_connect_and_disconnect() {
        let mut world = world_with_node();
        let reg = registry_with_service(2, true);
        for _ in 0..3 {
            connect_client(&mut world, &reg, 2).unwrap();
        }
        disconnect_client(&mut world, &reg, 2).unwrap();
        assert_eq!(world.client_count(2), 2);
    }

    #[test]
    fn disabled_services_refuse_clients() {
        let mut world = world_with_node();
        let reg = registry_with_service(2, false);
        assert_eq!(
            connect_client(&mut world, &reg, 2),
            Err(SimError::ServiceDisabled(2))
        );
        assert_eq!(world.client_count(2), 0);
    }

    #[test]
    fn disconnect_needs_a_live_connection() {
        let mut world = world_with_node();
        let reg = registry_with_service(2, true);
        assert_eq!(
            disconnect_client(&mut world, &reg, 2),
            Err(SimError::NoClients(2))
        );
        assert_eq!(
            connect_client(&mut world, &reg, 99),
            Err(SimError::ServiceUnknown(99))
        );
    }

    #[test]
    fn clock_is_frozen_until_set() {
        let mut world = world_with_node();
        let t = NaiveDate::from_ymd_opt(2011, 12, 7)
            .unwrap()
            .and_hms_opt(20, 15, 21)
            .unwrap();
        world.set_clock(t);
        assert_eq!(world.clock(), t);
        assert_eq!(world.clock(), t);
    }

    #[test]
    fn printer_state_updates_by_node_and_name() {
        let mut world = SimWorld::new();
        let mut node = NodeResources::new("192.168.1.6");
        node.printers.push(crate::sap::Printer::new("P1", PrinterState::Ok));
        world.add_node(node).unwrap();

        world
            .set_printer_state("192.168.1.6", "P1", PrinterState::OutOfInk)
            .unwrap();
        assert_eq!(
            world.node("192.168.1.6").unwrap().printers[0].state,
            PrinterState::OutOfInk
        );
        assert!(matches!(
            world.set_printer_state("192.168.1.6", "P9", PrinterState::Ok),
            Err(SimError::UnknownPrinter { .. })
        ));
        assert!(matches!(
            world.set_printer_state("10.0.0.9", "P1", PrinterState::Ok),
            Err(SimError::UnknownPrinter { .. })
        ));
    }
}
