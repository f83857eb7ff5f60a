//! EML — the Ecosystem Management Language and its runtime.
//!
//! A small line-oriented command language for administering services in a
//! simulated digital ecosystem, plus everything needed to run it:
//!
//! * [`syntax`] — lexing, parsing, and canonical rendering of the ten
//!   commands (`bind`, `unbind`, `update`, `delete`, `enable`,
//!   `getClients`, `grant`, `createReplica`, `getInfo`, `executeSAP`) and
//!   their acknowledgments.
//! * [`registry`] — the discovery registry: service records, monotonic ID
//!   allocation, hostname→IP resolution.
//! * [`exec`] — the Ecosystem Management Unit ([`Emu`]): validates each
//!   command against registry and simulator state, applies it, and returns
//!   exactly one acknowledgment.
//! * [`report`] — the `getInfo` XML report: building, two serialization
//!   layouts, parse-back, and a structural validator for the fixed content
//!   model (shipped as `report.dtd`).
//! * [`sap`] — nine built-in Self-Adaptation Procedures (power, CPU,
//!   fans, disk, memory, bandwidth, printers) over simulated node
//!   resources, with configurable step sizes.
//! * [`sim`] — the deterministic world: nodes, client connection
//!   counters, printers, and a frozen-until-set report clock.
//! * [`console`] / [`wire`] — the admin console core (one line in, one
//!   line out; scripts) and the TCP line protocol server/client.
//! * [`snapshot`] / [`config`] — JSON state files (also used to bootstrap
//!   worlds) and the engine configuration file.
//!
//! The `examples/` directory walks through each capability; the `eml`
//! binary wraps the library as `eml serve`, `eml repl`, and `eml run`.
//!
//! ```
//! use eml::exec::Emu;
//! use eml::registry::Registry;
//! use eml::sap::NodeResources;
//! use eml::sim::SimWorld;
//! use eml::console::run_line;
//!
//! let mut world = SimWorld::new();
//! world.add_node(NodeResources::new("192.168.1.6")).unwrap();
//! let mut registry = Registry::with_seed(2);
//! registry.add_host("mydomain.info", "192.168.1.6");
//! let mut emu = Emu::new(registry, world);
//!
//! assert_eq!(
//!     run_line(&mut emu, "bind: mydomain.info/DICTIONARY, WSDL"),
//!     "bind-ack: 2, True",
//! );
//! assert_eq!(run_line(&mut emu, "enable: 2, True"), "enable-ack: 2, True");
//! assert_eq!(run_line(&mut emu, "oops"), "error: MissingColon");
//! ```

pub mod config;
pub mod console;
pub mod exec;
pub mod registry;
pub mod report;
pub mod sap;
pub mod sim;
pub mod snapshot;
pub mod syntax;
pub mod wire;
pub mod xml;

pub use exec::{Emu, ExecOutcome, PermissionTable};
pub use registry::{Registry, ServiceRecord};
pub use report::{Report, ReportMode};
pub use sap::{NodeResources, SapStepConfig};
pub use sim::SimWorld;
pub use snapshot::WorldSnapshot;
pub use syntax::{parse_ack, parse_command, render_ack, render_command, Ack, Command};
