//! Shared fixtures, AST generators, and the naive reference interpreter
//! the replay-equivalence suite checks the executor against.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use chrono::{Duration, NaiveDate, NaiveDateTime};
use proptest::prelude::*;

use eml::exec::Emu;
use eml::registry::Registry;
use eml::report::{serialize_report, Report, ReportMode, REPORT_VERSION};
use eml::sap::NodeResources;
use eml::sim::SimWorld;
use eml::snapshot::{WorldSnapshot, SNAPSHOT_VERSION};
use eml::syntax::{Ack, Command, PermAction, SapCall};

// ---------------------------------------------------------------- fixtures

pub fn clock_2011() -> NaiveDateTime {
    NaiveDate::from_ymd_opt(2011, 12, 7)
        .unwrap()
        .and_hms_opt(20, 15, 21)
        .unwrap()
}

/// The experiment fixture: node 192.168.1.6 hosting mydomain.info, the
/// allocator about to hand out ID 2, clock frozen at the reference stamp.
pub fn table_one_snapshot() -> WorldSnapshot {
    WorldSnapshot {
        version: SNAPSHOT_VERSION,
        next_id: 2,
        host_table: BTreeMap::from([("mydomain.info".to_string(), "192.168.1.6".to_string())]),
        services: Vec::new(),
        nodes: vec![NodeResources::new("192.168.1.6")],
        connections: BTreeMap::new(),
        clock: Some(clock_2011()),
    }
}

pub fn table_one_emu() -> Emu {
    Emu::from_snapshot(table_one_snapshot(), Default::default(), Default::default()).unwrap()
}

pub const TABLE_ONE_SCRIPT: &str = "\
bind: mydomain.info/DICTIONARY, WSDL
enable: 2, True
grant: 2, disk:allow
getInfo: 2
";

pub const TABLE_ONE_EXPECTED: [&str; 4] = [
    "bind-ack: 2, True",
    "enable-ack: 2, True",
    "grant-ack: 2, disk:True",
    "getInfo-ack: 2, <report><serviceID>2</serviceID><serviceIP>192.168.1.6</serviceIP>\
     <serviceWSDL>WSDL</serviceWSDL><isEnabled>True</isEnabled><isReplica>False</isReplica>\
     <grantedPermissions><permission>Disk Access</permission></grantedPermissions>\
     <stamp>12/7/2011 08:15:21PM</stamp><version>1.0</version></report>, True",
];

pub const THREE_NODE_IPS: [&str; 3] = ["192.168.1.6", "192.168.1.7", "192.168.1.8"];
pub const THREE_NODE_HOSTS: [(&str, &str); 3] = [
    ("mydomain.info", "192.168.1.6"),
    ("svc.example", "192.168.1.7"),
    ("data.example", "192.168.1.8"),
];

/// Three nodes, three hostnames, empty registry seeded at 1.
pub fn three_node_emu() -> Emu {
    let mut world = SimWorld::new();
    for ip in THREE_NODE_IPS {
        world.add_node(NodeResources::new(ip)).unwrap();
    }
    world.set_clock(clock_2011());
    let mut registry = Registry::new();
    for (host, ip) in THREE_NODE_HOSTS {
        registry.add_host(host, ip);
    }
    Emu::new(registry, world)
}

// -------------------------------------------------------- AST generators

/// Single-line text, printable ASCII plus a sprinkle of non-ASCII;
/// exercises the quoting path with commas, quotes, and angle brackets.
pub fn arb_text() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => prop::string::string_regex("[a-zA-Z0-9./_-]{1,20}").unwrap(),
        2 => prop::string::string_regex("[ -~]{0,24}").unwrap(),
        1 => prop::string::string_regex("[ -~é日本語α]{0,16}").unwrap(),
    ]
}

pub fn arb_id() -> impl Strategy<Value = i64> {
    prop_oneof![
        4 => 0i64..10_000,
        1 => Just(-1i64),
        1 => any::<i64>(),
    ]
}

pub fn arb_perm_token() -> impl Strategy<Value = String> {
    prop::string::string_regex("[a-z][a-z0-9_]{0,8}").unwrap()
}

pub fn arb_sap_call() -> impl Strategy<Value = SapCall> {
    prop::string::string_regex("[A-Za-z][A-Za-z0-9_]{0,12}")
        .unwrap()
        .prop_map(SapCall::new)
}

fn arb_perm_action() -> impl Strategy<Value = PermAction> {
    prop_oneof![Just(PermAction::Allow), Just(PermAction::Deny)]
}

pub fn arb_command() -> impl Strategy<Value = Command> {
    prop_oneof![
        (arb_text(), arb_text()).prop_map(|(url, wsdl)| Command::Bind { url, wsdl }),
        arb_id().prop_map(|id| Command::Unbind { id }),
        (arb_id(), arb_text()).prop_map(|(id, wsdl)| Command::Update { id, wsdl }),
        arb_id().prop_map(|id| Command::Delete { id }),
        (arb_id(), any::<bool>()).prop_map(|(id, enabled)| Command::Enable { id, enabled }),
        arb_id().prop_map(|id| Command::GetClients { id }),
        (
            arb_id(),
            prop::collection::vec((arb_perm_token(), arb_perm_action()), 1..4)
        )
            .prop_map(|(id, perms)| Command::Grant { id, perms }),
        (arb_id(), arb_text()).prop_map(|(id, replica_ip)| Command::CreateReplica {
            id,
            replica_ip
        }),
        arb_id().prop_map(|id| Command::GetInfo { id }),
        (arb_id(), arb_sap_call()).prop_map(|(id, call)| Command::ExecuteSap { id, call }),
    ]
}

pub fn arb_stamp() -> impl Strategy<Value = NaiveDateTime> {
    let base = NaiveDate::from_ymd_opt(1990, 1, 1).unwrap().and_hms_opt(0, 0, 0).unwrap();
    (0i64..4_000_000_000).prop_map(move |s| base + Duration::seconds(s))
}

pub fn arb_report() -> impl Strategy<Value = Report> {
    let display_pool = prop::sample::select(vec![
        "Disk Access".to_string(),
        "Process Spawn".to_string(),
        "Network Access".to_string(),
        "GPU Access".to_string(),
    ]);
    (
        0i64..1_000_000,
        (0u8..=255u8, 0u8..=255u8, 0u8..=255u8, 0u8..=255u8),
        arb_text(),
        any::<bool>(),
        any::<bool>(),
        prop::collection::vec(display_pool, 0..4),
        arb_stamp(),
    )
        .prop_map(|(id, (a, b, c, d), wsdl, enabled, replica, perms, stamp)| Report {
            service_id: id,
            service_ip: format!("{a}.{b}.{c}.{d}"),
            service_wsdl: wsdl,
            is_enabled: enabled,
            is_replica: replica,
            granted_permissions: perms,
            stamp,
            version: REPORT_VERSION.to_string(),
        })
}

pub fn arb_ack() -> impl Strategy<Value = Ack> {
    let payload = prop_oneof![
        1 => Just(None),
        2 => arb_report().prop_map(|r| Some(serialize_report(&r, ReportMode::SingleLine))),
    ];
    prop_oneof![
        (arb_id(), any::<bool>()).prop_map(|(id, ok)| Ack::Bind { id, ok }),
        (arb_id(), any::<bool>()).prop_map(|(id, ok)| Ack::Unbind { id, ok }),
        (arb_id(), any::<bool>()).prop_map(|(id, ok)| Ack::Update { id, ok }),
        (arb_id(), any::<bool>()).prop_map(|(id, ok)| Ack::Delete { id, ok }),
        (arb_id(), any::<bool>()).prop_map(|(id, ok)| Ack::Enable { id, ok }),
        (arb_id(), arb_id(), any::<bool>())
            .prop_map(|(id, count, ok)| Ack::GetClients { id, count, ok }),
        (
            arb_id(),
            prop::collection::vec((arb_perm_token(), any::<bool>()), 1..4)
        )
            .prop_map(|(id, results)| Ack::Grant { id, results }),
        (arb_id(), arb_id(), any::<bool>())
            .prop_map(|(id, replica_id, ok)| Ack::CreateReplica { id, replica_id, ok }),
        (arb_id(), payload, any::<bool>())
            .prop_map(|(id, report, ok)| Ack::GetInfo { id, report, ok }),
        (arb_id(), any::<bool>()).prop_map(|(id, ok)| Ack::ExecuteSap { id, ok }),
    ]
}

/// Commands whose IDs, URLs, and names come from small pools, so random
/// sequences hit both success and failure paths of every operation.
pub fn arb_plausible_command() -> impl Strategy<Value = Command> {
    let id = prop_oneof![4 => 1i64..12, 1 => Just(99i64)];
    let url = (
        prop::sample::select(vec![
            "mydomain.info",
            "svc.example",
            "data.example",
            "192.168.1.8",
            "nosuch.host",
        ]),
        prop::sample::select(vec!["QUIZ", "SEARCH", "DICT", "A", "B", "C"]),
    )
        .prop_map(|(host, path)| format!("{host}/{path}"));
    let wsdl = prop::sample::select(vec!["W1", "W2", "long wsdl, with comma", "<w>x</w>"])
        .prop_map(str::to_string);
    let token = prop::sample::select(vec!["disk", "process", "network", "bogus"])
        .prop_map(str::to_string);
    let replica_ip = prop::sample::select(vec![
        "192.168.1.6",
        "192.168.1.7",
        "192.168.1.8",
        "10.0.0.1",
    ])
    .prop_map(str::to_string);
    let sap = prop::sample::select(vec![
        "IncreaseNetBandwidth",
        "AllocateExtraCores",
        "SwitchPowerSource",
        "SwitchPrinter",
        "NoSuchProc",
    ])
    .prop_map(SapCall::new);

    prop_oneof![
        3 => (url, wsdl.clone()).prop_map(|(url, wsdl)| Command::Bind { url, wsdl }),
        1 => id.clone().prop_map(|id| Command::Unbind { id }),
        1 => (id.clone(), wsdl).prop_map(|(id, wsdl)| Command::Update { id, wsdl }),
        1 => id.clone().prop_map(|id| Command::Delete { id }),
        2 => (id.clone(), any::<bool>()).prop_map(|(id, enabled)| Command::Enable { id, enabled }),
        1 => id.clone().prop_map(|id| Command::GetClients { id }),
        2 => (id.clone(), prop::collection::vec((token, arb_perm_action()), 1..3))
            .prop_map(|(id, perms)| Command::Grant { id, perms }),
        1 => (id.clone(), replica_ip).prop_map(|(id, replica_ip)| Command::CreateReplica { id, replica_ip }),
        1 => id.clone().prop_map(|id| Command::GetInfo { id }),
        1 => (id, sap).prop_map(|(id, call)| Command::ExecuteSap { id, call }),
    ]
}

// ------------------------------------------------- reference interpreter

/// What the oracle and the executor are compared on.
pub type RegistryImage = BTreeMap<i64, (String, String, Option<String>, bool, bool, Vec<String>)>;

pub fn registry_image(emu: &Emu) -> (RegistryImage, i64) {
    let image = emu
        .registry
        .records()
        .map(|r| {
            (
                r.id,
                (
                    r.url.clone(),
                    r.ip.clone(),
                    r.wsdl.clone(),
                    r.enabled,
                    r.is_replica,
                    r.permissions.clone(),
                ),
            )
        })
        .collect();
    (image, emu.registry.next_id())
}

/// A deliberately naive map-based interpreter of the registry-facing
/// command semantics, written from the command descriptions rather than
/// the executor. SAP execution never touches the registry, so it is a
/// registry no-op here.
pub struct RefInterpreter {
    pub nodes: BTreeSet<String>,
    pub hosts: BTreeMap<String, String>,
    pub next_id: i64,
    pub recs: RegistryImage,
    pub known_perms: BTreeSet<String>,
}

impl RefInterpreter {
    pub fn three_nodes() -> Self {
        RefInterpreter {
            nodes: THREE_NODE_IPS.iter().map(|s| s.to_string()).collect(),
            hosts: THREE_NODE_HOSTS
                .iter()
                .map(|(h, i)| (h.to_string(), i.to_string()))
                .collect(),
            next_id: 1,
            recs: BTreeMap::new(),
            known_perms: ["disk", "process", "network"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }

    fn is_dotted_quad(host: &str) -> bool {
        let parts: Vec<&str> = host.split('.').collect();
        parts.len() == 4
            && parts.iter().all(|p| {
                !p.is_empty()
                    && p.len() <= 3
                    && p.bytes().all(|b| b.is_ascii_digit())
                    && (p.len() == 1 || !p.starts_with('0'))
                    && p.parse::<u32>().map(|v| v <= 255).unwrap_or(false)
            })
    }

    fn resolve(&self, url: &str) -> Option<String> {
        let host = match url.find('/') {
            Some(i) => &url[..i],
            None => url,
        };
        if let Some(ip) = self.hosts.get(host) {
            return Some(ip.clone());
        }
        if Self::is_dotted_quad(host) {
            return Some(host.to_string());
        }
        None
    }

    pub fn apply(&mut self, cmd: &Command) {
        match cmd {
            Command::Bind { url, wsdl } => {
                let ip = match self.resolve(url) {
                    Some(ip) if self.nodes.contains(&ip) => ip,
                    _ => return,
                };
                if self.recs.values().any(|(u, ..)| u == url) {
                    return;
                }
                let id = self.next_id;
                self.next_id += 1;
                self.recs.insert(
                    id,
                    (url.clone(), ip, Some(wsdl.clone()), false, false, Vec::new()),
                );
            }
            Command::Unbind { id } => {
                self.recs.remove(id);
            }
            Command::Update { id, wsdl } => {
                if let Some(rec) = self.recs.get_mut(id) {
                    rec.2 = Some(wsdl.clone());
                }
            }
            Command::Delete { id } => {
                if let Some(rec) = self.recs.get_mut(id) {
                    rec.2 = None;
                }
            }
            Command::Enable { id, enabled } => {
                if let Some(rec) = self.recs.get_mut(id) {
                    rec.3 = *enabled;
                }
            }
            Command::GetClients { .. } | Command::GetInfo { .. } => {}
            Command::Grant { id, perms } => {
                if let Some(rec) = self.recs.get_mut(id) {
                    for (token, action) in perms {
                        if !self.known_perms.contains(token) {
                            continue;
                        }
                        match action {
                            PermAction::Allow => {
                                if !rec.5.contains(token) {
                                    rec.5.push(token.clone());
                                }
                            }
                            PermAction::Deny => rec.5.retain(|t| t != token),
                        }
                    }
                }
            }
            Command::CreateReplica { id, replica_ip } => {
                let source = match self.recs.get(id) {
                    Some(rec) => rec.clone(),
                    None => return,
                };
                if source.2.is_none() || !self.nodes.contains(replica_ip) {
                    return;
                }
                let new_id = self.next_id;
                self.next_id += 1;
                let url = match source.0.find('/') {
                    Some(i) => format!("{replica_ip}{}", &source.0[i..]),
                    None => replica_ip.clone(),
                };
                self.recs.insert(
                    new_id,
                    (
                        url,
                        replica_ip.clone(),
                        source.2.clone(),
                        source.3,
                        true,
                        source.5.clone(),
                    ),
                );
            }
            Command::ExecuteSap { .. } => {}
        }
    }
}
