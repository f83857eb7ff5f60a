//! State files: capture a live EMU into the snapshot JSON schema, restore
//! it, and confirm the restored unit answers identically. The same schema
//! bootstraps worlds for `eml serve`.
//!
//! Run with: `cargo run -p eml --example snapshot_persistence`

use eml::console::run_line;
use eml::exec::Emu;
use eml::registry::Registry;
use eml::sap::NodeResources;
use eml::sim::SimWorld;
use eml::snapshot::WorldSnapshot;

fn main() {
    let mut world = SimWorld::new();
    world.add_node(NodeResources::new("192.168.1.6")).unwrap();
    world.add_node(NodeResources::new("192.168.1.9")).unwrap();
    let mut registry = Registry::with_seed(2);
    registry.add_host("mydomain.info", "192.168.1.6");
    let mut emu = Emu::new(registry, world);

    for line in [
        "bind: mydomain.info/DICTIONARY, WSDL",
        "enable: 2, True",
        "grant: 2, disk:allow;network:allow",
        "createReplica: 2, 192.168.1.9",
        "executeSAP: 2, IncreaseMemory()",
    ] {
        run_line(&mut emu, line);
    }
    emu.connect_client(2).unwrap();
    emu.connect_client(2).unwrap();

    let snapshot = emu.to_snapshot();
    println!("=== Snapshot document ===\n");
    println!("{}", snapshot.to_json());

    let dir = std::env::temp_dir().join("eml-snapshot-example");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("state.json");
    snapshot.save(&path).unwrap();
    println!("\nsaved to {}", path.display());

    let restored = Emu::from_snapshot(
        WorldSnapshot::load(&path).unwrap(),
        Default::default(),
        Default::default(),
    )
    .unwrap();
    assert_eq!(restored.fingerprint(), emu.fingerprint());
    println!("restored fingerprint matches: {:#018x}", restored.fingerprint());

    let mut restored = restored;
    println!("\n=== The restored unit answers identically ===\n");
    for line in ["getClients: 2", "getInfo: 3"] {
        let a = run_line(&mut emu, line);
        let b = run_line(&mut restored, line);
        assert_eq!(a, b);
        println!("admin> {line}");
        println!("{b}");
    }
}
