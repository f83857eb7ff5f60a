//! A complete local admin session: integrate a DICTIONARY service, enable
//! it, grant disk access, and pull its XML report — the classic
//! bind/enable/grant/getInfo sequence.
//!
//! Run with: `cargo run -p eml --example admin_session`

use chrono::NaiveDate;

use eml::console::{pretty_response, run_line};
use eml::exec::Emu;
use eml::registry::Registry;
use eml::sap::NodeResources;
use eml::sim::SimWorld;

fn main() {
    // One server node, one hostname, the next service ID will be 2, and a
    // frozen report clock so the transcript is reproducible.
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
    let mut emu = Emu::new(registry, world);

    let session = [
        "bind: mydomain.info/DICTIONARY, WSDL",
        "enable: 2, True",
        "grant: 2, disk:allow",
        "getInfo: 2",
    ];
    for line in session {
        println!("admin> {line}");
        println!("{}\n", run_line(&mut emu, line));
    }

    // The same report, unpacked for humans.
    println!("--- getInfo payload, pretty-printed locally ---");
    let raw = run_line(&mut emu, "getInfo: 2");
    let pretty = pretty_response(&raw);
    println!("{}", pretty.split_once('\n').map(|(_, xml)| xml).unwrap());

    // Failures answer with sentinels instead of data.
    println!("\n--- failure sentinels ---");
    for line in ["bind: nosuch.host/x, W", "getClients: 77", "getInfo: 77"] {
        println!("admin> {line}");
        println!("{}", run_line(&mut emu, line));
    }
}
