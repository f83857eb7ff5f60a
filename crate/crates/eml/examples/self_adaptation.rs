//! The nine built-in self-adaptation procedures, applied to one simulated
//! node: resource steps, feasibility limits, and printer failover.
//!
//! Run with: `cargo run -p eml --example self_adaptation`

use eml::console::run_line;
use eml::exec::Emu;
use eml::registry::Registry;
use eml::sap::{self, NodeResources, Printer, PrinterState, SapStepConfig};
use eml::sim::SimWorld;

fn main() {
    println!("=== The catalog ===\n");
    for proc in &sap::CATALOG {
        println!("{:24} {}", proc.name, proc.category.display_name());
    }

    println!("\n=== Direct application with the default steps ===\n");
    let cfg = SapStepConfig::default();
    let mut node = NodeResources::new("192.168.1.7");
    node.bw_total_mbps = 1000;
    node.bw_allocated_mbps = 400;

    let proc = sap::lookup_sap("IncreaseNetBandwidth").unwrap();
    let next = sap::apply_sap(proc, &node, 14, &cfg).unwrap();
    println!(
        "IncreaseNetBandwidth: {} -> {} Mbps allocated (step {})",
        node.bw_allocated_mbps, next.bw_allocated_mbps, cfg.bw_step_mbps
    );

    // Feasibility: the whole step has to fit.
    node.bw_allocated_mbps = node.bw_total_mbps - 40;
    match sap::apply_sap(proc, &node, 14, &cfg) {
        Err(e) => println!("with 40 Mbps headroom: {e}"),
        Ok(_) => unreachable!(),
    }

    println!("\n=== Through the management unit ===\n");
    let mut world = SimWorld::new();
    let mut server = NodeResources::new("192.168.1.7");
    server.printers = vec![
        Printer::new("P1", PrinterState::Ok),
        Printer::new("P2", PrinterState::Ok),
    ];
    world.add_node(server).unwrap();
    let mut registry = Registry::with_seed(14);
    registry.add_host("search.example", "192.168.1.7");
    let mut emu = Emu::new(registry, world);

    for line in [
        "bind: search.example/SEARCH, SEARCH-WSDL",
        "executeSAP: 14, IncreaseNetBandwidth()",
        "executeSAP: 14, AllocateExtraCores()",
        "executeSAP: 14, OverclockCPU()",
        "executeSAP: 14, SwitchPrinter()",
        "executeSAP: 14, NoSuchProcedure()",
    ] {
        println!("admin> {line}");
        println!("{}", run_line(&mut emu, line));
    }

    let node = emu.world.node("192.168.1.7").unwrap();
    println!(
        "\nnode state: {} cores, clock x{:.2}, {} Mbps, printed by {}",
        node.cores_allocated,
        node.clock_multiplier,
        node.bw_allocated_mbps,
        node.printer_for(14).map(|p| p.name.as_str()).unwrap_or("nobody"),
    );

    // Ink runs out; the service is rerouted to the next working printer.
    emu.world
        .set_printer_state("192.168.1.7", "P1", PrinterState::OutOfInk)
        .unwrap();
    println!("\nP1 runs out of ink...");
    println!("admin> executeSAP: 14, SwitchPrinter()");
    println!("{}", run_line(&mut emu, "executeSAP: 14, SwitchPrinter()"));
    let node = emu.world.node("192.168.1.7").unwrap();
    println!("now printing on {}", node.printer_for(14).unwrap().name);
}
