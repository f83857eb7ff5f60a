//! The line protocol end to end, in one process: start a server on an
//! ephemeral port, drive it from two client connections, and show that
//! remote output matches local execution byte for byte.
//!
//! Run with: `cargo run -p eml --example remote_console`

use eml::console::run_line;
use eml::exec::Emu;
use eml::registry::Registry;
use eml::sap::NodeResources;
use eml::sim::SimWorld;
use eml::wire::{Connection, Server};

fn fresh_emu() -> Emu {
    let mut world = SimWorld::new();
    world.add_node(NodeResources::new("192.168.1.6")).unwrap();
    let mut registry = Registry::with_seed(2);
    registry.add_host("mydomain.info", "192.168.1.6");
    Emu::new(registry, world)
}

fn main() {
    let server = Server::start(fresh_emu(), "127.0.0.1:0", None).unwrap();
    let addr = server.local_addr();
    println!("server listening on {addr}\n");

    let session = [
        "bind: mydomain.info/DICTIONARY, WSDL",
        "enable: 2, True",
        "grant: 2, disk:allow",
        "not a command",
        "getClients: 2",
    ];

    // Drive the served instance...
    let mut remote_outputs = Vec::new();
    let mut client = Connection::connect(&addr.to_string()).unwrap();
    for line in session {
        let response = client.roundtrip(line).unwrap();
        println!("client-1> {line}");
        println!("          {response}");
        remote_outputs.push(response);
    }

    // ...and a second connection sees the same registry.
    let mut other = Connection::connect(&addr.to_string()).unwrap();
    let response = other.roundtrip("getInfo: 2").unwrap();
    println!("client-2> getInfo: 2");
    println!("          {response}\n");

    // Wire transparency: a local EMU fed the same lines answers the same.
    let mut local = fresh_emu();
    let local_outputs: Vec<String> = session.iter().map(|l| run_line(&mut local, l)).collect();
    assert_eq!(local_outputs, remote_outputs);
    println!("remote transcript == local transcript: ok");

    let final_state = server.shutdown().unwrap();
    println!(
        "server stopped; registry holds {} service(s)",
        final_state.registry.len()
    );
}
