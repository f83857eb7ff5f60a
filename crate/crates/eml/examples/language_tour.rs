//! Tour of the command notation: parsing, canonical rendering, typed
//! rejection, and the quoting/XML payload forms.
//!
//! Run with: `cargo run -p eml --example language_tour`

use eml::syntax::{parse_ack, parse_command, render_command, Command, PermAction};

fn main() {
    println!("=== Parsing commands ===\n");
    for line in [
        "bind: mydomain.info/DICTIONARY, WSDL",
        "enable: 2, True",
        "grant: 2, disk:allow;network:deny",
        "executeSAP: 14, IncreaseNetBandwidth()",
    ] {
        let cmd = parse_command(line).unwrap();
        println!("{line}\n  -> {cmd:?}");
    }

    println!("\n=== Canonical rendering round-trips ===\n");
    let cmd = Command::Grant {
        id: 2,
        perms: vec![
            ("disk".into(), PermAction::Allow),
            ("network".into(), PermAction::Deny),
        ],
    };
    let line = render_command(&cmd);
    println!("{cmd:?}\n  -> {line}");
    assert_eq!(parse_command(&line).unwrap(), cmd);

    // Text containing commas goes through the quoted form.
    let tricky = Command::Bind {
        url: "mydomain.info/SVC".into(),
        wsdl: "a wsdl, with a comma".into(),
    };
    let line = render_command(&tricky);
    println!("{tricky:?}\n  -> {line}");
    assert_eq!(parse_command(&line).unwrap(), tricky);

    println!("\n=== Every bad line gets exactly one typed error ===\n");
    for line in [
        "bind mydomain",          // no colon
        "bogus: 1",               // unknown keyword
        "unbind: 1, 2",           // wrong arity
        "enable: 2, maybe",       // bad boolean
        "grant: 2, disk: allow",  // whitespace inside the permission list
        "executeSAP: 2, Broken(", // malformed SAP call
    ] {
        let err = parse_command(line).unwrap_err();
        println!("{line:28} -> {} ({err})", err.code());
    }

    println!("\n=== Acknowledgments parse too ===\n");
    for line in [
        "bind-ack: 2, True",
        "getClients-ack: 9, -1, False",
        "grant-ack: 2, disk:True",
        "getInfo-ack: 99, null, False",
    ] {
        let ack = parse_ack(line).unwrap();
        println!("{line:32} -> success={}", ack.success());
    }
}
