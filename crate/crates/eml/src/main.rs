//! Thin command-line front end: `serve` exposes an EMU over TCP, `repl`
//! and `run` drive one interactively or from a script, locally or against
//! a served instance.

use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Duration;

use clap::{Parser, Subcommand};

use eml::config::EmuConfig;
use eml::console::{line_succeeded, pretty_response, run_line, script_lines};
use eml::exec::Emu;
use eml::snapshot::WorldSnapshot;
use eml::wire::{Connection, Server};

#[derive(Parser)]
#[command(name = "eml", version, about = "Ecosystem Management Language console and server")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Serve an EMU over the TCP line protocol until interrupted.
    Serve {
        /// Address to listen on, e.g. 127.0.0.1:7033 (port 0 picks one).
        #[arg(long)]
        listen: String,
        /// Bootstrap world file (snapshot JSON schema).
        #[arg(long)]
        world: PathBuf,
        /// State file: loaded instead of the world when it exists, and
        /// written on clean shutdown.
        #[arg(long)]
        snapshot: PathBuf,
        /// Override the next service ID to allocate.
        #[arg(long)]
        seed_id: Option<i64>,
        /// Engine configuration (permissions, adaptation step sizes).
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Interactive console, local or against a served EMU.
    Repl {
        /// Remote server address; omit to run an in-process EMU.
        #[arg(long)]
        connect: Option<String>,
        /// Pretty-print XML report payloads locally.
        #[arg(long)]
        pretty: bool,
        /// Bootstrap world file for the in-process EMU.
        #[arg(long)]
        world: Option<PathBuf>,
        /// State file for the in-process EMU (loaded if present).
        #[arg(long)]
        snapshot: Option<PathBuf>,
        #[arg(long)]
        seed_id: Option<i64>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Execute a script (one command per line, `#` comments), printing
    /// one output line per command. Exits nonzero if anything failed.
    Run {
        script: PathBuf,
        /// Remote server address; omit to run an in-process EMU.
        #[arg(long)]
        connect: Option<String>,
        #[arg(long)]
        world: Option<PathBuf>,
        #[arg(long)]
        snapshot: Option<PathBuf>,
        #[arg(long)]
        seed_id: Option<i64>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Cmd::Serve {
            listen,
            world,
            snapshot,
            seed_id,
            config,
        } => serve(&listen, &world, &snapshot, seed_id, config.as_deref()),
        Cmd::Repl {
            connect,
            pretty,
            world,
            snapshot,
            seed_id,
            config,
        } => repl(connect.as_deref(), pretty, world.as_deref(), snapshot.as_deref(), seed_id, config.as_deref()),
        Cmd::Run {
            script,
            connect,
            world,
            snapshot,
            seed_id,
            config,
        } => run(&script, connect.as_deref(), world.as_deref(), snapshot.as_deref(), seed_id, config.as_deref()),
    }
    .unwrap_or_else(|message| {
        eprintln!("eml: {message}");
        ExitCode::FAILURE
    })
}

/// Build the in-process EMU from the state/world/config flags.
fn build_emu(
    world: Option<&Path>,
    snapshot: Option<&Path>,
    seed_id: Option<i64>,
    config: Option<&Path>,
) -> Result<Emu, String> {
    let config = match config {
        Some(path) => EmuConfig::load(path).map_err(|e| e.to_string())?,
        None => EmuConfig::default(),
    };
    let state = match (snapshot, world) {
        (Some(path), _) if path.exists() => WorldSnapshot::load(path).map_err(|e| e.to_string())?,
        (_, Some(path)) => WorldSnapshot::load(path).map_err(|e| e.to_string())?,
        (_, None) => WorldSnapshot::empty(),
    };
    let mut emu = Emu::from_snapshot(state, config.permission_table(), config.sap_steps)
        .map_err(|e| e.to_string())?;
    if let Some(seed) = seed_id {
        emu.registry.reseed(seed);
    }
    Ok(emu)
}

static INTERRUPTED: AtomicBool = AtomicBool::new(false);

extern "C" fn on_signal(_: libc::c_int) {
    INTERRUPTED.store(true, Ordering::SeqCst);
}

fn serve(
    listen: &str,
    world: &Path,
    snapshot: &Path,
    seed_id: Option<i64>,
    config: Option<&Path>,
) -> Result<ExitCode, String> {
    let emu = build_emu(Some(world), Some(snapshot), seed_id, config)?;
    let server = Server::start(emu, listen, Some(snapshot.to_path_buf()))
        .map_err(|e| e.to_string())?;
    println!("listening on {}", server.local_addr());
    io::stdout().flush().ok();

    let handler = on_signal as extern "C" fn(libc::c_int) as libc::sighandler_t;
    unsafe {
        libc::signal(libc::SIGINT, handler);
        libc::signal(libc::SIGTERM, handler);
    }
    while !INTERRUPTED.load(Ordering::SeqCst) {
        std::thread::sleep(Duration::from_millis(50));
    }

    server.shutdown().map_err(|e| e.to_string())?;
    eprintln!("state saved to {}", snapshot.display());
    Ok(ExitCode::SUCCESS)
}

fn repl(
    connect: Option<&str>,
    pretty: bool,
    world: Option<&Path>,
    snapshot: Option<&Path>,
    seed_id: Option<i64>,
    config: Option<&Path>,
) -> Result<ExitCode, String> {
    let mut remote = match connect {
        Some(addr) => Some(Connection::connect(addr).map_err(|e| e.to_string())?),
        None => None,
    };
    let mut local = match remote {
        Some(_) => None,
        None => Some(build_emu(world, snapshot, seed_id, config)?),
    };

    let stdin = io::stdin();
    let mut line = String::new();
    loop {
        eprint!("eml> ");
        io::stderr().flush().ok();
        line.clear();
        match stdin.lock().read_line(&mut line) {
            Ok(0) => break, // EOF
            Ok(_) => {}
            Err(e) => return Err(e.to_string()),
        }
        let input = line.trim_end_matches(['\n', '\r']);
        if input.is_empty() {
            continue;
        }
        let output = match (&mut remote, &mut local) {
            (Some(conn), _) => match conn.roundtrip(input) {
                Ok(out) => out,
                Err(e) => {
                    eprintln!("eml: {e}");
                    return Ok(ExitCode::FAILURE);
                }
            },
            (None, Some(emu)) => run_line(emu, input),
            (None, None) => unreachable!(),
        };
        println!("{}", if pretty { pretty_response(&output) } else { output });
    }
    Ok(ExitCode::SUCCESS)
}

fn run(
    script: &Path,
    connect: Option<&str>,
    world: Option<&Path>,
    snapshot: Option<&Path>,
    seed_id: Option<i64>,
    config: Option<&Path>,
) -> Result<ExitCode, String> {
    let text = std::fs::read_to_string(script)
        .map_err(|e| format!("cannot read {}: {e}", script.display()))?;

    let mut outputs = Vec::new();
    match connect {
        Some(addr) => {
            let mut conn = Connection::connect(addr).map_err(|e| e.to_string())?;
            for input in script_lines(&text) {
                outputs.push(conn.roundtrip(input).map_err(|e| e.to_string())?);
            }
        }
        None => {
            let mut emu = build_emu(world, snapshot, seed_id, config)?;
            for input in script_lines(&text) {
                outputs.push(run_line(&mut emu, input));
            }
        }
    }

    let all_ok = outputs.iter().all(|out| line_succeeded(out));
    let mut stdout = io::stdout().lock();
    for output in &outputs {
        writeln!(stdout, "{output}").map_err(|e| e.to_string())?;
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
