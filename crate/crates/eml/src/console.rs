//! The administrator's console core: turn one input line into one output
//! line, and run whole script files. The same functions back the local
//! REPL, the script runner, and the server's per-line execution, which is
//! what keeps local and remote output byte-identical.

use std::fs;
use std::io;
use std::path::Path;

use crate::exec::Emu;
use crate::report::{parse_report, serialize_report, ReportMode};
use crate::syntax::{parse_ack, parse_command, render_ack, Ack};

/// Parse, dispatch, render. A line that does not parse produces an
/// `error: <code>` diagnostic and changes nothing; this never panics and
/// always emits exactly one line.
pub fn run_line(emu: &mut Emu, line: &str) -> String {
    match parse_command(line) {
        Ok(cmd) => render_ack(&emu.dispatch(&cmd).ack),
        Err(e) => format!("error: {}", e.code()),
    }
}

/// Whether an output line reports success: an acknowledgment that
/// succeeded. Diagnostics and failed acks count as failures.
pub fn line_succeeded(output: &str) -> bool {
    parse_ack(output).map(|ack| ack.success()).unwrap_or(false)
}

/// An executed session: (input line, output line) pairs in order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    pub entries: Vec<(String, String)>,
}

impl Transcript {
    pub fn outputs(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(_, out)| out.as_str())
    }

    /// True when every executed line succeeded.
    pub fn all_succeeded(&self) -> bool {
        self.outputs().all(line_succeeded)
    }
}

/// Execute script text: one command per line, `#` comments and blank
/// lines skipped, never stopping early. Failed acks and parse errors are
/// recorded and execution continues.
pub fn run_script_text(emu: &mut Emu, text: &str) -> Transcript {
    let mut transcript = Transcript::default();
    for line in script_lines(text) {
        let output = run_line(emu, line);
        transcript.entries.push((line.to_string(), output));
    }
    transcript
}

/// Like [`run_script_text`], reading the script from a file.
pub fn run_script(emu: &mut Emu, path: &Path) -> io::Result<Transcript> {
    let text = fs::read_to_string(path)?;
    Ok(run_script_text(emu, &text))
}

/// The executable lines of a script.
pub fn script_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
}

/// Local display helper for `--pretty`: a successful `getInfo` ack gets
/// its XML payload reprinted indented underneath the raw line. Everything
/// else passes through untouched. The wire format never changes.
pub fn pretty_response(line: &str) -> String {
    if let Ok(Ack::GetInfo { report: Some(xml), ok: true, .. }) = parse_ack(line) {
        if let Ok(report) = parse_report(&xml) {
            return format!("{line}\n{}", serialize_report(&report, ReportMode::Pretty));
        }
    }
    line.to_string()
}
