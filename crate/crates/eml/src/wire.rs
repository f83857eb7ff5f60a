//! The TCP line protocol: bare UTF-8 text lines, LF-terminated, one
//! output line per input line. No framing, no greeting — the command
//! grammar is already line-delimited.
//!
//! The server accepts any number of connections; every inbound line is
//! queued onto a single executor thread, so commands interleave whole and
//! the total order is exactly arrival order. Replies go back on the
//! connection that sent the line. On clean shutdown the final state is
//! saved to the snapshot path, if one was given.

use std::io::{self, BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;
use std::sync::Arc;
use std::thread::{self, JoinHandle};
use std::time::Duration;

use thiserror::Error;

use crate::console::run_line;
use crate::exec::Emu;
use crate::snapshot::SnapshotError;

const POLL_INTERVAL: Duration = Duration::from_millis(25);
/// Lines longer than this are refused; nothing legitimate comes close.
const MAX_LINE_BYTES: usize = 1 << 20;

#[derive(Debug, Error)]
pub enum WireError {
    #[error("cannot listen on {addr}: {source}")]
    BindFailure { addr: String, source: io::Error },
    #[error("cannot connect to {addr}: {source}")]
    ConnectFailure { addr: String, source: io::Error },
    #[error("connection closed by peer")]
    Disconnected,
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Snapshot(#[from] SnapshotError),
}

struct Request {
    line: String,
    reply: mpsc::Sender<String>,
}

/// A running server. Dropping it abandons the threads; call
/// [`Server::shutdown`] to stop accepting, drain in-flight commands,
/// save the snapshot, and get the final state back.
pub struct Server {
    addr: SocketAddr,
    stop: Arc<AtomicBool>,
    accept_thread: JoinHandle<()>,
    exec_thread: JoinHandle<Result<Emu, SnapshotError>>,
    queue: mpsc::Sender<Request>,
}

impl Server {
    /// Bind and start serving `emu` on `listen` (e.g. `127.0.0.1:7033`,
    /// port 0 for an ephemeral port).
    pub fn start(
        emu: Emu,
        listen: &str,
        snapshot_path: Option<PathBuf>,
    ) -> Result<Server, WireError> {
        let listener = TcpListener::bind(listen).map_err(|source| WireError::BindFailure {
            addr: listen.to_string(),
            source,
        })?;
        let addr = listener.local_addr()?;
        listener.set_nonblocking(true)?;

        let stop = Arc::new(AtomicBool::new(false));
        let (queue, requests) = mpsc::channel::<Request>();

        let exec_thread = thread::spawn(move || {
            let mut emu = emu;
            for request in requests {
                let output = run_line(&mut emu, &request.line);
                // A vanished connection is its own problem; keep serving.
                let _ = request.reply.send(output);
            }
            if let Some(path) = snapshot_path {
                emu.to_snapshot().save(&path)?;
            }
            Ok(emu)
        });

        let accept_stop = Arc::clone(&stop);
        let accept_queue = queue.clone();
        let accept_thread = thread::spawn(move || {
            let mut handlers = Vec::new();
            loop {
                if accept_stop.load(Ordering::SeqCst) {
                    break;
                }
                match listener.accept() {
                    Ok((stream, _)) => {
                        let queue = accept_queue.clone();
                        let stop = Arc::clone(&accept_stop);
                        handlers.push(thread::spawn(move || serve_connection(stream, queue, stop)));
                    }
                    Err(e) if e.kind() == io::ErrorKind::WouldBlock => {
                        thread::sleep(POLL_INTERVAL);
                    }
                    Err(_) => thread::sleep(POLL_INTERVAL),
                }
            }
            drop(accept_queue);
            for handler in handlers {
                let _ = handler.join();
            }
        });

        Ok(Server {
            addr,
            stop,
            accept_thread,
            exec_thread,
            queue,
        })
    }

    pub fn local_addr(&self) -> SocketAddr {
        self.addr
    }

    /// Stop accepting, wait for open connections to wind down, drain the
    /// queue, save the snapshot, and return the final state.
    pub fn shutdown(self) -> Result<Emu, WireError> {
        self.stop.store(true, Ordering::SeqCst);
        let _ = self.accept_thread.join();
        drop(self.queue);
        match self.exec_thread.join() {
            Ok(emu) => Ok(emu?),
            Err(_) => Err(WireError::Io(io::Error::other("executor thread panicked"))),
        }
    }
}

/// One connection: read a line, queue it, write the reply back. I/O
/// trouble closes only this connection.
fn serve_connection(stream: TcpStream, queue: mpsc::Sender<Request>, stop: Arc<AtomicBool>) {
    let _ = stream.set_read_timeout(Some(POLL_INTERVAL));
    let _ = stream.set_nodelay(true);
    let mut writer = match stream.try_clone() {
        Ok(w) => w,
        Err(_) => return,
    };
    let mut reader = BufReader::new(stream);
    let mut buf = Vec::new();

    loop {
        buf.clear();
        let outcome = read_line_bytes(&mut reader, &mut buf, &stop);
        if matches!(outcome, ReadOutcome::Close) {
            return;
        }
        let output = match decode_line(&buf) {
            Ok(line) => {
                let (reply_tx, reply_rx) = mpsc::channel();
                if queue
                    .send(Request {
                        line,
                        reply: reply_tx,
                    })
                    .is_err()
                {
                    return; // server shutting down
                }
                match reply_rx.recv() {
                    Ok(output) => output,
                    Err(_) => return,
                }
            }
            Err(code) => format!("error: {code}"),
        };
        if writer
            .write_all(output.as_bytes())
            .and_then(|_| writer.write_all(b"\n"))
            .and_then(|_| writer.flush())
            .is_err()
        {
            return;
        }
        if matches!(outcome, ReadOutcome::Eof) {
            return;
        }
    }
}

enum ReadOutcome {
    /// A complete LF-terminated line sits in the buffer.
    Line,
    /// EOF hit with unterminated bytes pending; process them, then close.
    Eof,
    /// Nothing to process; close the connection.
    Close,
}

/// Accumulate one line, polling the stop flag across read timeouts.
fn read_line_bytes(
    reader: &mut BufReader<TcpStream>,
    buf: &mut Vec<u8>,
    stop: &AtomicBool,
) -> ReadOutcome {
    loop {
        match reader.read_until(b'\n', buf) {
            Ok(0) => {
                return if buf.is_empty() {
                    ReadOutcome::Close
                } else {
                    ReadOutcome::Eof
                }
            }
            Ok(_) => {
                if buf.last() == Some(&b'\n') {
                    buf.pop();
                    return ReadOutcome::Line;
                }
                // Interrupted mid-line; keep reading.
            }
            Err(e)
                if e.kind() == io::ErrorKind::WouldBlock
                    || e.kind() == io::ErrorKind::TimedOut =>
            {
                if stop.load(Ordering::SeqCst) {
                    return ReadOutcome::Close;
                }
            }
            Err(_) => return ReadOutcome::Close,
        }
        if buf.len() > MAX_LINE_BYTES {
            return ReadOutcome::Close;
        }
    }
}

fn decode_line(buf: &[u8]) -> Result<String, &'static str> {
    let buf = match buf.last() {
        Some(b'\r') => &buf[..buf.len() - 1],
        _ => buf,
    };
    match std::str::from_utf8(buf) {
        Ok(s) => Ok(s.to_string()),
        Err(_) => Err("InvalidUtf8"),
    }
}

/// A client connection speaking the line protocol.
pub struct Connection {
    reader: BufReader<TcpStream>,
    writer: TcpStream,
}

impl Connection {
    pub fn connect(addr: &str) -> Result<Connection, WireError> {
        let mut last_err = None;
        let addrs = addr
            .to_socket_addrs()
            .map_err(|source| WireError::ConnectFailure {
                addr: addr.to_string(),
                source,
            })?;
        for candidate in addrs {
            match TcpStream::connect(candidate) {
                Ok(stream) => {
                    stream.set_nodelay(true)?;
                    let writer = stream.try_clone()?;
                    return Ok(Connection {
                        reader: BufReader::new(stream),
                        writer,
                    });
                }
                Err(e) => last_err = Some(e),
            }
        }
        Err(WireError::ConnectFailure {
            addr: addr.to_string(),
            source: last_err.unwrap_or_else(|| io::Error::other("no addresses resolved")),
        })
    }

    /// Send one line, wait for its one-line response.
    pub fn roundtrip(&mut self, line: &str) -> Result<String, WireError> {
        self.writer.write_all(line.as_bytes())?;
        self.writer.write_all(b"\n")?;
        self.writer.flush()?;
        let mut response = String::new();
        let n = self.reader.read_line(&mut response)?;
        if n == 0 {
            return Err(WireError::Disconnected);
        }
        while response.ends_with('\n') || response.ends_with('\r') {
            response.pop();
        }
        Ok(response)
    }
}

/// Raw byte exchange used by tests probing the line discipline.
pub fn raw_roundtrip(addr: &SocketAddr, payload: &[u8]) -> io::Result<Vec<u8>> {
    let mut stream = TcpStream::connect(addr)?;
    stream.write_all(payload)?;
    stream.flush()?;
    let mut response = Vec::new();
    let mut reader = BufReader::new(&mut stream);
    reader.read_until(b'\n', &mut response)?;
    Ok(response)
}
