//! Client/server backend split: a TCP server that executes circuits on a
//! local backend, and a client-side [`Backend`] that forwards circuits to
//! such a server.
//!
//! The wire format is UTF-8 JSON, one object per LF-terminated line.
//! Request: `{"circuit": {...}, "shots": N, "seed": N}`. Response: either
//! `{"counts": {"counts": {...}, "total_shots": N}}` or
//! `{"error": "message"}` — exactly one per request, in request order.
//! A malformed request produces an error response and leaves the
//! connection open.

use std::convert::Infallible;
use std::io::{BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::qsim::{Backend, BackendError, Circuit, Counts};

/// Port used when an endpoint does not specify one.
pub const DEFAULT_PORT: u16 = 7117;
/// Environment variable overriding the client's default endpoint.
pub const ENDPOINT_ENV: &str = "QMUSE_ENDPOINT";
/// Client-side I/O timeout.
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Debug, thiserror::Error)]
pub enum NetError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("remote error: {0}")]
    Remote(String),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("bind error: {0}")]
    Bind(String),
}

/// One circuit execution request.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WireRequest {
    pub circuit: Circuit,
    pub shots: u64,
    pub seed: u64,
}

/// The reply to one request: a histogram or an error message.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum WireResponse {
    #[serde(rename = "counts")]
    Counts(Counts),
    #[serde(rename = "error")]
    Error(String),
}

/// Parse one request line. Exposed for fuzzing; must never panic.
pub fn parse_request_line(line: &str) -> Result<WireRequest, NetError> {
    serde_json::from_str(line).map_err(|e| NetError::Protocol(format!("bad request: {e}")))
}

/// Parse one response line. Exposed for fuzzing; must never panic.
pub fn parse_response_line(line: &str) -> Result<WireResponse, NetError> {
    serde_json::from_str(line).map_err(|e| NetError::Protocol(format!("bad response: {e}")))
}

/// A bound, not yet running, backend server.
pub struct Server {
    listener: TcpListener,
    backend: Arc<dyn Backend>,
}

impl Server {
    /// Bind `endpoint` (e.g. `"127.0.0.1:7117"`, or port 0 for an
    /// OS-assigned port).
    pub fn bind(endpoint: &str, backend: Arc<dyn Backend>) -> Result<Self, NetError> {
        let listener = TcpListener::bind(endpoint)
            .map_err(|e| NetError::Bind(format!("cannot bind {endpoint}: {e}")))?;
        Ok(Self { listener, backend })
    }

    pub fn local_addr(&self) -> Result<SocketAddr, NetError> {
        self.listener
            .local_addr()
            .map_err(|e| NetError::Bind(e.to_string()))
    }

    /// Accept connections forever, one thread per connection. Requests on a
    /// connection are processed serially, responses written in order.
    pub fn run(self) -> Result<Infallible, NetError> {
        loop {
            match self.listener.accept() {
                Ok((stream, _peer)) => {
                    let backend = Arc::clone(&self.backend);
                    std::thread::spawn(move || handle_connection(stream, backend));
                }
                // Accept failures are transient (fd pressure, aborted
                // handshake); keep serving.
                Err(_) => continue,
            }
        }
    }
}

/// Bind and serve; runs until the process is stopped.
pub fn serve(endpoint: &str, backend: Arc<dyn Backend>) -> Result<Infallible, NetError> {
    Server::bind(endpoint, backend)?.run()
}

fn handle_connection(stream: TcpStream, backend: Arc<dyn Backend>) {
    let reader = match stream.try_clone() {
        Ok(s) => BufReader::new(s),
        Err(_) => return,
    };
    let mut writer = stream;
    for line in reader.lines() {
        let line = match line {
            Ok(line) => line,
            Err(_) => return,
        };
        if line.trim().is_empty() {
            continue;
        }
        let response = match parse_request_line(&line) {
            Ok(request) => match backend.execute(&request.circuit, request.shots, request.seed) {
                Ok(counts) => WireResponse::Counts(counts),
                Err(e) => WireResponse::Error(e.to_string()),
            },
            Err(e) => WireResponse::Error(e.to_string()),
        };
        let mut payload = match serde_json::to_string(&response) {
            Ok(json) => json,
            Err(_) => return,
        };
        payload.push('\n');
        if writer.write_all(payload.as_bytes()).is_err() {
            return;
        }
    }
}

fn resolve(endpoint: &str) -> Result<SocketAddr, NetError> {
    endpoint
        .to_socket_addrs()
        .map_err(|e| NetError::Transport(format!("cannot resolve {endpoint}: {e}")))?
        .next()
        .ok_or_else(|| NetError::Transport(format!("{endpoint} resolves to no address")))
}

/// Send one circuit to a server and wait for its counts.
pub fn remote_execute(
    endpoint: &str,
    circuit: &Circuit,
    shots: u64,
    seed: u64,
) -> Result<Counts, NetError> {
    remote_execute_with_timeout(endpoint, circuit, shots, seed, DEFAULT_TIMEOUT)
}

pub fn remote_execute_with_timeout(
    endpoint: &str,
    circuit: &Circuit,
    shots: u64,
    seed: u64,
    timeout: Duration,
) -> Result<Counts, NetError> {
    let addr = resolve(endpoint)?;
    let mut stream = TcpStream::connect_timeout(&addr, timeout)
        .map_err(|e| NetError::Transport(format!("cannot connect to {endpoint}: {e}")))?;
    stream
        .set_read_timeout(Some(timeout))
        .and_then(|()| stream.set_write_timeout(Some(timeout)))
        .map_err(|e| NetError::Transport(e.to_string()))?;

    let request = WireRequest {
        circuit: circuit.clone(),
        shots,
        seed,
    };
    let mut payload = serde_json::to_string(&request)
        .map_err(|e| NetError::Protocol(format!("cannot encode request: {e}")))?;
    payload.push('\n');
    stream
        .write_all(payload.as_bytes())
        .map_err(|e| NetError::Transport(format!("send failed: {e}")))?;

    let mut line = String::new();
    BufReader::new(&mut stream)
        .read_line(&mut line)
        .map_err(|e| NetError::Transport(format!("receive failed: {e}")))?;
    if line.is_empty() {
        return Err(NetError::Transport("server closed the connection".into()));
    }
    match parse_response_line(&line)? {
        WireResponse::Counts(counts) => Ok(counts),
        WireResponse::Error(message) => Err(NetError::Remote(message)),
    }
}

/// A [`Backend`] that forwards every execution to a server.
#[derive(Clone, Debug)]
pub struct RemoteBackend {
    pub endpoint: String,
    pub timeout: Duration,
}

impl RemoteBackend {
    pub fn new(endpoint: impl Into<String>) -> Self {
        Self {
            endpoint: endpoint.into(),
            timeout: DEFAULT_TIMEOUT,
        }
    }

    /// Endpoint from the argument, else `QMUSE_ENDPOINT`, else localhost on
    /// the default port.
    pub fn from_env_or(endpoint: Option<String>) -> Self {
        let endpoint = endpoint
            .or_else(|| std::env::var(ENDPOINT_ENV).ok())
            .unwrap_or_else(|| format!("127.0.0.1:{DEFAULT_PORT}"));
        Self::new(endpoint)
    }
}

impl Backend for RemoteBackend {
    fn execute(&self, circuit: &Circuit, shots: u64, seed: u64) -> Result<Counts, BackendError> {
        remote_execute_with_timeout(&self.endpoint, circuit, shots, seed, self.timeout).map_err(
            |e| match e {
                NetError::Remote(msg) => BackendError::Remote(msg),
                other => BackendError::Transport(other.to_string()),
            },
        )
    }
}
