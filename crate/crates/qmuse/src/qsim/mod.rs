//! Dense state-vector simulation of small quantum circuits with shot-based
//! terminal measurement. Execution substrate for the hyper-die and the cube
//! walk.

mod backend;
mod circuit;
mod gate;
mod rng;
mod state;

pub use backend::{run_circuit, Backend, BackendError, LocalBackend};
pub use circuit::{most_frequent, Circuit, Counts};
pub use gate::{Gate, GateKind};
pub use rng::{derive_seed, shot_rng, SimRng};
pub use state::{apply_gate, prepare_basis, StateVector, MAX_QUBITS};

pub use num_complex::Complex64;

/// Errors raised by the simulator proper.
#[derive(Debug, thiserror::Error)]
pub enum QsimError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
