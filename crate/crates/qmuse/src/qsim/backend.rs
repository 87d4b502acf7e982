use std::collections::BTreeMap;

use rand::Rng;

use super::circuit::{Circuit, Counts};
use super::rng::shot_rng;
use super::QsimError;

/// Anything that can execute a circuit for a number of shots: the in-process
/// simulator here, or a remote server reached over TCP.
///
/// Implementations must be deterministic: the same (circuit, shots, seed)
/// always yields the same [`Counts`].
pub trait Backend: Send + Sync {
    fn execute(&self, circuit: &Circuit, shots: u64, seed: u64) -> Result<Counts, BackendError>;
}

/// Failure modes shared by every backend.
#[derive(Debug, thiserror::Error)]
pub enum BackendError {
    #[error(transparent)]
    Circuit(#[from] QsimError),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("remote error: {0}")]
    Remote(String),
}

/// The in-process state-vector simulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct LocalBackend;

impl Backend for LocalBackend {
    fn execute(&self, circuit: &Circuit, shots: u64, seed: u64) -> Result<Counts, BackendError> {
        Ok(run_circuit(circuit, shots, seed)?)
    }
}

/// Execute `circuit` for `shots` shots and histogram the measured bitstrings.
///
/// There is no mid-circuit measurement, so every shot sees the same final
/// state: it is computed once and each shot draws one sample from the
/// cumulative distribution of |a_i|². Shot i samples with its own RNG stream
/// derived from (seed, i), which makes the histogram independent of
/// evaluation order.
pub fn run_circuit(circuit: &Circuit, shots: u64, seed: u64) -> Result<Counts, QsimError> {
    if shots == 0 {
        return Err(QsimError::InvalidArgument(
            "invalid shots: expected at least 1, got 0".into(),
        ));
    }
    let state = circuit.final_statevector()?;

    let mut cumulative = Vec::with_capacity(state.amplitudes().len());
    let mut acc = 0.0;
    for p in state.probabilities() {
        acc += p;
        cumulative.push(acc);
    }

    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for shot in 0..shots {
        let u: f64 = shot_rng(seed, shot).gen::<f64>() * acc;
        let index = cumulative
            .partition_point(|&c| c <= u)
            .min(cumulative.len() - 1);
        *counts.entry(circuit.key_for_index(index)).or_insert(0) += 1;
    }
    Ok(Counts {
        counts,
        total_shots: shots,
    })
}
