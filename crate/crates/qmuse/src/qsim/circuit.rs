use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::gate::Gate;
use super::state::{StateVector, MAX_QUBITS};
use super::QsimError;

/// An ordered gate program: basis-state preparation, gates, then a single
/// terminal measurement of `measured_qubits`.
///
/// `initial_code` is written most-significant qubit first (see
/// [`StateVector`]). Measurement keys are built in `measured_qubits` order:
/// character j of a result key is the outcome of qubit `measured_qubits[j]`,
/// which lets callers choose how their bitstrings read.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub num_qubits: usize,
    pub initial_code: String,
    pub gates: Vec<Gate>,
    pub measured_qubits: Vec<usize>,
}

impl Circuit {
    /// An empty circuit over the all-zeros initial state.
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            initial_code: "0".repeat(num_qubits),
            gates: Vec::new(),
            measured_qubits: Vec::new(),
        }
    }

    pub fn with_initial_code(mut self, code: impl Into<String>) -> Self {
        self.initial_code = code.into();
        self
    }

    pub fn gate(mut self, gate: Gate) -> Self {
        self.gates.push(gate);
        self
    }

    pub fn measure(mut self, qubits: impl IntoIterator<Item = usize>) -> Self {
        self.measured_qubits.extend(qubits);
        self
    }

    /// Check every structural invariant needed before execution.
    pub fn validate(&self) -> Result<(), QsimError> {
        if self.num_qubits == 0 || self.num_qubits > MAX_QUBITS {
            return Err(QsimError::InvalidArgument(format!(
                "num_qubits must be in 1..={MAX_QUBITS}, got {}",
                self.num_qubits
            )));
        }
        super::state::code_to_index(self.num_qubits, &self.initial_code)?;
        for gate in &self.gates {
            gate.validate(self.num_qubits)?;
        }
        if self.measured_qubits.is_empty() {
            return Err(QsimError::InvalidArgument(
                "circuit measures no qubits".into(),
            ));
        }
        for &q in &self.measured_qubits {
            if q >= self.num_qubits {
                return Err(QsimError::InvalidArgument(format!(
                    "measured qubit {q} out of range for {}-qubit register",
                    self.num_qubits
                )));
            }
        }
        Ok(())
    }

    /// Run the gate program once and return the pre-measurement state.
    pub fn final_statevector(&self) -> Result<StateVector, QsimError> {
        self.validate()?;
        let mut state = StateVector::prepare_basis(self.num_qubits, &self.initial_code)?;
        for gate in &self.gates {
            state.apply_gate(gate)?;
        }
        Ok(state)
    }

    /// Project a basis index onto the measured qubits, in measurement order.
    pub(crate) fn key_for_index(&self, index: usize) -> String {
        self.measured_qubits
            .iter()
            .map(|&q| if index >> q & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

/// Shot histogram: how often each measured bitstring occurred.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub counts: BTreeMap<String, u64>,
    pub total_shots: u64,
}

impl Counts {
    pub fn get(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    /// Occurrence frequency of `key` in 0..=1.
    pub fn frequency(&self, key: &str) -> f64 {
        self.get(key) as f64 / self.total_shots as f64
    }
}

/// The key with the maximal count; ties go to the lexicographically
/// smallest key.
pub fn most_frequent(counts: &Counts) -> Result<String, QsimError> {
    let mut best: Option<(&String, u64)> = None;
    for (key, &n) in &counts.counts {
        // BTreeMap iterates keys in ascending order, so a strictly-greater
        // test keeps the smallest key among ties.
        if best.is_none_or(|(_, m)| n > m) {
            best = Some((key, n));
        }
    }
    best.map(|(key, _)| key.clone())
        .ok_or_else(|| QsimError::InvalidArgument("empty counts".into()))
}
