use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use super::gate::{Gate, GateKind};
use super::QsimError;

/// Hard cap on register width; 2^12 = 4096 amplitudes keeps everything exact
/// and instantaneous, and the built-in circuits need at most 9 qubits.
pub const MAX_QUBITS: usize = 12;

/// Dense complex state of an n-qubit register.
///
/// Qubit `q_i` carries bit weight `2^i` in the amplitude index, i.e. strings
/// are enumerated from the right end. Every bitstring crossing this module's
/// boundary is written most-significant qubit first, so for a 3-qubit
/// register the string `"110"` means q2=1, q1=1, q0=0 and addresses index 6.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Parse a boundary bitstring (most-significant qubit first) into a basis
/// index under the bit-weight convention above.
pub(crate) fn code_to_index(num_qubits: usize, code: &str) -> Result<usize, QsimError> {
    if code.len() != num_qubits {
        return Err(QsimError::InvalidArgument(format!(
            "basis code {code:?} has length {}, expected {num_qubits}",
            code.len()
        )));
    }
    let mut index = 0usize;
    for ch in code.chars() {
        index <<= 1;
        match ch {
            '0' => {}
            '1' => index |= 1,
            other => {
                return Err(QsimError::InvalidArgument(format!(
                    "basis code {code:?} contains {other:?}; only '0' and '1' are allowed"
                )))
            }
        }
    }
    Ok(index)
}

impl StateVector {
    /// Prepare the basis state described by `code` (e.g. `"10"` for q1=1, q0=0).
    pub fn prepare_basis(num_qubits: usize, code: &str) -> Result<Self, QsimError> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(QsimError::InvalidArgument(format!(
                "num_qubits must be in 1..={MAX_QUBITS}, got {num_qubits}"
            )));
        }
        let index = code_to_index(num_qubits, code)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// The all-zeros state |0...0>.
    pub fn zero(num_qubits: usize) -> Result<Self, QsimError> {
        Self::prepare_basis(num_qubits, &"0".repeat(num_qubits))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// |a_i|² for one basis index.
    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    /// |a_i|² for every basis index, in index order.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }

    /// Σ |a_i|²; 1 within 1e-10 for any state produced by this module.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    /// Apply one gate in place.
    ///
    /// X, CX and CCX permute amplitudes and are exact; H and the rotations
    /// preserve the norm to within floating-point rounding.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), QsimError> {
        gate.validate(self.num_qubits)?;
        match gate.kind {
            GateKind::X => self.flip_controlled(gate.target, &[]),
            GateKind::CX => self.flip_controlled(gate.target, &gate.controls),
            GateKind::CCX => self.flip_controlled(gate.target, &gate.controls),
            GateKind::H => self.apply_single(
                gate.target,
                [
                    Complex64::new(FRAC_1_SQRT_2, 0.0),
                    Complex64::new(FRAC_1_SQRT_2, 0.0),
                    Complex64::new(FRAC_1_SQRT_2, 0.0),
                    Complex64::new(-FRAC_1_SQRT_2, 0.0),
                ],
            ),
            GateKind::RX => {
                let half = gate.theta.expect("validated") / 2.0;
                let (cos, sin) = (half.cos(), half.sin());
                self.apply_single(
                    gate.target,
                    [
                        Complex64::new(cos, 0.0),
                        Complex64::new(0.0, -sin),
                        Complex64::new(0.0, -sin),
                        Complex64::new(cos, 0.0),
                    ],
                )
            }
            GateKind::RY => {
                let half = gate.theta.expect("validated") / 2.0;
                let (cos, sin) = (half.cos(), half.sin());
                self.apply_single(
                    gate.target,
                    [
                        Complex64::new(cos, 0.0),
                        Complex64::new(-sin, 0.0),
                        Complex64::new(sin, 0.0),
                        Complex64::new(cos, 0.0),
                    ],
                )
            }
            GateKind::RZ => {
                let half = gate.theta.expect("validated") / 2.0;
                self.apply_single(
                    gate.target,
                    [
                        Complex64::from_polar(1.0, -half),
                        Complex64::new(0.0, 0.0),
                        Complex64::new(0.0, 0.0),
                        Complex64::from_polar(1.0, half),
                    ],
                )
            }
        }
        Ok(())
    }

    /// 2x2 unitary `[u00 u01; u10 u11]` on `target`.
    fn apply_single(&mut self, target: usize, u: [Complex64; 4]) {
        let step = 1usize << target;
        for block in (0..self.amplitudes.len()).step_by(2 * step) {
            for offset in 0..step {
                let lo = block + offset;
                let hi = lo + step;
                let a = self.amplitudes[lo];
                let b = self.amplitudes[hi];
                self.amplitudes[lo] = u[0] * a + u[1] * b;
                self.amplitudes[hi] = u[2] * a + u[3] * b;
            }
        }
    }

    /// X on `target` for every basis state whose `controls` are all 1.
    /// A pure swap of amplitude pairs, so basis states stay exact.
    fn flip_controlled(&mut self, target: usize, controls: &[usize]) {
        let target_mask = 1usize << target;
        let control_mask: usize = controls.iter().map(|&c| 1usize << c).sum();
        for i in 0..self.amplitudes.len() {
            if i & target_mask == 0 && i & control_mask == control_mask {
                self.amplitudes.swap(i, i | target_mask);
            }
        }
    }
}

/// Functional form of [`StateVector::apply_gate`].
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector, QsimError> {
    let mut next = state.clone();
    next.apply_gate(gate)?;
    Ok(next)
}

/// Functional form of [`StateVector::prepare_basis`].
pub fn prepare_basis(num_qubits: usize, code: &str) -> Result<StateVector, QsimError> {
    StateVector::prepare_basis(num_qubits, code)
}
