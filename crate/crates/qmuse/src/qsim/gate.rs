use serde::{Deserialize, Serialize};

use super::QsimError;

/// The gate vocabulary of the simulator.
///
/// `X`, `H` and the axis rotations act on a single target qubit; `CX` takes
/// one control, `CCX` (Toffoli) two. Nothing else is needed by the die or
/// walk circuits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateKind {
    X,
    H,
    RX,
    RY,
    RZ,
    CX,
    CCX,
}

impl GateKind {
    fn expected_controls(self) -> usize {
        match self {
            GateKind::X | GateKind::H | GateKind::RX | GateKind::RY | GateKind::RZ => 0,
            GateKind::CX => 1,
            GateKind::CCX => 2,
        }
    }

    fn takes_theta(self) -> bool {
        matches!(self, GateKind::RX | GateKind::RY | GateKind::RZ)
    }
}

/// One gate application: which unitary, where, and (for rotations) how far.
///
/// The struct mirrors the wire encoding used by the TCP backend:
/// `{kind, theta?, target, controls[]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    /// Rotation angle in radians; present exactly for RX/RY/RZ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    pub target: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub controls: Vec<usize>,
}

impl Gate {
    pub fn x(target: usize) -> Self {
        Self {
            kind: GateKind::X,
            theta: None,
            target,
            controls: Vec::new(),
        }
    }

    pub fn h(target: usize) -> Self {
        Self {
            kind: GateKind::H,
            theta: None,
            target,
            controls: Vec::new(),
        }
    }

    pub fn rx(theta: f64, target: usize) -> Self {
        Self {
            kind: GateKind::RX,
            theta: Some(theta),
            target,
            controls: Vec::new(),
        }
    }

    pub fn ry(theta: f64, target: usize) -> Self {
        Self {
            kind: GateKind::RY,
            theta: Some(theta),
            target,
            controls: Vec::new(),
        }
    }

    pub fn rz(theta: f64, target: usize) -> Self {
        Self {
            kind: GateKind::RZ,
            theta: Some(theta),
            target,
            controls: Vec::new(),
        }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self {
            kind: GateKind::CX,
            theta: None,
            target,
            controls: vec![control],
        }
    }

    pub fn ccx(control_a: usize, control_b: usize, target: usize) -> Self {
        Self {
            kind: GateKind::CCX,
            theta: None,
            target,
            controls: vec![control_a, control_b],
        }
    }

    /// Check the gate against a register of `num_qubits` qubits.
    pub fn validate(&self, num_qubits: usize) -> Result<(), QsimError> {
        let expected = self.kind.expected_controls();
        if self.controls.len() != expected {
            return Err(QsimError::InvalidArgument(format!(
                "{:?} gate takes {} control(s), got {}",
                self.kind,
                expected,
                self.controls.len()
            )));
        }
        if self.kind.takes_theta() != self.theta.is_some() {
            return Err(QsimError::InvalidArgument(format!(
                "{:?} gate {} an angle",
                self.kind,
                if self.kind.takes_theta() {
                    "requires"
                } else {
                    "does not take"
                }
            )));
        }
        if let Some(theta) = self.theta {
            if !theta.is_finite() {
                return Err(QsimError::InvalidArgument(
                    "rotation angle must be finite".into(),
                ));
            }
        }
        for &q in std::iter::once(&self.target).chain(&self.controls) {
            if q >= num_qubits {
                return Err(QsimError::InvalidArgument(format!(
                    "qubit index {q} out of range for {num_qubits}-qubit register"
                )));
            }
        }
        for (i, &c) in self.controls.iter().enumerate() {
            if c == self.target || self.controls[..i].contains(&c) {
                return Err(QsimError::InvalidArgument(format!(
                    "duplicate qubit index {c} in gate"
                )));
            }
        }
        Ok(())
    }
}
