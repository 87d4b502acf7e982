//! The 9-qubit quantum hyper-die: put nine qubits in superposition, measure
//! once, assemble 3-bit codes from triples of the measured bits, and use
//! each code as an index into a bank of synthesis parameter lists.

use serde::{Deserialize, Serialize};

use crate::qsim::{Backend, BackendError, Circuit, Gate};
use crate::voice::{Adsr, VoicePatch};

pub const DIE_QUBITS: usize = 9;

#[derive(Debug, thiserror::Error)]
pub enum DieError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error(transparent)]
    Backend(#[from] BackendError),
}

/// One hyper-die outcome: nine classical bits ordered [C8, C7, ..., C0].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DieMeasurement {
    bits: [u8; DIE_QUBITS],
}

impl DieMeasurement {
    /// Build from the list form [C8, C7, ..., C0].
    pub fn new(bits: [u8; DIE_QUBITS]) -> Result<Self, DieError> {
        if bits.iter().any(|&b| b > 1) {
            return Err(DieError::InvalidArgument(
                "measurement bits must be 0 or 1".into(),
            ));
        }
        Ok(Self { bits })
    }

    /// The value of C_i (label index, not list position).
    pub fn c(&self, i: usize) -> u8 {
        self.bits[DIE_QUBITS - 1 - i]
    }

    /// The list form [C8, C7, ..., C0].
    pub fn bits(&self) -> [u8; DIE_QUBITS] {
        self.bits
    }
}

/// Couples one synthesis parameter with the measurement triple whose bits
/// form its retrieval code, most significant bit first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeRule {
    pub parameter: String,
    pub triple: [usize; 3],
}

impl CodeRule {
    fn new(parameter: &str, triple: [usize; 3]) -> Self {
        Self {
            parameter: parameter.to_string(),
            triple,
        }
    }
}

/// The default rule set: 21 parameters, each coupled with a unique triple.
/// Start/end pairs of one control use mirrored triples.
pub fn canonical_rules() -> Vec<CodeRule> {
    vec![
        CodeRule::new("fq1s", [8, 7, 6]),
        CodeRule::new("fq1e", [6, 7, 8]),
        CodeRule::new("fq2s", [5, 4, 3]),
        CodeRule::new("fq2e", [3, 4, 5]),
        CodeRule::new("fq3s", [2, 1, 0]),
        CodeRule::new("fq3e", [0, 1, 2]),
        CodeRule::new("amp1s", [7, 6, 5]),
        CodeRule::new("amp1e", [5, 6, 7]),
        CodeRule::new("amp2s", [4, 3, 2]),
        CodeRule::new("amp2e", [2, 3, 4]),
        CodeRule::new("amp3s", [8, 5, 2]),
        CodeRule::new("amp3e", [2, 5, 8]),
        CodeRule::new("bw1s", [7, 4, 3]),
        CodeRule::new("bw1e", [3, 4, 7]),
        CodeRule::new("bw2s", [6, 3, 0]),
        CodeRule::new("bw2e", [0, 3, 6]),
        CodeRule::new("bw3s", [8, 7, 0]),
        CodeRule::new("bw3e", [0, 7, 8]),
        CodeRule::new("fnds", [8, 1, 0]),
        CodeRule::new("fnde", [0, 1, 8]),
        CodeRule::new("dur", [5, 3, 1]),
    ]
}

/// Eight candidate values per parameter family; a 3-bit code selects one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterBank {
    pub fnd: [f64; 8],
    pub dur: [f64; 8],
    pub fq1: [f64; 8],
    pub fq2: [f64; 8],
    pub fq3: [f64; 8],
    pub amp1: [f64; 8],
    pub amp2: [f64; 8],
    pub amp3: [f64; 8],
    pub bw1: [f64; 8],
    pub bw2: [f64; 8],
    pub bw3: [f64; 8],
}

impl Default for ParameterBank {
    fn default() -> Self {
        Self {
            fnd: [277.2, 185.0, 207.6, 415.3, 155.6, 311.2, 369.9, 233.1],
            dur: [3.25, 2.0, 2.75, 4.0, 1.5, 3.75, 2.5, 4.5],
            fq1: [310.0, 270.0, 290.0, 350.0, 650.0, 400.0, 430.0, 470.0],
            fq2: [600.0, 1150.0, 800.0, 1870.0, 1080.0, 1620.0, 1700.0, 1040.0],
            fq3: [
                2250.0, 2100.0, 2800.0, 2650.0, 2500.0, 2900.0, 2600.0, 2750.0,
            ],
            amp1: [0.0; 8],
            amp2: [-15.0, -7.0, -11.0, -6.0, -14.0, -9.0, -20.0, -30.0],
            amp3: [-9.0, -21.0, -12.0, -32.0, -17.0, -16.0, -10.0, -18.0],
            bw1: [35.0, 60.0, 45.0, 70.0, 80.0, 75.0, 58.0, 85.0],
            bw2: [65.0, 70.0, 90.0, 75.0, 83.0, 95.0, 60.0, 87.0],
            bw3: [128.0, 115.0, 110.0, 112.0, 98.0, 104.0, 124.0, 120.0],
        }
    }
}

impl ParameterBank {
    /// The value list behind a parameter key such as `fq2s` or `dur`.
    pub fn family(&self, parameter: &str) -> Option<&[f64; 8]> {
        let family_name = match parameter {
            "dur" => "dur",
            _ if parameter.len() >= 2 => parameter.strip_suffix(['s', 'e'])?,
            _ => return None,
        };
        match family_name {
            "fnd" => Some(&self.fnd),
            "dur" => Some(&self.dur),
            "fq1" => Some(&self.fq1),
            "fq2" => Some(&self.fq2),
            "fq3" => Some(&self.fq3),
            "amp1" => Some(&self.amp1),
            "amp2" => Some(&self.amp2),
            "amp3" => Some(&self.amp3),
            "bw1" => Some(&self.bw1),
            "bw2" => Some(&self.bw2),
            "bw3" => Some(&self.bw3),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), DieError> {
        let positive = |name: &str, list: &[f64; 8]| {
            if list.iter().any(|&v| v <= 0.0 || !v.is_finite()) {
                Err(DieError::Configuration(format!(
                    "{name} entries must be positive"
                )))
            } else {
                Ok(())
            }
        };
        positive("fnd", &self.fnd)?;
        positive("dur", &self.dur)?;
        for (name, list) in [("fq1", &self.fq1), ("fq2", &self.fq2), ("fq3", &self.fq3)] {
            positive(name, list)?;
        }
        for (name, list) in [("bw1", &self.bw1), ("bw2", &self.bw2), ("bw3", &self.bw3)] {
            positive(name, list)?;
        }
        for (name, list) in [
            ("amp1", &self.amp1),
            ("amp2", &self.amp2),
            ("amp3", &self.amp3),
        ] {
            if list.iter().any(|&v| v > 0.0 || !v.is_finite()) {
                return Err(DieError::Configuration(format!(
                    "{name} entries are attenuations and must be <= 0"
                )));
            }
        }
        Ok(())
    }
}

/// The hyper-die circuit: a Hadamard on each of the nine qubits, measured
/// so that result keys read C8 C7 ... C0.
pub fn die_circuit() -> Circuit {
    let mut circuit = Circuit::new(DIE_QUBITS);
    for q in 0..DIE_QUBITS {
        circuit = circuit.gate(Gate::h(q));
    }
    circuit.measure((0..DIE_QUBITS).rev())
}

/// Roll the die: one shot of [`die_circuit`] on `backend`.
///
/// One shot, never a most-frequent vote; repeated shots would de-randomize
/// the die.
pub fn roll_die(backend: &dyn Backend, seed: u64) -> Result<DieMeasurement, DieError> {
    let counts = backend.execute(&die_circuit(), 1, seed)?;
    let key = counts
        .counts
        .keys()
        .next()
        .ok_or_else(|| DieError::InvalidArgument("backend returned empty counts".into()))?;
    parse_measurement(key)
}

fn parse_measurement(key: &str) -> Result<DieMeasurement, DieError> {
    if key.len() != DIE_QUBITS {
        return Err(DieError::InvalidArgument(format!(
            "measurement key {key:?} does not have {DIE_QUBITS} bits"
        )));
    }
    let mut bits = [0u8; DIE_QUBITS];
    for (slot, ch) in bits.iter_mut().zip(key.chars()) {
        *slot = match ch {
            '0' => 0,
            '1' => 1,
            other => {
                return Err(DieError::InvalidArgument(format!(
                    "measurement key contains {other:?}"
                )))
            }
        };
    }
    DieMeasurement::new(bits)
}

/// Read the 3-bit code (C_i C_j C_k) from a measurement, leftmost bit most
/// significant, giving an index 0..=7.
pub fn assemble_code(meas: &DieMeasurement, triple: [usize; 3]) -> Result<usize, DieError> {
    if triple.iter().any(|&i| i >= DIE_QUBITS) {
        return Err(DieError::InvalidArgument(format!(
            "triple {triple:?} has an index outside 0..={}",
            DIE_QUBITS - 1
        )));
    }
    let [i, j, k] = triple;
    Ok(usize::from(meas.c(i)) * 4 + usize::from(meas.c(j)) * 2 + usize::from(meas.c(k)))
}

/// Retrieve a full synthesis patch: each rule resolves one parameter by
/// indexing its bank family with the rule's assembled code. Parameters
/// without a rule keep the voice module defaults, and the envelope scales
/// with the retrieved duration.
pub fn retrieve_patch(
    meas: &DieMeasurement,
    bank: &ParameterBank,
    rules: &[CodeRule],
) -> Result<VoicePatch, DieError> {
    let mut patch = VoicePatch::default();
    for rule in rules {
        let family = bank.family(&rule.parameter).ok_or_else(|| {
            DieError::Configuration(format!("unknown parameter key {:?}", rule.parameter))
        })?;
        let value = family[assemble_code(meas, rule.triple)?];
        set_parameter(&mut patch, &rule.parameter, value)?;
    }
    patch.adsr = Adsr::for_duration(patch.dur);
    patch
        .validate()
        .map_err(|e| DieError::Configuration(format!("retrieved patch is invalid: {e}")))?;
    Ok(patch)
}

fn set_parameter(patch: &mut VoicePatch, parameter: &str, value: f64) -> Result<(), DieError> {
    match parameter {
        "fnds" => patch.fnd_start = value,
        "fnde" => patch.fnd_end = value,
        "dur" => patch.dur = value,
        _ => {
            let (family, start) = parameter
                .strip_suffix('s')
                .map(|f| (f, true))
                .or_else(|| parameter.strip_suffix('e').map(|f| (f, false)))
                .ok_or_else(|| {
                    DieError::Configuration(format!("unknown parameter key {parameter:?}"))
                })?;
            let index = match family.as_bytes() {
                [_, .., digit @ b'1'..=b'5'] => usize::from(digit - b'1'),
                _ => {
                    return Err(DieError::Configuration(format!(
                        "unknown parameter key {parameter:?}"
                    )))
                }
            };
            let formant = &mut patch.formants[index];
            match (family.trim_end_matches(|c: char| c.is_ascii_digit()), start) {
                ("fq", true) => formant.fq_start = value,
                ("fq", false) => formant.fq_end = value,
                ("amp", true) => formant.amp_start = value,
                ("amp", false) => formant.amp_end = value,
                ("bw", true) => formant.bw_start = value,
                ("bw", false) => formant.bw_end = value,
                _ => {
                    return Err(DieError::Configuration(format!(
                        "unknown parameter key {parameter:?}"
                    )))
                }
            }
        }
    }
    Ok(())
}
