//! Quantum walk on the cube graph: three input qubits hold the current
//! vertex, two die qubits in superposition pick which input bit (if any) to
//! invert, and classical feedback re-arms the circuit between steps. Two
//! interleaved walks (pitch and duration) drive note generation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::qsim::{derive_seed, most_frequent, Backend, BackendError, Circuit, Gate};
use crate::score::{NoteEvent, Sequence};

#[derive(Debug, thiserror::Error)]
pub enum WalkError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error(transparent)]
    Backend(#[from] BackendError),
}

/// A cube vertex: three bits (q0, q1, q2), written q0 first ("q0q1q2").
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CubeCode(u8);

impl CubeCode {
    pub fn new(q0: u8, q1: u8, q2: u8) -> Result<Self, WalkError> {
        if q0 > 1 || q1 > 1 || q2 > 1 {
            return Err(WalkError::InvalidArgument(
                "cube code bits must be 0 or 1".into(),
            ));
        }
        Ok(Self(q0 | q1 << 1 | q2 << 2))
    }

    /// All eight vertices in numeric order.
    pub fn all() -> [CubeCode; 8] {
        [0, 1, 2, 3, 4, 5, 6, 7].map(CubeCode)
    }

    pub fn bit(self, i: usize) -> u8 {
        debug_assert!(i < 3);
        self.0 >> i & 1
    }

    pub fn flip(self, i: usize) -> Self {
        debug_assert!(i < 3);
        Self(self.0 ^ (1 << i))
    }

    /// Index with bit weight 2^i for qubit q_i; also the dictionary slot.
    pub fn value(self) -> usize {
        usize::from(self.0)
    }

    pub fn hamming_distance(self, other: CubeCode) -> u32 {
        (self.0 ^ other.0).count_ones()
    }
}

impl fmt::Display for CubeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.bit(0), self.bit(1), self.bit(2))
    }
}

impl fmt::Debug for CubeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CubeCode({self})")
    }
}

impl FromStr for CubeCode {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits: Vec<u8> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(WalkError::InvalidArgument(format!(
                    "cube code {s:?} contains {other:?}"
                ))),
            })
            .collect::<Result<_, _>>()?;
        match bits.as_slice() {
            [q0, q1, q2] => CubeCode::new(*q0, *q1, *q2),
            _ => Err(WalkError::InvalidArgument(format!(
                "cube code {s:?} must have exactly 3 bits"
            ))),
        }
    }
}

impl TryFrom<String> for CubeCode {
    type Error = WalkError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<CubeCode> for String {
    fn from(code: CubeCode) -> String {
        code.to_string()
    }
}

/// The two die qubits (q3, q4) after measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DieOutcome {
    pub d3: u8,
    pub d4: u8,
}

impl DieOutcome {
    pub fn new(d3: u8, d4: u8) -> Self {
        Self {
            d3: d3 & 1,
            d4: d4 & 1,
        }
    }
}

/// Classical reference model of one walk step: which input bit the die
/// outcome inverts. (0,1) flips q0, (0,0) flips q1, (1,1) flips q2 and
/// (1,0) stays put.
pub fn apply_die(code: CubeCode, die: DieOutcome) -> CubeCode {
    match (die.d3, die.d4) {
        (0, 1) => code.flip(0),
        (0, 0) => code.flip(1),
        (1, 1) => code.flip(2),
        _ => code,
    }
}

/// The controlled inversions shared by the real and forced-die circuits.
///
/// Sandwiching X gates turn the Toffolis into controls on the die patterns
/// (q3, q4) = (0,1), (0,0) and (1,1); the leftover pattern (1,0) matches no
/// gate and leaves the input untouched.
fn kernel_gates() -> Vec<Gate> {
    vec![
        Gate::x(3),
        Gate::ccx(3, 4, 0),
        Gate::x(3),
        Gate::x(3),
        Gate::x(4),
        Gate::ccx(3, 4, 1),
        Gate::x(4),
        Gate::x(3),
        Gate::ccx(3, 4, 2),
    ]
}

fn arm_input(code: CubeCode, d3: u8, d4: u8) -> String {
    // Circuit-boundary bitstrings read q4 q3 q2 q1 q0.
    format!("{}{}{}{}{}", d4, d3, code.bit(2), code.bit(1), code.bit(0))
}

/// The five-qubit walk circuit for one step from `code`: input qubits armed
/// to the vertex, H on both die qubits, the controlled inversions, and a
/// measurement of the input qubits only.
pub fn build_walk_circuit(code: CubeCode) -> Circuit {
    let mut circuit = Circuit::new(5)
        .with_initial_code(arm_input(code, 0, 0))
        .gate(Gate::h(3))
        .gate(Gate::h(4));
    for gate in kernel_gates() {
        circuit = circuit.gate(gate);
    }
    circuit.measure([0, 1, 2])
}

/// Test-harness variant of [`build_walk_circuit`] with the die qubits armed
/// to a fixed outcome instead of superposition; runs deterministically.
pub fn forced_walk_circuit(code: CubeCode, die: DieOutcome) -> Circuit {
    let mut circuit = Circuit::new(5).with_initial_code(arm_input(code, die.d3, die.d4));
    for gate in kernel_gates() {
        circuit = circuit.gate(gate);
    }
    circuit.measure([0, 1, 2])
}

/// Run one walk step: execute the circuit for `shots` and take the
/// most frequent measured vertex.
pub fn walk_step(
    backend: &dyn Backend,
    code: CubeCode,
    shots: u64,
    seed: u64,
) -> Result<CubeCode, WalkError> {
    let counts = backend.execute(&build_walk_circuit(code), shots, seed)?;
    let key = most_frequent(&counts).map_err(|e| WalkError::InvalidArgument(e.to_string()))?;
    key.parse()
}

/// Vertex-to-pitch dictionary; total over all eight codes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, u8>", into = "BTreeMap<String, u8>")]
pub struct PitchDictionary {
    notes: [u8; 8],
}

impl PitchDictionary {
    pub fn new(notes: [u8; 8]) -> Result<Self, WalkError> {
        if let Some(&bad) = notes.iter().find(|&&n| n > 127) {
            return Err(WalkError::Configuration(format!(
                "pitch {bad} outside MIDI range 0..=127"
            )));
        }
        Ok(Self { notes })
    }

    pub fn pitch(&self, code: CubeCode) -> u8 {
        self.notes[code.value()]
    }
}

impl Default for PitchDictionary {
    /// Semitone offsets over a base pitch with bit weights q0 -> +1,
    /// q1 -> +3, q2 -> +8, based at C4 = 60. Covers C4, C#4, D#4, E4,
    /// G#4, A4, B4 and C5.
    fn default() -> Self {
        Self::with_base(60).expect("base C4 stays in range")
    }
}

impl PitchDictionary {
    /// The default offset scheme over an arbitrary base note.
    pub fn with_base(base: u8) -> Result<Self, WalkError> {
        let mut notes = [0u8; 8];
        for code in CubeCode::all() {
            let offset = code.bit(0) + code.bit(1) * 3 + code.bit(2) * 8;
            let pitch = base
                .checked_add(offset)
                .filter(|&p| p <= 127)
                .ok_or_else(|| {
                    WalkError::Configuration(format!("base {base} pushes pitches past 127"))
                })?;
            notes[code.value()] = pitch;
        }
        Self::new(notes)
    }
}

impl TryFrom<BTreeMap<String, u8>> for PitchDictionary {
    type Error = WalkError;

    fn try_from(map: BTreeMap<String, u8>) -> Result<Self, Self::Error> {
        let mut notes = [0u8; 8];
        let mut seen = [false; 8];
        for (key, pitch) in map {
            let code: CubeCode = key.parse()?;
            notes[code.value()] = pitch;
            seen[code.value()] = true;
        }
        if seen != [true; 8] {
            return Err(WalkError::Configuration(
                "pitch dictionary must cover all 8 codes".into(),
            ));
        }
        Self::new(notes)
    }
}

impl From<PitchDictionary> for BTreeMap<String, u8> {
    fn from(dict: PitchDictionary) -> Self {
        CubeCode::all()
            .iter()
            .map(|&c| (c.to_string(), dict.pitch(c)))
            .collect()
    }
}

/// Duration in quarter-note units plus whether the slot is a pause.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DurationEntry {
    pub quarters: f64,
    pub pause: bool,
}

/// Vertex-to-duration dictionary; total over all eight codes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "BTreeMap<String, DurationEntry>",
    into = "BTreeMap<String, DurationEntry>"
)]
pub struct DurationDictionary {
    entries: [DurationEntry; 8],
}

impl DurationDictionary {
    pub fn new(entries: [DurationEntry; 8]) -> Result<Self, WalkError> {
        if let Some(bad) = entries
            .iter()
            .find(|e| e.quarters <= 0.0 || !e.quarters.is_finite())
        {
            return Err(WalkError::Configuration(format!(
                "duration {} must be positive",
                bad.quarters
            )));
        }
        Ok(Self { entries })
    }

    pub fn entry(&self, code: CubeCode) -> DurationEntry {
        self.entries[code.value()]
    }
}

impl Default for DurationDictionary {
    /// Notes: 000 quarter, 011 eighth, 100 half, 110 whole; pauses on 001,
    /// 010, 101 and 111 with mirrored lengths.
    fn default() -> Self {
        let note = |quarters| DurationEntry {
            quarters,
            pause: false,
        };
        let pause = |quarters| DurationEntry {
            quarters,
            pause: true,
        };
        let mut entries = [note(1.0); 8];
        for (code, entry) in [
            ("000", note(1.0)),
            ("011", note(0.5)),
            ("100", note(2.0)),
            ("110", note(4.0)),
            ("001", pause(1.0)),
            ("010", pause(0.5)),
            ("101", pause(2.0)),
            ("111", pause(4.0)),
        ] {
            let code: CubeCode = code.parse().expect("static code");
            entries[code.value()] = entry;
        }
        Self { entries }
    }
}

impl TryFrom<BTreeMap<String, DurationEntry>> for DurationDictionary {
    type Error = WalkError;

    fn try_from(map: BTreeMap<String, DurationEntry>) -> Result<Self, Self::Error> {
        let mut entries = [DurationEntry {
            quarters: 1.0,
            pause: false,
        }; 8];
        let mut seen = [false; 8];
        for (key, entry) in map {
            let code: CubeCode = key.parse()?;
            entries[code.value()] = entry;
            seen[code.value()] = true;
        }
        if seen != [true; 8] {
            return Err(WalkError::Configuration(
                "duration dictionary must cover all 8 codes".into(),
            ));
        }
        Self::new(entries)
    }
}

impl From<DurationDictionary> for BTreeMap<String, DurationEntry> {
    fn from(dict: DurationDictionary) -> Self {
        CubeCode::all()
            .iter()
            .map(|&c| (c.to_string(), dict.entry(c)))
            .collect()
    }
}

/// Swap one or both dictionaries in before the given 1-based step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DictionarySwitch {
    pub at_step: usize,
    pub pitch_dictionary: Option<PitchDictionary>,
    pub duration_dictionary: Option<DurationDictionary>,
}

/// Everything one sequence generation run needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub steps: usize,
    pub shots: u64,
    pub initial_pitch_code: CubeCode,
    pub initial_duration_code: CubeCode,
    pub seed: u64,
    #[serde(default = "PitchDictionary::default")]
    pub pitch_dictionary: PitchDictionary,
    #[serde(default = "DurationDictionary::default")]
    pub duration_dictionary: DurationDictionary,
    #[serde(default)]
    pub dictionary_schedule: Vec<DictionarySwitch>,
}

impl WalkConfig {
    pub fn new(steps: usize, shots: u64, pitch: CubeCode, duration: CubeCode, seed: u64) -> Self {
        Self {
            steps,
            shots,
            initial_pitch_code: pitch,
            initial_duration_code: duration,
            seed,
            pitch_dictionary: PitchDictionary::default(),
            duration_dictionary: DurationDictionary::default(),
            dictionary_schedule: Vec::new(),
        }
    }

    fn validate(&self) -> Result<(), WalkError> {
        if self.steps == 0 {
            return Err(WalkError::InvalidArgument(
                "steps must be at least 1".into(),
            ));
        }
        if self.shots == 0 {
            return Err(WalkError::InvalidArgument(
                "shots must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// The per-step (pitch, duration) code pairs of a walk, without dictionary
/// decoding. Step i walks both codes one step from the step i-1 pair,
/// starting from the configured initial codes; pauses do not freeze either
/// walk. Pitch and duration runs at step i use the sub-seeds
/// derive_seed(seed, 2i) and derive_seed(seed, 2i+1).
pub fn walk_codes(
    config: &WalkConfig,
    backend: &dyn Backend,
) -> Result<Vec<(CubeCode, CubeCode)>, WalkError> {
    config.validate()?;
    let mut pitch = config.initial_pitch_code;
    let mut duration = config.initial_duration_code;
    let mut codes = Vec::with_capacity(config.steps);
    for step in 0..config.steps as u64 {
        pitch = walk_step(
            backend,
            pitch,
            config.shots,
            derive_seed(config.seed, 2 * step),
        )?;
        duration = walk_step(
            backend,
            duration,
            config.shots,
            derive_seed(config.seed, 2 * step + 1),
        )?;
        codes.push((pitch, duration));
    }
    Ok(codes)
}

/// Decode one (pitch, duration) code pair with the given dictionaries: a
/// pause duration discards the pitch and yields a rest.
pub fn decode_note(
    pitch_code: CubeCode,
    duration_code: CubeCode,
    pitch_dict: &PitchDictionary,
    duration_dict: &DurationDictionary,
) -> NoteEvent {
    let entry = duration_dict.entry(duration_code);
    if entry.pause {
        NoteEvent::rest(entry.quarters)
    } else {
        NoteEvent::note(pitch_dict.pitch(pitch_code), entry.quarters)
    }
}

/// Generate a full sequence: walk `steps` code pairs and decode each with
/// the dictionaries in force at that step (the schedule may switch them
/// mid-run).
pub fn generate_sequence(
    config: &WalkConfig,
    backend: &dyn Backend,
) -> Result<Sequence, WalkError> {
    let codes = walk_codes(config, backend)?;
    let mut pitch_dict = config.pitch_dictionary.clone();
    let mut duration_dict = config.duration_dictionary.clone();
    let mut events = Vec::with_capacity(codes.len());
    for (index, &(pitch_code, duration_code)) in codes.iter().enumerate() {
        for switch in &config.dictionary_schedule {
            if switch.at_step == index + 1 {
                if let Some(p) = &switch.pitch_dictionary {
                    pitch_dict = p.clone();
                }
                if let Some(d) = &switch.duration_dictionary {
                    duration_dict = d.clone();
                }
            }
        }
        events.push(decode_note(
            pitch_code,
            duration_code,
            &pitch_dict,
            &duration_dict,
        ));
    }
    Ok(Sequence::new(events))
}
