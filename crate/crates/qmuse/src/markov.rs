//! Classical note generators: a rule-derived Markov chain over a C4 major
//! scale, a one-step random-walk chain, batch sequence generation and the
//! single-note interactive response.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::qsim::SimRng;

/// Row-sum slack accepted by [`validate_matrix`].
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// The ordered scale both built-in chains run over.
pub const SCALE_LABELS: [&str; 8] = ["C4", "D4", "E4", "F4", "G4", "A4", "B4", "C5"];

#[derive(Debug, thiserror::Error)]
pub enum MarkovError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown note label {0:?}")]
    UnknownLabel(String),
    #[error("degenerate state: row for {0:?} has no outgoing probability")]
    DegenerateState(String),
}

/// A row-stochastic note-transition table: `rows[i][j]` is the probability
/// of moving from `labels[i]` to `labels[j]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl TransitionMatrix {
    pub fn new(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Self {
        Self { labels, rows }
    }

    /// The eight sequencing rules over the scale, one row per source note.
    /// Rows printed as repeated 0.33 are stored as exact thirds.
    pub fn sequencing_rules() -> Self {
        let third = 1.0 / 3.0;
        Self::from_scale([
            [0.2, 0.2, 0.2, 0.0, 0.2, 0.0, 0.0, 0.2],
            [third, 0.0, third, 0.0, third, 0.0, 0.0, 0.0],
            [0.0, 0.5, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0],
            [third, 0.0, third, 0.0, third, 0.0, 0.0, 0.0],
            [0.25, 0.0, 0.0, 0.25, 0.25, 0.25, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.5, 0.0],
        ])
    }

    /// The single-step random-walk chain: nonzero entries only immediately
    /// beside the main diagonal, so every move is one scale step.
    pub fn random_walk() -> Self {
        Self::from_scale([
            [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.5, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.5, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.5, 0.0, 0.5, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.5, 0.0, 0.5, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.5, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.5],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        ])
    }

    fn from_scale(rows: [[f64; 8]; 8]) -> Self {
        Self {
            labels: SCALE_LABELS.iter().map(|s| s.to_string()).collect(),
            rows: rows.iter().map(|r| r.to_vec()).collect(),
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// One violation found by [`validate_matrix`], tagged with its row.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixViolation {
    pub row: usize,
    pub message: String,
}

/// Outcome of matrix validation; reports instead of failing.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MatrixReport {
    pub violations: Vec<MatrixViolation>,
}

impl MatrixReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check that the matrix is square over its labels, entries are
/// non-negative, and each row sums to 1 within [`ROW_SUM_TOLERANCE`].
pub fn validate_matrix(matrix: &TransitionMatrix) -> MatrixReport {
    let mut report = MatrixReport::default();
    let n = matrix.labels.len();
    if matrix.rows.len() != n {
        report.violations.push(MatrixViolation {
            row: 0,
            message: format!("{} rows for {} labels", matrix.rows.len(), n),
        });
        return report;
    }
    for (i, row) in matrix.rows.iter().enumerate() {
        if row.len() != n {
            report.violations.push(MatrixViolation {
                row: i,
                message: format!("row has {} entries, expected {n}", row.len()),
            });
            continue;
        }
        if let Some(bad) = row.iter().find(|&&p| p < 0.0 || !p.is_finite()) {
            report.violations.push(MatrixViolation {
                row: i,
                message: format!("entry {bad} is not a probability"),
            });
            continue;
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            report.violations.push(MatrixViolation {
                row: i,
                message: format!("row sums to {sum}"),
            });
        }
    }
    report
}

/// Sample the successor of `current` from its row, by inverse CDF in label
/// order with a single uniform draw.
pub fn next_note(
    matrix: &TransitionMatrix,
    current: &str,
    rng: &mut SimRng,
) -> Result<String, MarkovError> {
    let row_index = matrix
        .index_of(current)
        .ok_or_else(|| MarkovError::UnknownLabel(current.to_string()))?;
    let row = matrix
        .rows
        .get(row_index)
        .ok_or_else(|| MarkovError::InvalidArgument(format!("matrix has no row {row_index}")))?;
    if row.len() != matrix.labels.len() {
        return Err(MarkovError::InvalidArgument(format!(
            "row {row_index} has {} entries for {} labels",
            row.len(),
            matrix.labels.len()
        )));
    }
    let total: f64 = row.iter().sum();
    if total <= 0.0 {
        return Err(MarkovError::DegenerateState(current.to_string()));
    }

    let u: f64 = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last_nonzero = None;
    for (j, &p) in row.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last_nonzero = Some(j);
            if u < acc {
                return Ok(matrix.labels[j].clone());
            }
        }
    }
    // u landed in the rounding sliver past the accumulated sum.
    Ok(matrix.labels[last_nonzero.expect("total > 0")].clone())
}

/// Generate `length` notes starting from (and including) `start`.
pub fn generate(
    matrix: &TransitionMatrix,
    start: &str,
    length: usize,
    rng: &mut SimRng,
) -> Result<Vec<String>, MarkovError> {
    if length == 0 {
        return Err(MarkovError::InvalidArgument(
            "length must be at least 1".into(),
        ));
    }
    if matrix.index_of(start).is_none() {
        return Err(MarkovError::UnknownLabel(start.to_string()));
    }
    let mut out = Vec::with_capacity(length);
    out.push(start.to_string());
    for _ in 1..length {
        let next = next_note(matrix, out.last().expect("non-empty"), rng)?;
        out.push(next);
    }
    Ok(out)
}

/// Map a note label like `C4`, `F#3` or `Eb5` to its MIDI number (C4 = 60).
pub fn label_to_midi(label: &str) -> Result<u8, MarkovError> {
    if !label.is_ascii() {
        return Err(MarkovError::UnknownLabel(label.into()));
    }
    let bytes = label.as_bytes();
    let letter = *bytes
        .first()
        .ok_or_else(|| MarkovError::UnknownLabel(label.into()))?;
    let base: i32 = match letter.to_ascii_uppercase() {
        b'C' => 0,
        b'D' => 2,
        b'E' => 4,
        b'F' => 5,
        b'G' => 7,
        b'A' => 9,
        b'B' => 11,
        _ => return Err(MarkovError::UnknownLabel(label.into())),
    };
    let mut rest = &label[1..];
    let accidental = match rest.as_bytes().first() {
        Some(b'#') => {
            rest = &rest[1..];
            1
        }
        Some(b'b') => {
            rest = &rest[1..];
            -1
        }
        _ => 0,
    };
    let octave: i32 = rest
        .parse()
        .map_err(|_| MarkovError::UnknownLabel(label.into()))?;
    let midi = (octave + 1) * 12 + base + accidental;
    u8::try_from(midi)
        .ok()
        .filter(|&m| m <= 127)
        .ok_or_else(|| MarkovError::UnknownLabel(label.into()))
}
