//! Note/sequence data model and Standard MIDI File emission.
//!
//! Output is SMF format 0: a single track on channel 0 holding one tempo
//! event, note-on/note-off pairs for notes and pure delta-time gaps for
//! rests. `smf_check` is a scanning validator used by tests and fuzzing; it
//! is not a general-purpose MIDI reader.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub const DEFAULT_VELOCITY: u8 = 96;
pub const DEFAULT_TEMPO_BPM: f64 = 120.0;
pub const DEFAULT_TICKS_PER_QUARTER: u16 = 480;

#[derive(Debug, thiserror::Error)]
pub enum ScoreError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty sequence")]
    EmptySequence,
    #[error("file error: {0}")]
    Io(#[from] std::io::Error),
}

/// One musical event: a pitched note or a rest, with a duration in
/// quarter-note units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoteEvent {
    /// MIDI note number 0..=127, or `None` for a rest.
    pub pitch: Option<u8>,
    pub duration_quarters: f64,
    pub velocity: u8,
}

impl NoteEvent {
    pub fn note(pitch: u8, duration_quarters: f64) -> Self {
        Self {
            pitch: Some(pitch),
            duration_quarters,
            velocity: DEFAULT_VELOCITY,
        }
    }

    pub fn rest(duration_quarters: f64) -> Self {
        Self {
            pitch: None,
            duration_quarters,
            velocity: DEFAULT_VELOCITY,
        }
    }

    pub fn is_rest(&self) -> bool {
        self.pitch.is_none()
    }

    fn validate(&self) -> Result<(), ScoreError> {
        if let Some(p) = self.pitch {
            if p > 127 {
                return Err(ScoreError::InvalidArgument(format!(
                    "pitch {p} out of MIDI range 0..=127"
                )));
            }
        }
        if self.duration_quarters <= 0.0 || !self.duration_quarters.is_finite() {
            return Err(ScoreError::InvalidArgument(format!(
                "duration must be positive and finite, got {}",
                self.duration_quarters
            )));
        }
        if self.velocity == 0 || self.velocity > 127 {
            return Err(ScoreError::InvalidArgument(format!(
                "velocity {} out of range 1..=127",
                self.velocity
            )));
        }
        Ok(())
    }
}

/// An ordered list of events plus the tempo they are played at.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sequence {
    pub events: Vec<NoteEvent>,
    pub tempo_bpm: f64,
}

impl Sequence {
    pub fn new(events: Vec<NoteEvent>) -> Self {
        Self {
            events,
            tempo_bpm: DEFAULT_TEMPO_BPM,
        }
    }
}

/// Append the variable-length-quantity encoding of `value` (7 bits per byte,
/// high bit marks continuation) to `out`. Values are capped at 28 bits by
/// the SMF format.
fn push_vlq(out: &mut Vec<u8>, value: u32) {
    debug_assert!(value <= 0x0FFF_FFFF);
    let mut started = false;
    for shift in [21u32, 14, 7] {
        let chunk = (value >> shift) & 0x7F;
        if started || chunk != 0 {
            out.push(chunk as u8 | 0x80);
            started = true;
        }
    }
    out.push((value & 0x7F) as u8);
}

fn ticks(duration_quarters: f64, tpq: u16) -> u32 {
    (duration_quarters * f64::from(tpq)).round() as u32
}

/// Serialize a sequence as an SMF format-0 byte stream.
///
/// Track layout: tempo meta, program change 0, then per event either a
/// note-on/note-off pair or an accumulated gap, then end-of-track. Delta
/// times are `duration * ticks_per_quarter` rounded to nearest per event.
pub fn to_midi_bytes(seq: &Sequence, ticks_per_quarter: u16) -> Result<Vec<u8>, ScoreError> {
    if seq.events.is_empty() {
        return Err(ScoreError::EmptySequence);
    }
    if seq.tempo_bpm <= 0.0 || !seq.tempo_bpm.is_finite() {
        return Err(ScoreError::InvalidArgument(format!(
            "tempo must be positive, got {}",
            seq.tempo_bpm
        )));
    }
    for event in &seq.events {
        event.validate()?;
    }

    let mut track = Vec::new();
    let us_per_quarter = (60_000_000.0 / seq.tempo_bpm).round() as u32;
    push_vlq(&mut track, 0);
    track.extend_from_slice(&[0xFF, 0x51, 0x03]);
    track.extend_from_slice(&us_per_quarter.to_be_bytes()[1..]);
    // Explicit program 0 on channel 0.
    push_vlq(&mut track, 0);
    track.extend_from_slice(&[0xC0, 0x00]);

    let mut gap = 0u32;
    for event in &seq.events {
        let dt = ticks(event.duration_quarters, ticks_per_quarter);
        match event.pitch {
            Some(pitch) => {
                push_vlq(&mut track, gap);
                track.extend_from_slice(&[0x90, pitch, event.velocity]);
                push_vlq(&mut track, dt);
                track.extend_from_slice(&[0x80, pitch, 0x00]);
                gap = 0;
            }
            None => gap = gap.saturating_add(dt),
        }
    }
    push_vlq(&mut track, gap);
    track.extend_from_slice(&[0xFF, 0x2F, 0x00]);

    let mut bytes = Vec::with_capacity(14 + 8 + track.len());
    bytes.extend_from_slice(b"MThd");
    bytes.extend_from_slice(&6u32.to_be_bytes());
    bytes.extend_from_slice(&0u16.to_be_bytes()); // format 0
    bytes.extend_from_slice(&1u16.to_be_bytes()); // one track
    bytes.extend_from_slice(&ticks_per_quarter.to_be_bytes());
    bytes.extend_from_slice(b"MTrk");
    bytes.extend_from_slice(&(track.len() as u32).to_be_bytes());
    bytes.extend_from_slice(&track);
    Ok(bytes)
}

/// Write [`to_midi_bytes`] output to `path` verbatim. An empty sequence is
/// rejected before the file is created.
pub fn write_midi(
    seq: &Sequence,
    path: impl AsRef<Path>,
    ticks_per_quarter: u16,
) -> Result<(), ScoreError> {
    let bytes = to_midi_bytes(seq, ticks_per_quarter)?;
    let mut file = std::fs::File::create(path)?;
    file.write_all(&bytes)?;
    Ok(())
}

/// Scanning SMF validator for the files this module emits.
pub mod smf_check {
    /// What the scan found: matched notes as (pitch, ticks) in onset order,
    /// plus totals.
    #[derive(Clone, Debug, Default, PartialEq)]
    pub struct SmfSummary {
        pub ticks_per_quarter: u16,
        pub tempo_us_per_quarter: Option<u32>,
        pub notes: Vec<(u8, u32)>,
        pub rest_ticks: u32,
        pub total_ticks: u64,
    }

    #[derive(Debug, thiserror::Error, PartialEq)]
    pub enum SmfCheckError {
        #[error("truncated file at byte {0}")]
        Truncated(usize),
        #[error("bad structure: {0}")]
        Malformed(String),
        #[error("dangling note event: {0}")]
        DanglingNote(String),
    }

    struct Scanner<'a> {
        bytes: &'a [u8],
        pos: usize,
    }

    impl<'a> Scanner<'a> {
        fn take(&mut self, n: usize) -> Result<&'a [u8], SmfCheckError> {
            let end = self
                .pos
                .checked_add(n)
                .ok_or(SmfCheckError::Truncated(self.pos))?;
            if end > self.bytes.len() {
                return Err(SmfCheckError::Truncated(self.pos));
            }
            let slice = &self.bytes[self.pos..end];
            self.pos = end;
            Ok(slice)
        }

        fn u8(&mut self) -> Result<u8, SmfCheckError> {
            Ok(self.take(1)?[0])
        }

        fn u16(&mut self) -> Result<u16, SmfCheckError> {
            Ok(u16::from_be_bytes(self.take(2)?.try_into().unwrap()))
        }

        fn u32(&mut self) -> Result<u32, SmfCheckError> {
            Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
        }

        fn vlq(&mut self) -> Result<u32, SmfCheckError> {
            let mut value: u32 = 0;
            for i in 0..4 {
                let byte = self.u8()?;
                value = (value << 7) | u32::from(byte & 0x7F);
                if byte & 0x80 == 0 {
                    return Ok(value);
                }
                if i == 3 {
                    break;
                }
            }
            Err(SmfCheckError::Malformed("VLQ longer than 4 bytes".into()))
        }
    }

    /// Decode one VLQ from the front of `bytes`; exposed for round-trip
    /// checks against the encoder.
    pub fn decode_vlq(bytes: &[u8]) -> Result<(u32, usize), SmfCheckError> {
        let mut s = Scanner { bytes, pos: 0 };
        let v = s.vlq()?;
        Ok((v, s.pos))
    }

    /// Validate a format-0 SMF: header sanity, track length consistency,
    /// every note-on matched by a note-off of the same pitch, no dangling
    /// events at end-of-track.
    pub fn validate_smf(bytes: &[u8]) -> Result<SmfSummary, SmfCheckError> {
        let mut s = Scanner { bytes, pos: 0 };
        if s.take(4)? != b"MThd" {
            return Err(SmfCheckError::Malformed("missing MThd".into()));
        }
        if s.u32()? != 6 {
            return Err(SmfCheckError::Malformed("header length != 6".into()));
        }
        let format = s.u16()?;
        let ntrks = s.u16()?;
        let ticks_per_quarter = s.u16()?;
        if format != 0 || ntrks != 1 {
            return Err(SmfCheckError::Malformed(format!(
                "expected format 0 with 1 track, got format {format} with {ntrks}"
            )));
        }
        if ticks_per_quarter & 0x8000 != 0 {
            return Err(SmfCheckError::Malformed(
                "SMPTE timing not supported".into(),
            ));
        }
        if s.take(4)? != b"MTrk" {
            return Err(SmfCheckError::Malformed("missing MTrk".into()));
        }
        let track_len = s.u32()? as usize;
        let track_end = s
            .pos
            .checked_add(track_len)
            .filter(|&end| end <= s.bytes.len())
            .ok_or(SmfCheckError::Truncated(s.pos))?;

        let mut summary = SmfSummary {
            ticks_per_quarter,
            ..Default::default()
        };
        // pitch -> onset tick of the currently sounding note
        let mut open_notes: std::collections::BTreeMap<u8, u64> = std::collections::BTreeMap::new();
        let mut now: u64 = 0;
        let mut last_note_off: u64 = 0;
        let mut ended = false;

        while s.pos < track_end {
            let delta = s.vlq()?;
            now += u64::from(delta);
            let status = s.u8()?;
            match status {
                0xFF => {
                    let meta = s.u8()?;
                    let len = s.vlq()? as usize;
                    let data = s.take(len)?;
                    match meta {
                        0x51 if len == 3 => {
                            summary.tempo_us_per_quarter = Some(
                                u32::from(data[0]) << 16
                                    | u32::from(data[1]) << 8
                                    | u32::from(data[2]),
                            );
                        }
                        0x2F => {
                            ended = true;
                            break;
                        }
                        _ => {}
                    }
                }
                0x90..=0x9F => {
                    let pitch = s.u8()?;
                    let velocity = s.u8()?;
                    if pitch > 127 || velocity > 127 {
                        return Err(SmfCheckError::Malformed("data byte above 127".into()));
                    }
                    if velocity == 0 {
                        // Running-status-free note-off alias.
                        close_note(
                            &mut open_notes,
                            &mut summary,
                            pitch,
                            now,
                            &mut last_note_off,
                        )?;
                    } else if open_notes.insert(pitch, now).is_some() {
                        return Err(SmfCheckError::DanglingNote(format!(
                            "pitch {pitch} re-attacked while sounding"
                        )));
                    }
                }
                0x80..=0x8F => {
                    let pitch = s.u8()?;
                    let _velocity = s.u8()?;
                    close_note(
                        &mut open_notes,
                        &mut summary,
                        pitch,
                        now,
                        &mut last_note_off,
                    )?;
                }
                0xC0..=0xDF => {
                    let _ = s.u8()?;
                }
                0xA0..=0xBF | 0xE0..=0xEF => {
                    let _ = s.take(2)?;
                }
                0xF0 | 0xF7 => {
                    let len = s.vlq()? as usize;
                    let _ = s.take(len)?;
                }
                other => {
                    return Err(SmfCheckError::Malformed(format!(
                        "unsupported status byte 0x{other:02X}"
                    )));
                }
            }
        }

        if !ended {
            return Err(SmfCheckError::Malformed("missing end-of-track".into()));
        }
        if s.pos != track_end {
            return Err(SmfCheckError::Malformed(
                "track length disagrees with end-of-track position".into(),
            ));
        }
        if let Some((&pitch, _)) = open_notes.iter().next() {
            return Err(SmfCheckError::DanglingNote(format!(
                "pitch {pitch} has no note-off"
            )));
        }
        summary.total_ticks = now;
        summary.rest_ticks = (now - last_note_off.min(now)) as u32;
        Ok(summary)
    }

    fn close_note(
        open: &mut std::collections::BTreeMap<u8, u64>,
        summary: &mut SmfSummary,
        pitch: u8,
        now: u64,
        last_note_off: &mut u64,
    ) -> Result<(), SmfCheckError> {
        match open.remove(&pitch) {
            Some(onset) => {
                summary.notes.push((pitch, (now - onset) as u32));
                *last_note_off = now;
                Ok(())
            }
            None => Err(SmfCheckError::DanglingNote(format!(
                "note-off for silent pitch {pitch}"
            ))),
        }
    }
}
