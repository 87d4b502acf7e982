//! Note labels come from interactive stdin lines. Both the MIDI-number
//! parser and the chain lookup must reject garbage gracefully.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qmuse::markov::{label_to_midi, next_note, TransitionMatrix};
use qmuse::qsim::shot_rng;

fuzz_target!(|data: &[u8]| {
    let Ok(label) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(midi) = label_to_midi(label) {
        assert!(midi <= 127);
    }
    let matrix = TransitionMatrix::sequencing_rules();
    let mut rng = shot_rng(0, 0);
    if let Ok(next) = next_note(&matrix, label, &mut rng) {
        // Anything accepted must be a scale label with a live row.
        assert!(matrix.index_of(&next).is_some());
    }
});
