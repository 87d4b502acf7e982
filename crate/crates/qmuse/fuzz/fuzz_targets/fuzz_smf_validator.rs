//! The scanning SMF validator walks length-prefixed binary structures; it
//! must never panic or over-read on corrupted files.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qmuse::score::smf_check::{decode_vlq, validate_smf};

fuzz_target!(|data: &[u8]| {
    let _ = validate_smf(data);
    if let Ok((value, used)) = decode_vlq(data) {
        assert!(used <= 4 && used <= data.len());
        assert!(value <= 0x0FFF_FFFF);
    }
});
