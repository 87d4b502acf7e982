//! Config files come from users; malformed JSON, wrong shapes and invalid
//! sections must all surface as errors, never panics.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qmuse::config::ConfigFile;

fuzz_target!(|data: &[u8]| {
    let _ = ConfigFile::from_slice(data);
});
