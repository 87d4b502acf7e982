//! The client parses response lines from the server; arbitrary bytes must
//! produce Ok or Err, never a panic.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qmuse::net::parse_response_line;

fuzz_target!(|data: &[u8]| {
    let Ok(line) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_response_line(line);
});
