//! The server parses request lines from untrusted TCP peers: parsing and
//! circuit validation must never panic, and every accepted request must
//! re-serialize to something that parses back to the same value.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qmuse::net::parse_request_line;

fuzz_target!(|data: &[u8]| {
    let Ok(line) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(request) = parse_request_line(line) {
        let _ = request.circuit.validate();
        let encoded = serde_json::to_string(&request).unwrap();
        let reparsed = parse_request_line(&encoded).unwrap();
        // NaN thetas break equality but are rejected by validation.
        if request.circuit.validate().is_ok() {
            assert_eq!(reparsed, request);
        }
    }
});
