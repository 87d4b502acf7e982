//! Cube codes arrive as CLI flags and config keys; basis codes arrive in
//! wire-format circuits. Both string parsers must be total.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qmuse::qsim::{Circuit, StateVector};
use qmuse::qwalk::{build_walk_circuit, CubeCode};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(code) = text.parse::<CubeCode>() {
        // A parsed code names a vertex the walk circuit can be armed with.
        assert_eq!(code.to_string().parse::<CubeCode>().unwrap(), code);
        assert!(build_walk_circuit(code).validate().is_ok());
    }
    // Basis-code parsing for a small register, both via StateVector and
    // via circuit validation.
    let width = text.chars().count().clamp(1, 4);
    let _ = StateVector::prepare_basis(width, text);
    let mut circuit = Circuit::new(width).measure([0]);
    circuit.initial_code = text.to_string();
    let _ = circuit.validate();
});
