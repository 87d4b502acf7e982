//! Differential check of the simulator against an independently computed
//! fixture: `tests/golden/statevector_cases.json` holds final amplitudes
//! produced by a dense Kronecker-product evaluation of the same circuits
//! (see `gen_statevector_cases.py` next to it). The two routes share no
//! code, so agreement pins the gate kernels, the bit-weight convention and
//! the basis-code orientation at once.

use serde::Deserialize;

use qmuse::qsim::{Circuit, Complex64};

#[derive(Deserialize)]
struct OracleCase {
    num_qubits: usize,
    initial_code: String,
    gates: Vec<qmuse::qsim::Gate>,
    amplitudes: Vec<(f64, f64)>,
}

#[test]
fn simulator_matches_independent_amplitudes() {
    let raw = std::fs::read(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/golden/statevector_cases.json"
    ))
    .expect("fixture present");
    let cases: Vec<OracleCase> = serde_json::from_slice(&raw).unwrap();
    assert!(cases.len() >= 10, "fixture unexpectedly small");

    for (index, case) in cases.iter().enumerate() {
        let circuit = Circuit {
            num_qubits: case.num_qubits,
            initial_code: case.initial_code.clone(),
            gates: case.gates.clone(),
            measured_qubits: (0..case.num_qubits).collect(),
        };
        let state = circuit.final_statevector().unwrap();
        assert_eq!(state.amplitudes().len(), case.amplitudes.len());
        for (i, (&got, &(re, im))) in state.amplitudes().iter().zip(&case.amplitudes).enumerate() {
            let want = Complex64::new(re, im);
            assert!(
                (got - want).norm() < 1e-12,
                "case {index}, amplitude {i}: {got} vs {want}"
            );
        }
    }
}
