//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (visible with `cargo test --test acceptance -- --nocapture`).

use std::sync::Arc;

use qmuse::hyperdie::{self, canonical_rules, DieMeasurement, ParameterBank};
use qmuse::markov::{self, TransitionMatrix};
use qmuse::net::{remote_execute, Server};
use qmuse::qsim::{derive_seed, run_circuit, Backend, Circuit, Complex64, Gate, LocalBackend};
use qmuse::qwalk::{
    self, apply_die, build_walk_circuit, forced_walk_circuit, CubeCode, DieOutcome, WalkConfig,
};
use qmuse::score::{self, NoteEvent, Sequence};
use qmuse::voice::{self, ramp, RenderSettings};

use rand::SeedableRng;

fn bitstring(value: usize, width: usize) -> String {
    (0..width)
        .rev()
        .map(|q| if value >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Criterion 1: exhaustive CX and Toffoli applications reproduce their
/// truth tables exactly (zero tolerance).
#[test]
fn criterion_1_gate_tables() {
    let cx_expected = [0b00, 0b01, 0b11, 0b10];
    for (input, &output) in cx_expected.iter().enumerate() {
        let mut state = qmuse::qsim::StateVector::prepare_basis(2, &bitstring(input, 2)).unwrap();
        state.apply_gate(&Gate::cx(1, 0)).unwrap();
        assert_eq!(state.amplitudes()[output], Complex64::new(1.0, 0.0));
        assert_eq!(state.probability(output), 1.0);
    }
    for input in 0..8usize {
        let output = if input & 0b110 == 0b110 {
            input ^ 1
        } else {
            input
        };
        let mut state = qmuse::qsim::StateVector::prepare_basis(3, &bitstring(input, 3)).unwrap();
        state.apply_gate(&Gate::ccx(2, 1, 0)).unwrap();
        assert_eq!(state.amplitudes()[output], Complex64::new(1.0, 0.0));
    }
    println!("criterion 1 (gate truth tables): PASS");
}

/// Criterion 2: superposition statistics. An H circuit lands both results
/// inside the 3-sigma band, and the hyper-die's bits are unbiased.
#[test]
fn criterion_2_superposition_statistics() {
    let h = Circuit::new(1).gate(Gate::h(0)).measure([0]);
    let counts = run_circuit(&h, 10_000, 2).unwrap();
    for key in ["0", "1"] {
        let n = counts.get(key);
        assert!(
            (4850..=5150).contains(&n),
            "H outcome {key} occurred {n} times"
        );
    }

    let rolls = 10_000u32;
    let mut ones = [0u32; 9];
    for roll in 0..rolls {
        let meas = hyperdie::roll_die(&LocalBackend, derive_seed(7, u64::from(roll))).unwrap();
        for (slot, &bit) in ones.iter_mut().zip(meas.bits().iter()) {
            *slot += u32::from(bit);
        }
    }
    for (i, &n) in ones.iter().enumerate() {
        let freq = f64::from(n) / f64::from(rolls);
        assert!((freq - 0.5).abs() <= 0.015, "die bit {i} frequency {freq}");
    }
    println!("criterion 2 (superposition statistics): PASS");
}

/// Criterion 3: the worked measurement [0,0,0,0,0,1,0,0,1] retrieves all 21
/// parameter values exactly as printed.
#[test]
fn criterion_3_parameter_retrieval() {
    let meas = DieMeasurement::new([0, 0, 0, 0, 0, 1, 0, 0, 1]).unwrap();
    let bank = ParameterBank::default();
    let rules = canonical_rules();

    let expected: [(&str, f64); 21] = [
        ("fq1s", 310.0),
        ("fq1e", 310.0),
        ("fq2s", 1150.0),
        ("fq2e", 1080.0),
        ("fq3s", 2100.0),
        ("fq3e", 2500.0),
        ("amp1s", 0.0),
        ("amp1e", 0.0),
        ("amp2s", -11.0),
        ("amp2e", -11.0),
        ("amp3s", -9.0),
        ("amp3e", -9.0),
        ("bw1s", 60.0),
        ("bw1e", 80.0),
        ("bw2s", 75.0),
        ("bw2e", 60.0),
        ("bw3s", 115.0),
        ("bw3e", 98.0),
        ("fnds", 185.0),
        ("fnde", 155.6),
        ("dur", 2.75),
    ];
    for (parameter, value) in expected {
        let rule = rules.iter().find(|r| r.parameter == parameter).unwrap();
        let family = bank.family(parameter).unwrap();
        let index = hyperdie::assemble_code(&meas, rule.triple).unwrap();
        assert_eq!(family[index], value, "{parameter}");
    }

    // And the assembled patch carries the same values.
    let patch = hyperdie::retrieve_patch(&meas, &bank, &rules).unwrap();
    assert_eq!(patch.formants[0].fq_start, 310.0);
    assert_eq!(patch.formants[1].fq_end, 1080.0);
    assert_eq!(patch.formants[2].bw_end, 98.0);
    assert_eq!(patch.fnd_end, 155.6);
    assert_eq!(patch.dur, 2.75);
    println!("criterion 3 (worked parameter retrieval, 21/21 exact): PASS");
}

/// Criterion 4: the rendered worked patch shows spectral peaks at the
/// ramped formant centers two seconds in, with formant 1 strongest.
#[test]
fn criterion_4_voice_spectral_check() {
    let meas = DieMeasurement::new([0, 0, 0, 0, 0, 1, 0, 0, 1]).unwrap();
    let patch =
        hyperdie::retrieve_patch(&meas, &ParameterBank::default(), &canonical_rules()).unwrap();
    let buffer = voice::render_voice(&patch, &RenderSettings::default()).unwrap();
    assert_eq!(buffer.samples.len(), 121_275, "2.75 s at 44.1 kHz");

    let peaks = voice::spectral_peaks(&buffer, 2.0, 0.1).unwrap();
    assert!(!peaks.is_empty());

    let centers = [
        (ramp(310.0, 310.0, 2.0, 2.75).unwrap(), 40.0),
        (ramp(1150.0, 1080.0, 2.0, 2.75).unwrap(), 50.0),
        (ramp(2100.0, 2500.0, 2.0, 2.75).unwrap(), 60.0),
    ];
    for (center, tolerance) in centers {
        assert!(
            peaks.iter().any(|&(f, _)| (f - center).abs() <= tolerance),
            "no peak within {tolerance} Hz of {center:.0} Hz; peaks: {:?}",
            &peaks[..peaks.len().min(6)]
        );
    }
    // Strongest peak belongs to formant 1.
    let (top_freq, _) = peaks[0];
    assert!(
        (top_freq - centers[0].0).abs() <= centers[0].1,
        "strongest peak at {top_freq} Hz is not formant 1"
    );
    println!("criterion 4 (spectral peaks at ramped formant centers): PASS");
}

/// Criterion 5: walk mechanics. Forced-die circuits reproduce the classical
/// model in all 32 cases, the superposed circuit is uniform over the four
/// legal outcomes for all 8 start codes, and shot frequencies agree.
#[test]
fn criterion_5_walk_mechanics() {
    for code in CubeCode::all() {
        for (d3, d4) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let die = DieOutcome::new(d3, d4);
            let counts = LocalBackend
                .execute(&forced_walk_circuit(code, die), 1, 0)
                .unwrap();
            let key = counts.counts.keys().next().unwrap().clone();
            assert_eq!(key.parse::<CubeCode>().unwrap(), apply_die(code, die));
        }
    }

    for code in CubeCode::all() {
        let state = build_walk_circuit(code).final_statevector().unwrap();
        let mut image_probability = std::collections::BTreeMap::new();
        for (index, p) in state.probabilities().iter().enumerate() {
            if *p > 0.0 {
                let vertex = CubeCode::new(
                    (index & 1) as u8,
                    (index >> 1 & 1) as u8,
                    (index >> 2 & 1) as u8,
                )
                .unwrap();
                *image_probability.entry(vertex).or_insert(0.0) += p;
            }
        }
        let legal = [code, code.flip(0), code.flip(1), code.flip(2)];
        assert_eq!(image_probability.len(), 4, "support from {code}");
        for (vertex, p) in image_probability {
            assert!(
                legal.contains(&vertex),
                "illegal outcome {vertex} from {code}"
            );
            assert!((p - 0.25).abs() < 1e-10, "P({vertex}) = {p}");
        }
    }

    let counts = LocalBackend
        .execute(&build_walk_circuit("000".parse().unwrap()), 4096, 6)
        .unwrap();
    assert_eq!(counts.counts.len(), 4);
    for (key, &n) in &counts.counts {
        let freq = n as f64 / 4096.0;
        assert!(
            (0.22..=0.28).contains(&freq),
            "outcome {key} frequency {freq}"
        );
    }
    println!("criterion 5 (walk mechanics): PASS");
}

/// Criterion 6: generated sequences move one code bit per step, and the two
/// worked notes decode exactly.
#[test]
fn criterion_6_sequence_invariant() {
    for seed in [1u64, 9, 23] {
        let config = WalkConfig::new(
            24,
            500,
            "110".parse().unwrap(),
            "100".parse().unwrap(),
            seed,
        );
        let codes = qwalk::walk_codes(&config, &LocalBackend).unwrap();
        assert_eq!(codes.len(), 24);
        let mut prev = (config.initial_pitch_code, config.initial_duration_code);
        for &(pitch, duration) in &codes {
            assert!(
                prev.0.hamming_distance(pitch) <= 1,
                "pitch jumped {} -> {pitch}",
                prev.0
            );
            assert!(
                prev.1.hamming_distance(duration) <= 1,
                "duration jumped {} -> {duration}",
                prev.1
            );
            prev = (pitch, duration);
        }
    }

    let pitch_dict = qmuse::qwalk::PitchDictionary::default();
    let duration_dict = qmuse::qwalk::DurationDictionary::default();
    let note = qwalk::decode_note(
        "001".parse().unwrap(),
        "000".parse().unwrap(),
        &pitch_dict,
        &duration_dict,
    );
    assert_eq!(
        (note.pitch, note.duration_quarters),
        (Some(68), 1.0),
        "quarter G#4"
    );
    let note = qwalk::decode_note(
        "000".parse().unwrap(),
        "100".parse().unwrap(),
        &pitch_dict,
        &duration_dict,
    );
    assert_eq!(
        (note.pitch, note.duration_quarters),
        (Some(60), 2.0),
        "half C4"
    );
    println!("criterion 6 (sequence invariant and worked notes): PASS");
}

/// Criterion 7: Markov laws. Both built-in matrices validate; sampled
/// frequencies converge to the entries with no forbidden transition; the
/// random-walk chain moves exactly one scale step per event.
#[test]
fn criterion_7_markov_laws() {
    let rules = TransitionMatrix::sequencing_rules();
    let walk = TransitionMatrix::random_walk();
    assert!(markov::validate_matrix(&rules).is_ok());
    assert!(markov::validate_matrix(&walk).is_ok());

    // Per-row convergence, 10^5 draws per row (the rules chain is absorbed
    // into {A4, B4, C5}, so conditional frequencies need per-row sampling).
    let mut rng = qmuse::qsim::SimRng::seed_from_u64(12);
    for matrix in [&rules, &walk] {
        for (i, label) in matrix.labels.iter().enumerate() {
            let mut moves = [0u32; 8];
            for _ in 0..100_000 {
                let next = markov::next_note(matrix, label, &mut rng).unwrap();
                moves[matrix.index_of(&next).unwrap()] += 1;
            }
            for (j, &m) in moves.iter().enumerate() {
                let freq = f64::from(m) / 100_000.0;
                assert!(
                    (freq - matrix.rows[i][j]).abs() <= 0.02,
                    "({i},{j}): {freq} vs {}",
                    matrix.rows[i][j]
                );
                if matrix.rows[i][j] == 0.0 {
                    assert_eq!(m, 0, "forbidden transition ({i},{j}) occurred");
                }
            }
        }
    }

    // Trajectory checks: zero forbidden transitions on both chains, and
    // single-step motion on the random-walk chain.
    let seq = markov::generate(&rules, "C4", 100_000, &mut rng).unwrap();
    for pair in seq.windows(2) {
        let i = rules.index_of(&pair[0]).unwrap();
        let j = rules.index_of(&pair[1]).unwrap();
        assert!(
            rules.rows[i][j] > 0.0,
            "forbidden {} -> {}",
            pair[0],
            pair[1]
        );
    }
    let seq = markov::generate(&walk, "G4", 100_000, &mut rng).unwrap();
    for pair in seq.windows(2) {
        let i = walk.index_of(&pair[0]).unwrap();
        let j = walk.index_of(&pair[1]).unwrap();
        assert!(walk.rows[i][j] > 0.0);
        assert_eq!(
            i.abs_diff(j),
            1,
            "{} -> {} is not one scale step",
            pair[0],
            pair[1]
        );
    }
    println!("criterion 7 (markov laws): PASS");
}

/// Criterion 8: file formats. Byte equality against the committed MIDI
/// golden file, an independent-parser round-trip of the two-note fixture,
/// and the WAV golden bytes.
#[test]
fn criterion_8_file_formats() {
    // Golden MIDI: one C4 quarter note at 120 bpm, 480 tpq.
    let seq = Sequence::new(vec![NoteEvent::note(60, 1.0)]);
    let bytes = score::to_midi_bytes(&seq, 480).unwrap();
    let golden = std::fs::read(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/golden/single_c4.mid"
    ))
    .expect("golden fixture present");
    assert_eq!(bytes, golden, "single-C4 golden file drifted");

    // Two-note fixture through an independent parser: half C4, quarter G#4.
    let seq = Sequence::new(vec![NoteEvent::note(60, 2.0), NoteEvent::note(68, 1.0)]);
    let bytes = score::to_midi_bytes(&seq, 480).unwrap();
    let smf = midly::Smf::parse(&bytes).expect("independent parser accepts the file");
    assert_eq!(smf.header.format, midly::Format::SingleTrack);
    let mut now = 0u32;
    let mut on: std::collections::HashMap<u8, u32> = std::collections::HashMap::new();
    let mut notes: Vec<(u8, u32)> = Vec::new();
    for event in &smf.tracks[0] {
        now += event.delta.as_int();
        if let midly::TrackEventKind::Midi { message, .. } = event.kind {
            match message {
                midly::MidiMessage::NoteOn { key, vel } if vel.as_int() > 0 => {
                    on.insert(key.as_int(), now);
                }
                midly::MidiMessage::NoteOff { key, .. }
                | midly::MidiMessage::NoteOn { key, .. } => {
                    let started = on.remove(&key.as_int()).expect("matched note-on");
                    notes.push((key.as_int(), now - started));
                }
                _ => {}
            }
        }
    }
    assert_eq!(notes, vec![(60, 960), (68, 480)]);

    // Golden WAV data chunk.
    let buffer = voice::AudioBuffer {
        samples: vec![0.0, 0.5, -0.5, 1.0],
        sample_rate: 44_100,
    };
    let bytes = voice::wav_bytes(&buffer).unwrap();
    assert_eq!(
        &bytes[44..],
        &[0x00, 0x00, 0x00, 0x40, 0x00, 0xC0, 0xFF, 0x7F]
    );
    assert_eq!(bytes.len(), 44 + 2 * buffer.samples.len());
    println!("criterion 8 (file formats): PASS");
}

/// Criterion 9: backend transparency. For a fixed seed, loopback execution
/// returns counts identical to the local backend for the H, hyper-die and
/// walk circuits.
#[test]
fn criterion_9_backend_transparency() {
    let backend: Arc<dyn Backend> = Arc::new(LocalBackend);
    let server = Server::bind("127.0.0.1:0", backend).unwrap();
    let endpoint = server.local_addr().unwrap().to_string();
    std::thread::spawn(move || {
        let _ = server.run();
    });

    let circuits = [
        (
            "H",
            Circuit::new(1).gate(Gate::h(0)).measure([0]),
            10_000u64,
        ),
        ("hyper-die", hyperdie::die_circuit(), 1),
        ("walk", build_walk_circuit("110".parse().unwrap()), 4096),
    ];
    for (name, circuit, shots) in circuits {
        for seed in [0u64, 7] {
            let local = LocalBackend.execute(&circuit, shots, seed).unwrap();
            let remote = remote_execute(&endpoint, &circuit, shots, seed).unwrap();
            assert_eq!(local, remote, "{name} circuit diverged at seed {seed}");
        }
    }
    println!("criterion 9 (backend transparency over loopback): PASS");
}
