//! Rendering properties across die-selectable patches: formant-1 dominance,
//! amplitude ordering, the duration law and gain staging.

use qmuse::hyperdie::{canonical_rules, retrieve_patch, DieMeasurement, ParameterBank};
use qmuse::voice::{ramp, render_voice, spectral_peaks, RenderSettings, VoicePatch};

fn measurement_from(value: u16) -> DieMeasurement {
    let mut bits = [0u8; 9];
    for (i, slot) in bits.iter_mut().enumerate() {
        *slot = (value >> i & 1) as u8;
    }
    DieMeasurement::new(bits).unwrap()
}

fn worked_patch() -> VoicePatch {
    let meas = DieMeasurement::new([0, 0, 0, 0, 0, 1, 0, 0, 1]).unwrap();
    retrieve_patch(&meas, &ParameterBank::default(), &canonical_rules()).unwrap()
}

/// During the sustain phase the strongest peak sits within half the ramped
/// first-formant bandwidth of the ramped first-formant frequency (formant 1
/// is the 0 dB reference).
#[test]
fn formant_one_dominates_sustain() {
    let patch = worked_patch();
    let buffer = render_voice(&patch, &RenderSettings::default()).unwrap();
    for at in [1.0, 1.5, 2.0] {
        let peaks = spectral_peaks(&buffer, at, 0.1).unwrap();
        let (top_freq, _) = peaks[0];
        let fq1 = ramp(
            patch.formants[0].fq_start,
            patch.formants[0].fq_end,
            at,
            patch.dur,
        )
        .unwrap();
        let bw1 = ramp(
            patch.formants[0].bw_start,
            patch.formants[0].bw_end,
            at,
            patch.dur,
        )
        .unwrap();
        assert!(
            (top_freq - fq1).abs() <= bw1 / 2.0,
            "at {at} s the strongest peak {top_freq} Hz is outside fq1 {fq1} +- {}",
            bw1 / 2.0
        );
    }
}

/// Measured peak levels at the formant centers respect the patch's
/// amplitude ordering (within 3 dB) for formants separated by more than
/// twice their bandwidths.
#[test]
fn peak_levels_follow_patch_amplitudes() {
    let patch = worked_patch();
    let buffer = render_voice(&patch, &RenderSettings::default()).unwrap();
    let at = 2.0;
    let peaks = spectral_peaks(&buffer, at, 0.1).unwrap();

    let frac = at / patch.dur;
    let formants: Vec<(f64, f64, f64)> = patch
        .formants
        .iter()
        .map(|f| {
            (
                f.fq_start + (f.fq_end - f.fq_start) * frac,
                f.amp_start + (f.amp_end - f.amp_start) * frac,
                f.bw_start + (f.bw_end - f.bw_start) * frac,
            )
        })
        .collect();

    let measured: Vec<Option<f64>> = formants
        .iter()
        .map(|&(fq, _, bw)| {
            peaks
                .iter()
                .find(|&&(f, _)| (f - fq).abs() <= bw.max(60.0))
                .map(|&(_, db)| db)
        })
        .collect();

    for i in 0..formants.len() {
        for j in 0..formants.len() {
            let (fq_i, amp_i, bw_i) = formants[i];
            let (fq_j, amp_j, bw_j) = formants[j];
            let separated = (fq_i - fq_j).abs() > 2.0 * bw_i.max(bw_j);
            if !separated || amp_i <= amp_j {
                continue;
            }
            if let (Some(db_i), Some(db_j)) = (measured[i], measured[j]) {
                assert!(
                    db_i >= db_j - 3.0,
                    "formant {} ({amp_i} dB) measured {db_i:.1} dB below formant {} \
                     ({amp_j} dB) at {db_j:.1} dB",
                    i + 1,
                    j + 1
                );
            }
        }
    }
}

/// Buffer length equals round(dur * sample_rate) for every die-selectable
/// duration.
#[test]
fn duration_law_over_bank_durations() {
    let bank = ParameterBank::default();
    for &dur in &bank.dur {
        let patch = VoicePatch {
            dur,
            adsr: qmuse::voice::Adsr::for_duration(dur),
            ..Default::default()
        };
        for rate in [22_050u32, 44_100] {
            let buffer = render_voice(&patch, &RenderSettings::with_sample_rate(rate)).unwrap();
            assert_eq!(
                buffer.samples.len(),
                (dur * f64::from(rate)).round() as usize
            );
        }
    }
}

/// Gain staging keeps every sample within [-1, 1]; spot-checked on a
/// structured subset of die patches (the exhaustive sweep lives in
/// `no_clipping_exhaustive`).
#[test]
fn no_clipping_on_patch_subset() {
    let bank = ParameterBank::default();
    let rules = canonical_rules();
    let settings = RenderSettings::with_sample_rate(22_050);
    let subset = [0u16, 511, 0b100101101, 0b010010010, 73, 262, 389, 444];
    for value in subset {
        let patch = retrieve_patch(&measurement_from(value), &bank, &rules).unwrap();
        let buffer = render_voice(&patch, &settings).unwrap();
        let peak = buffer.samples.iter().fold(0.0f32, |a, &b| a.max(b.abs()));
        assert!(peak <= 1.0, "measurement {value:#011b} clipped at {peak}");
        assert!(peak > 0.0, "measurement {value:#011b} rendered silence");
    }
}

/// Exhaustive no-clipping sweep over all 512 die patches at 22.05 kHz.
/// Slow; run with `cargo test --release -- --ignored`.
#[test]
#[ignore = "renders all 512 patches; minutes in debug builds"]
fn no_clipping_exhaustive() {
    let bank = ParameterBank::default();
    let rules = canonical_rules();
    let settings = RenderSettings::with_sample_rate(22_050);
    for value in 0..512u16 {
        let patch = retrieve_patch(&measurement_from(value), &bank, &rules).unwrap();
        let buffer = render_voice(&patch, &settings).unwrap();
        let peak = buffer.samples.iter().fold(0.0f32, |a, &b| a.max(b.abs()));
        assert!(peak <= 1.0, "measurement {value:#011b} clipped at {peak}");
    }
}
