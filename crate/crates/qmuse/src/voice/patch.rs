use serde::{Deserialize, Serialize};

use super::VoiceError;

/// One formant generator's control values: frequency (Hz), amplitude
/// (dB attenuation from formant 1, so 0 or negative) and bandwidth (Hz),
/// each ramped linearly from its `_start` to its `_end` value over the
/// sound's duration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Formant {
    pub fq_start: f64,
    pub fq_end: f64,
    pub amp_start: f64,
    pub amp_end: f64,
    pub bw_start: f64,
    pub bw_end: f64,
}

impl Formant {
    pub fn fixed(fq: f64, amp: f64, bw: f64) -> Self {
        Self {
            fq_start: fq,
            fq_end: fq,
            amp_start: amp,
            amp_end: amp,
            bw_start: bw,
            bw_end: bw,
        }
    }
}

/// Attack/decay/release in seconds, sustain as a 0..=1 level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Adsr {
    pub attack: f64,
    pub decay: f64,
    pub sustain_level: f64,
    pub release: f64,
}

impl Adsr {
    /// The default envelope scales with the sound: 10% attack, 10% decay,
    /// 0.8 sustain, 20% release.
    pub fn for_duration(dur: f64) -> Self {
        Self {
            attack: 0.1 * dur,
            decay: 0.1 * dur,
            sustain_level: 0.8,
            release: 0.2 * dur,
        }
    }
}

/// The full control set of the five-formant synthesizer.
///
/// Formant amplitudes are attenuations relative to formant 1, which is the
/// 0 dB reference; formants 4 and 5 normally keep their fixed defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VoicePatch {
    pub formants: [Formant; 5],
    /// Fundamental frequency ramp (Hz).
    pub fnd_start: f64,
    pub fnd_end: f64,
    /// Duration in seconds.
    pub dur: f64,
    /// Loudness 0..=1.
    pub ldns: f64,
    /// Vibrato rate (Hz) and depth (fraction of the fundamental).
    pub vibrato_rate: f64,
    pub vibrato_depth: f64,
    pub adsr: Adsr,
}

impl Default for VoicePatch {
    /// A soprano-like /a/ vowel: three audible formants plus the fixed
    /// fourth and fifth, mild vibrato, 2-second envelope.
    fn default() -> Self {
        Self {
            formants: [
                Formant::fixed(800.0, 0.0, 80.0),
                Formant::fixed(1150.0, -6.0, 90.0),
                Formant::fixed(2900.0, -32.0, 120.0),
                Formant::fixed(3250.0, -24.0, 130.0),
                Formant::fixed(3700.0, -40.0, 140.0),
            ],
            fnd_start: 220.0,
            fnd_end: 220.0,
            dur: 2.0,
            ldns: 0.8,
            vibrato_rate: 5.5,
            vibrato_depth: 0.01,
            adsr: Adsr::for_duration(2.0),
        }
    }
}

impl VoicePatch {
    pub fn validate(&self) -> Result<(), VoiceError> {
        let bad = |msg: String| Err(VoiceError::InvalidArgument(msg));
        if self.dur <= 0.0 || !self.dur.is_finite() {
            return bad(format!("dur must be positive, got {}", self.dur));
        }
        for (k, f) in self.formants.iter().enumerate() {
            for (name, v) in [
                ("fq_start", f.fq_start),
                ("fq_end", f.fq_end),
                ("bw_start", f.bw_start),
                ("bw_end", f.bw_end),
            ] {
                if v <= 0.0 || !v.is_finite() {
                    return bad(format!(
                        "formant {} {name} must be positive, got {v}",
                        k + 1
                    ));
                }
            }
            for (name, v) in [("amp_start", f.amp_start), ("amp_end", f.amp_end)] {
                if v > 0.0 || !v.is_finite() {
                    return bad(format!(
                        "formant {} {name} is an attenuation and must be <= 0 dB, got {v}",
                        k + 1
                    ));
                }
            }
        }
        if self.formants[0].amp_start != 0.0 || self.formants[0].amp_end != 0.0 {
            return bad("formant 1 is the 0 dB reference; its amplitudes must be 0".into());
        }
        for (name, v) in [("fnd_start", self.fnd_start), ("fnd_end", self.fnd_end)] {
            if v <= 0.0 || !v.is_finite() {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(0.0..=1.0).contains(&self.ldns) {
            return bad(format!("ldns must be in 0..=1, got {}", self.ldns));
        }
        if self.vibrato_rate <= 0.0 || !self.vibrato_rate.is_finite() {
            return bad(format!(
                "vibrato_rate must be positive, got {}",
                self.vibrato_rate
            ));
        }
        if !(0.0..1.0).contains(&self.vibrato_depth) {
            return bad(format!(
                "vibrato_depth must be in 0..1, got {}",
                self.vibrato_depth
            ));
        }
        let a = &self.adsr;
        for (name, v) in [
            ("attack", a.attack),
            ("decay", a.decay),
            ("release", a.release),
        ] {
            if v < 0.0 || !v.is_finite() {
                return bad(format!("adsr {name} must be non-negative, got {v}"));
            }
        }
        if !(0.0..=1.0).contains(&a.sustain_level) {
            return bad(format!(
                "sustain_level must be in 0..=1, got {}",
                a.sustain_level
            ));
        }
        if a.attack + a.decay + a.release > self.dur {
            return bad(format!(
                "adsr attack+decay+release = {} exceeds dur = {}",
                a.attack + a.decay + a.release,
                self.dur
            ));
        }
        Ok(())
    }
}
