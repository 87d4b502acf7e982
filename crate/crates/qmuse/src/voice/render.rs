use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::patch::{Adsr, VoicePatch};
use super::VoiceError;

/// Output format of the renderer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderSettings {
    pub sample_rate: u32,
    pub bit_depth: u16,
    pub channels: u16,
}

impl Default for RenderSettings {
    fn default() -> Self {
        Self {
            sample_rate: 44_100,
            bit_depth: 16,
            channels: 1,
        }
    }
}

impl RenderSettings {
    pub fn with_sample_rate(sample_rate: u32) -> Self {
        Self {
            sample_rate,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), VoiceError> {
        if self.sample_rate < 8_000 {
            return Err(VoiceError::InvalidArgument(format!(
                "sample_rate must be at least 8000 Hz, got {}",
                self.sample_rate
            )));
        }
        if self.bit_depth != 16 || self.channels != 1 {
            return Err(VoiceError::InvalidArgument(
                "only 16-bit mono output is supported".into(),
            ));
        }
        Ok(())
    }
}

/// Rendered mono audio; samples stay within [-1, 1] after gain staging.
#[derive(Clone, Debug, PartialEq)]
pub struct AudioBuffer {
    pub samples: Vec<f32>,
    pub sample_rate: u32,
}

impl AudioBuffer {
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / f64::from(self.sample_rate)
    }
}

/// Linear interpolation from `start` at t=0 to `end` at t=dur.
pub fn ramp(start: f64, end: f64, t: f64, dur: f64) -> Result<f64, VoiceError> {
    if dur <= 0.0 || !dur.is_finite() {
        return Err(VoiceError::InvalidArgument(format!(
            "dur must be positive, got {dur}"
        )));
    }
    if !(0.0..=dur).contains(&t) {
        return Err(VoiceError::InvalidArgument(format!(
            "t = {t} outside [0, {dur}]"
        )));
    }
    Ok(lerp(start, end, t / dur))
}

fn lerp(start: f64, end: f64, frac: f64) -> f64 {
    start + (end - start) * frac
}

/// Grain excitation rise time: half a period of the formant frequency,
/// capped at 2 ms.
const MAX_RISE_S: f64 = 0.002;
/// A grain is dropped once its decay envelope falls below this.
const GRAIN_FLOOR: f64 = 1e-4;

/// Render a patch to audio with granular formant synthesis.
///
/// A grain burst is emitted each time the accumulated phase of the
/// vibrato-modulated fundamental wraps. Each formant contributes one grain
/// per burst: a sinusoid at the formant frequency under a raised-cosine rise
/// and an exponential decay whose rate is set by the formant bandwidth. All
/// grain parameters are frozen at emission time from the patch's linear
/// ramps. The summed grains are shaped by the ADSR envelope and loudness,
/// then uniformly rescaled if the summed signal would leave [-1, 1].
pub fn render_voice(
    patch: &VoicePatch,
    settings: &RenderSettings,
) -> Result<AudioBuffer, VoiceError> {
    settings.validate()?;
    patch.validate()?;

    let rate = f64::from(settings.sample_rate);
    let num_samples = (patch.dur * rate).round() as usize;
    let mut mix = vec![0.0f64; num_samples];

    // Emission instants of the grain train.
    let mut emissions = Vec::new();
    let mut phase = 1.0f64; // wrap immediately: the first burst is at t = 0
    for i in 0..num_samples {
        let t = i as f64 / rate;
        let f0 = lerp(patch.fnd_start, patch.fnd_end, t / patch.dur)
            * (1.0 + patch.vibrato_depth * (2.0 * PI * patch.vibrato_rate * t).sin());
        phase += f0 / rate;
        if phase >= 1.0 {
            phase -= 1.0;
            emissions.push(i);
        }
    }

    for formant in &patch.formants {
        for &start in &emissions {
            let t0 = start as f64 / rate;
            let frac = t0 / patch.dur;
            let fq = lerp(formant.fq_start, formant.fq_end, frac);
            let bw = lerp(formant.bw_start, formant.bw_end, frac);
            let amp = 10f64.powf(lerp(formant.amp_start, formant.amp_end, frac) / 20.0);
            add_grain(&mut mix[start..], rate, fq, bw, amp);
        }
    }

    let mut samples = Vec::with_capacity(num_samples);
    let mut peak = 0.0f64;
    for (i, &m) in mix.iter().enumerate() {
        let t = i as f64 / rate;
        let s = m * envelope_at(&patch.adsr, t, patch.dur) * patch.ldns;
        peak = peak.max(s.abs());
        samples.push(s);
    }
    if peak > 1.0 {
        let scale = 1.0 / peak;
        for s in &mut samples {
            *s *= scale;
        }
    }

    Ok(AudioBuffer {
        samples: samples.into_iter().map(|s| s as f32).collect(),
        sample_rate: settings.sample_rate,
    })
}

/// Add one grain starting at `out[0]`: amp * rise(τ) * e^(-π bw τ) * sin(2π fq τ),
/// truncated where the decay passes below `GRAIN_FLOOR` or the buffer ends.
///
/// The decaying sinusoid is advanced with one complex multiply per sample:
/// z_k = amp * e^((-π bw + i 2π fq) k / rate) and the contribution is Im(z_k).
fn add_grain(out: &mut [f64], rate: f64, fq: f64, bw: f64, amp: f64) {
    let rise = (1.0 / (2.0 * fq)).min(MAX_RISE_S);
    let tail = (1.0 / GRAIN_FLOOR).ln() / (PI * bw);
    let len = ((tail * rate).ceil() as usize + 1).min(out.len());

    let step = Complex64::from_polar((-PI * bw / rate).exp(), 2.0 * PI * fq / rate);
    let mut z = Complex64::new(amp, 0.0);
    for (k, slot) in out.iter_mut().take(len).enumerate() {
        let tau = k as f64 / rate;
        let gain = if tau < rise {
            0.5 * (1.0 - (PI * tau / rise).cos())
        } else {
            1.0
        };
        *slot += gain * z.im;
        z *= step;
    }
}

/// Piecewise-linear attack/decay/sustain/release gain at time `t`.
fn envelope_at(adsr: &Adsr, t: f64, dur: f64) -> f64 {
    if adsr.attack > 0.0 && t < adsr.attack {
        return t / adsr.attack;
    }
    let after_attack = t - adsr.attack;
    if adsr.decay > 0.0 && after_attack < adsr.decay {
        return 1.0 - (1.0 - adsr.sustain_level) * (after_attack / adsr.decay);
    }
    let release_start = dur - adsr.release;
    if t >= release_start && adsr.release > 0.0 {
        return (adsr.sustain_level * (dur - t) / adsr.release).max(0.0);
    }
    adsr.sustain_level
}
