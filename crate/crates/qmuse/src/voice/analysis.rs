use num_complex::Complex64;
use rustfft::FftPlanner;

use super::render::AudioBuffer;
use super::VoiceError;

/// Width of the Gaussian applied to the power spectrum before peak picking.
///
/// Sung material is a line spectrum at multiples of the fundamental; the
/// analyzer is after the formant envelope, not individual harmonics, so
/// neighbouring lines (vocal fundamentals run well under 2σ apart) are
/// fused into one hump per formant. Isolated tones are left where they are
/// because a Gaussian does not move a lone peak.
const SMOOTHING_SIGMA_HZ: f64 = 100.0;

/// Peaks below the strongest one by more than this many dB are dropped.
const FLOOR_DB: f64 = 100.0;

/// Spectral peaks of `buffer` in a window starting at `at_time`, strongest
/// first, as (frequency Hz, magnitude dB relative to the top peak).
///
/// The window is Hann-weighted and zero-padded so the bin spacing is at
/// most 10 Hz; peak frequencies are refined by parabolic interpolation of
/// log power.
pub fn spectral_peaks(
    buffer: &AudioBuffer,
    at_time: f64,
    window: f64,
) -> Result<Vec<(f64, f64)>, VoiceError> {
    let rate = f64::from(buffer.sample_rate);
    if window <= 0.0 || !window.is_finite() || at_time < 0.0 {
        return Err(VoiceError::InvalidArgument(format!(
            "bad analysis window [{at_time}, {at_time} + {window}]"
        )));
    }
    let start = (at_time * rate).round() as usize;
    let len = (window * rate).round() as usize;
    let end = start
        .checked_add(len)
        .filter(|&e| e <= buffer.samples.len())
        .ok_or_else(|| {
            VoiceError::InvalidArgument(format!(
                "analysis window [{at_time}, {}] outside buffer of {} s",
                at_time + window,
                buffer.duration()
            ))
        })?;
    if len < 32 {
        return Err(VoiceError::InvalidArgument(format!(
            "analysis window of {len} samples is too short"
        )));
    }

    // Hann-window the slice and zero-pad to a power of two spacing <= 10 Hz.
    let min_bins = (rate / 10.0).ceil() as usize;
    let fft_len = len.max(min_bins).next_power_of_two();
    let mut fft_in: Vec<Complex64> = Vec::with_capacity(fft_len);
    for (i, &s) in buffer.samples[start..end].iter().enumerate() {
        let w = 0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / (len - 1) as f64).cos());
        fft_in.push(Complex64::new(f64::from(s) * w, 0.0));
    }
    fft_in.resize(fft_len, Complex64::new(0.0, 0.0));

    FftPlanner::new()
        .plan_fft_forward(fft_len)
        .process(&mut fft_in);

    let bin_hz = rate / fft_len as f64;
    let half = fft_len / 2;
    let power: Vec<f64> = fft_in[..=half].iter().map(|c| c.norm_sqr()).collect();
    let smoothed = gaussian_smooth(&power, SMOOTHING_SIGMA_HZ / bin_hz);

    let max_power = smoothed.iter().cloned().fold(0.0f64, f64::max);
    if max_power <= 0.0 {
        return Ok(Vec::new());
    }
    let floor = max_power * 10f64.powf(-FLOOR_DB / 10.0);

    let mut peaks: Vec<(f64, f64)> = Vec::new();
    for i in 1..smoothed.len().saturating_sub(1) {
        let (l, c, r) = (smoothed[i - 1], smoothed[i], smoothed[i + 1]);
        if c > l && c >= r && c > floor {
            // Parabolic vertex of log power through the three bins.
            let (ll, lc, lr) = (l.max(floor).ln(), c.ln(), r.max(floor).ln());
            let denom = ll - 2.0 * lc + lr;
            let delta = if denom < 0.0 {
                0.5 * (ll - lr) / denom
            } else {
                0.0
            };
            let delta = delta.clamp(-0.5, 0.5);
            let freq = (i as f64 + delta) * bin_hz;
            let vertex_ln = lc - 0.25 * (ll - lr) * delta;
            peaks.push((freq, 10.0 * vertex_ln / std::f64::consts::LN_10));
        }
    }

    peaks.sort_by(|a, b| b.1.total_cmp(&a.1));
    if let Some(&(_, top_db)) = peaks.first() {
        for p in &mut peaks {
            p.1 -= top_db;
        }
    }
    Ok(peaks)
}

fn gaussian_smooth(power: &[f64], sigma_bins: f64) -> Vec<f64> {
    if sigma_bins < 0.5 {
        return power.to_vec();
    }
    let radius = (3.0 * sigma_bins).ceil() as usize;
    let kernel: Vec<f64> = (0..=radius)
        .map(|k| (-0.5 * (k as f64 / sigma_bins).powi(2)).exp())
        .collect();
    let mut out = vec![0.0; power.len()];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut acc = power[i] * kernel[0];
        let mut weight = kernel[0];
        for k in 1..=radius {
            if i >= k {
                acc += power[i - k] * kernel[k];
                weight += kernel[k];
            }
            if i + k < power.len() {
                acc += power[i + k] * kernel[k];
                weight += kernel[k];
            }
        }
        *slot = acc / weight;
    }
    out
}
