use std::io::Write;
use std::path::Path;

use super::render::AudioBuffer;
use super::VoiceError;

/// Encode a buffer as a canonical 44-byte-header RIFF/WAVE file:
/// PCM, 16-bit signed little-endian, mono. Samples are clamped to [-1, 1],
/// scaled by 32767 and rounded to nearest.
pub fn wav_bytes(buffer: &AudioBuffer) -> Result<Vec<u8>, VoiceError> {
    if buffer.samples.is_empty() {
        return Err(VoiceError::InvalidArgument(
            "cannot encode an empty buffer".into(),
        ));
    }
    let data_size = buffer.samples.len() as u32 * 2;
    let mut bytes = Vec::with_capacity(44 + data_size as usize);
    bytes.extend_from_slice(b"RIFF");
    bytes.extend_from_slice(&(36 + data_size).to_le_bytes());
    bytes.extend_from_slice(b"WAVE");
    bytes.extend_from_slice(b"fmt ");
    bytes.extend_from_slice(&16u32.to_le_bytes()); // PCM fmt chunk size
    bytes.extend_from_slice(&1u16.to_le_bytes()); // PCM
    bytes.extend_from_slice(&1u16.to_le_bytes()); // mono
    bytes.extend_from_slice(&buffer.sample_rate.to_le_bytes());
    bytes.extend_from_slice(&(buffer.sample_rate * 2).to_le_bytes()); // byte rate
    bytes.extend_from_slice(&2u16.to_le_bytes()); // block align
    bytes.extend_from_slice(&16u16.to_le_bytes()); // bits per sample
    bytes.extend_from_slice(b"data");
    bytes.extend_from_slice(&data_size.to_le_bytes());
    for &s in &buffer.samples {
        let q = (f64::from(s).clamp(-1.0, 1.0) * 32767.0).round() as i16;
        bytes.extend_from_slice(&q.to_le_bytes());
    }
    Ok(bytes)
}

/// Write [`wav_bytes`] to `path`.
pub fn write_wav(buffer: &AudioBuffer, path: impl AsRef<Path>) -> Result<(), VoiceError> {
    let bytes = wav_bytes(buffer)?;
    let mut file = std::fs::File::create(path)?;
    file.write_all(&bytes)?;
    Ok(())
}
