//! FOF-style formant singing-voice synthesis: five parallel formant
//! generators with linearly ramped controls, vibrato and an ADSR envelope,
//! plus WAV output and a spectral analyzer for checking the result.

mod analysis;
mod patch;
mod render;
mod wav;

pub use analysis::spectral_peaks;
pub use patch::{Adsr, Formant, VoicePatch};
pub use render::{ramp, render_voice, AudioBuffer, RenderSettings};
pub use wav::{wav_bytes, write_wav};

#[derive(Debug, thiserror::Error)]
pub enum VoiceError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("file error: {0}")]
    Io(#[from] std::io::Error),
}
