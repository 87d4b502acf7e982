//! The JSON configuration file shared by the CLI subcommands. Every section
//! is optional; missing sections fall back to the built-in defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::hyperdie::{CodeRule, ParameterBank};
use crate::markov::TransitionMatrix;
use crate::qwalk::{DictionarySwitch, DurationDictionary, PitchDictionary};
use crate::voice::{Adsr, Formant, VoicePatch};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("file error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Overrides for the voice defaults that the hyper-die does not select.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchOverrides {
    pub ldns: Option<f64>,
    pub vibrato_rate: Option<f64>,
    pub vibrato_depth: Option<f64>,
    /// Attack, decay and release as fractions of the duration, plus the
    /// sustain level.
    pub adsr: Option<AdsrFractions>,
    pub formant4: Option<FixedFormant>,
    pub formant5: Option<FixedFormant>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdsrFractions {
    pub attack: f64,
    pub decay: f64,
    pub sustain_level: f64,
    pub release: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedFormant {
    pub fq: f64,
    pub amp: f64,
    pub bw: f64,
}

impl PatchOverrides {
    /// Fold the overrides into a retrieved patch.
    pub fn apply_to(&self, patch: &mut VoicePatch) {
        if let Some(ldns) = self.ldns {
            patch.ldns = ldns;
        }
        if let Some(rate) = self.vibrato_rate {
            patch.vibrato_rate = rate;
        }
        if let Some(depth) = self.vibrato_depth {
            patch.vibrato_depth = depth;
        }
        if let Some(f) = self.adsr {
            patch.adsr = Adsr {
                attack: f.attack * patch.dur,
                decay: f.decay * patch.dur,
                sustain_level: f.sustain_level,
                release: f.release * patch.dur,
            };
        }
        if let Some(f4) = self.formant4 {
            patch.formants[3] = Formant::fixed(f4.fq, f4.amp, f4.bw);
        }
        if let Some(f5) = self.formant5 {
            patch.formants[4] = Formant::fixed(f5.fq, f5.amp, f5.bw);
        }
    }
}

/// The whole config file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub parameter_bank: Option<ParameterBank>,
    pub code_rules: Option<Vec<CodeRule>>,
    pub pitch_dictionary: Option<PitchDictionary>,
    pub duration_dictionary: Option<DurationDictionary>,
    #[serde(default)]
    pub dictionary_schedule: Vec<DictionarySwitch>,
    pub matrix: Option<TransitionMatrix>,
    pub patch: Option<PatchOverrides>,
}

impl ConfigFile {
    /// Parse from raw JSON bytes. Never panics on malformed input.
    pub fn from_slice(bytes: &[u8]) -> Result<Self, ConfigError> {
        let config: ConfigFile = serde_json::from_slice(bytes)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        Self::from_slice(&std::fs::read(path)?)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if let Some(bank) = &self.parameter_bank {
            bank.validate()
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        if let Some(rules) = &self.code_rules {
            if rules.is_empty() {
                return Err(ConfigError::Invalid("code_rules must not be empty".into()));
            }
            let bank = self.parameter_bank.clone().unwrap_or_default();
            for rule in rules {
                if bank.family(&rule.parameter).is_none() {
                    return Err(ConfigError::Invalid(format!(
                        "code rule references unknown parameter {:?}",
                        rule.parameter
                    )));
                }
                if rule.triple.iter().any(|&i| i > 8) {
                    return Err(ConfigError::Invalid(format!(
                        "code rule {:?} uses a triple index above 8",
                        rule.parameter
                    )));
                }
            }
        }
        if let Some(matrix) = &self.matrix {
            let report = crate::markov::validate_matrix(matrix);
            if !report.is_ok() {
                let first = &report.violations[0];
                return Err(ConfigError::Invalid(format!(
                    "matrix row {}: {}",
                    first.row, first.message
                )));
            }
        }
        Ok(())
    }
}
