//! qmuse: quantum-dice music generation on a verifiable state-vector
//! simulator.
//!
//! Three generators share one execution substrate:
//!
//! - [`hyperdie`] + [`voice`]: a 9-qubit all-Hadamard "hyper-die" whose
//!   single measurement selects the control parameters of a five-formant
//!   singing-voice synthesizer, rendered to WAV.
//! - [`qwalk`] + [`score`]: a 5-qubit quantum walk over the vertices of a
//!   cube, generating pitch and duration code streams that decode to a
//!   Standard MIDI File.
//! - [`markov`]: classical Markov-chain and random-walk note generators
//!   over a C4 major scale, batch or interactive.
//!
//! [`qsim`] is the simulator; [`net`] exposes any [`qsim::Backend`] over
//! newline-delimited JSON on TCP and provides the matching client, so the
//! generators run identically against a local simulator or a remote server.
//! [`config`] is the JSON config file shared by the CLI.
//!
//! Everything is deterministic per seed: circuits sample shot i from an RNG
//! stream derived from (seed, i), and the generators fan per-step sub-seeds
//! out of the user seed (see [`qsim::derive_seed`]).

pub mod config;
pub mod hyperdie;
pub mod markov;
pub mod net;
pub mod qsim;
pub mod qwalk;
pub mod score;
pub mod voice;
