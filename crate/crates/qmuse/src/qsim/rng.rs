//! Seedable randomness shared by the simulator and the classical generators.
//!
//! All stochastic code in this crate draws from ChaCha8. A run is fully
//! determined by its `u64` seed; seed 0 is valid. Shot-level parallelism is
//! possible because each shot gets its own counter-addressed stream rather
//! than a slice of one sequential stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The one PRNG used everywhere a module needs randomness.
pub type SimRng = ChaCha8Rng;

/// RNG for one shot of a circuit execution.
///
/// Stream `shot` of the ChaCha8 instance keyed by `seed`, so shot i's draws
/// do not depend on how many draws shots 0..i made.
pub fn shot_rng(seed: u64, shot: u64) -> SimRng {
    let mut rng = SimRng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Derive an independent sub-seed from a master seed and an index.
///
/// SplitMix64 finalizer over `seed XOR golden-ratio-spaced index`. Used when
/// one user-facing seed has to fan out into many circuit executions (walk
/// steps, die rolls) without correlating neighbouring indices.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
