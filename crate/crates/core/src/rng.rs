//! Seeded random streams.
//!
//! Every chain owns a `ChaCha8Rng`. Independent streams for sweep points and
//! repetitions are obtained by keeping the base seed and selecting a distinct
//! ChaCha stream id, so the per-point randomness does not depend on the
//! order in which points are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type ChainRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> ChainRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream `stream` of the generator rooted at `seed`.
pub fn stream(seed: u64, stream: u64) -> ChainRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Packs a grid index and a repetition index into one stream id.
pub fn stream_id(point: u32, repetition: u32) -> u64 {
    ((point as u64) << 32) | repetition as u64
}

/// Derives a child seed from `seed` and `stream` (SplitMix64 finaliser).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
