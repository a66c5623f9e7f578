//! Random streams for simulation replicates.
//!
//! Every replicate owns one ChaCha8 stream. The stream seed is derived from
//! `(base_seed, replicate_index)` by [`seed_for_replicate`], so replicates can be
//! run in any order, on any number of threads, and still reproduce bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used by all simulators in this crate.
pub type SimRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer. A bijection on `u64`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the stream used by replicate `index` of an experiment seeded with `base`.
///
/// The value is `mix64(base + (index + 1) * GOLDEN_GAMMA)` in wrapping
/// arithmetic. The multiplier is odd and `mix64` is a bijection, so the map is
/// injective in `index` for a fixed `base` and injective in `base` for a fixed
/// `index`. This formula is part of the output format: changing it changes
/// every recorded experiment.
pub fn seed_for_replicate(base: u64, index: u64) -> u64 {
    mix64(base.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Stream for replicate `index` of an experiment seeded with `base`.
pub fn replicate_rng(base: u64, index: u64) -> SimRng {
    SimRng::seed_from_u64(seed_for_replicate(base, index))
}
