//! Seed plumbing.
//!
//! A single experiment seed fans out into independent ChaCha streams so that
//! the draws for curve `i` (or replicate `r`) never depend on how many other
//! curves exist or on which thread generates them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream `index` of the generator keyed by `seed`.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from `(seed, tag, index)`.
pub fn derive_seed(seed: u64, tag: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ tag.rotate_left(17)) ^ index.rotate_left(41))
}

/// Tags used with [`derive_seed`] so unrelated consumers never share a stream.
pub mod tags {
    pub const REPLICATE: u64 = 0x5245_504C;
    pub const TIES: u64 = 0x5449_4553;
    pub const RTD: u64 = 0x0052_5444;
    pub const SPLIT: u64 = 0x5350_4C54;
    pub const PLUGIN: u64 = 0x504C_5547;
    pub const SHIFT: u64 = 0x5348_4654;
}
