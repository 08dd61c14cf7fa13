//! Seeding conventions.
//!
//! Every stochastic operation takes an explicit 64-bit seed and runs on
//! `ChaCha8Rng`, which is portable and bit-exact across platforms. Child
//! seeds are derived with the SplitMix64 finalizer so that independent
//! streams never share a prefix.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// SplitMix64 output function.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of child stream `stream` under parent `seed`.
#[inline]
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

/// Seed of trial `index` under master seed `seed`: `splitmix64(seed ^ index)`.
#[inline]
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ index)
}

pub fn rng_from(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for child stream `stream` of `seed`.
pub fn stream(seed: u64, stream: u64) -> Rng {
    rng_from(derive_seed(seed, stream))
}
