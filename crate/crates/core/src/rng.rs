//! Seeded random streams.
//!
//! A master seed spawns independent substreams addressed by a path of
//! indices, so every trial of a sweep owns its stream regardless of the
//! order in which workers pick trials up.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random stream type used by the library.
pub type Stream = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a 64-bit seed from a master seed and an index path.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(master), |acc, &idx| splitmix64(acc ^ splitmix64(idx)))
}

/// Stream seeded directly from `seed`.
pub fn stream(seed: u64) -> Stream {
    Stream::seed_from_u64(seed)
}

/// Substream for `path` under `master`.
pub fn substream(master: u64, path: &[u64]) -> Stream {
    stream(derive_seed(master, path))
}
