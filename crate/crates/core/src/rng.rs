//! Deterministic, order-independent random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 generator whose
//! seed is a hash of a path of integers, for example
//! `(seed, scenario, replicate, domain, index)`. Two computations sharing a
//! path prefix but differing in any later component get unrelated streams,
//! so results do not depend on the order in which parallel workers run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Domain tags separating the uses of a replicate's streams.
pub mod domain {
    pub const SAMPLE: u64 = 0x5341_4d50;
    pub const BOOTSTRAP: u64 = 0x424f_4f54;
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hashes a path of integers into a 64-bit stream seed.
pub fn stream_seed(path: &[u64]) -> u64 {
    path.iter()
        .fold(0x6a09_e667_f3bc_c908, |acc, &part| splitmix64(acc ^ splitmix64(part)))
}

/// A generator for the stream identified by `path`.
pub fn stream(path: &[u64]) -> StreamRng {
    StreamRng::seed_from_u64(stream_seed(path))
}
