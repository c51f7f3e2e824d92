//! Seed derivation for reproducible, independently re-runnable stages.
//!
//! Every random consumer gets its own ChaCha stream derived from
//! (base seed, label, index). Derivation uses FNV-1a + SplitMix64 finalizers
//! so streams are stable across platforms and releases.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(mut h: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed from a base seed, a stage label, and an index.
pub fn derive_seed(base: u64, label: &str, index: u64) -> u64 {
    let mut h = fnv1a(FNV_OFFSET ^ base, label.as_bytes());
    h = fnv1a(h, &index.to_le_bytes());
    splitmix(h)
}

/// A seeded stream for (base, label, index).
pub fn stream(base: u64, label: &str, index: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(derive_seed(base, label, index))
}
