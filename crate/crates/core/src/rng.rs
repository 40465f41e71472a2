//! Seed plumbing. One user-facing `u64` seed fans out into independent
//! deterministic streams, one per (purpose, index) pair, so parallel ensemble
//! members never share or race a generator.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// splitmix64 finalizer; good avalanche, cheap, stable across platforms.
pub(crate) fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derive a child seed for a named purpose. Purposes are compile-time
/// constants; collisions across distinct (purpose, index) pairs are as
/// unlikely as splitmix64 collisions.
pub fn child_seed(root: u64, purpose: &str, index: u64) -> u64 {
    let mut h = mix(root);
    for &b in purpose.as_bytes() {
        h = mix(h ^ b as u64);
    }
    mix(h ^ index)
}

/// Counter-based generator for a named stream. ChaCha8 keeps replay exact
/// regardless of how many draws other streams consumed.
pub fn stream(root: u64, purpose: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(child_seed(root, purpose, index))
}
