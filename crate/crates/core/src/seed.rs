//! Portable seed derivation.
//!
//! Seeds are mixed with the SplitMix64 finalizer and strings are folded in
//! with 64-bit FNV-1a, both of which are fully specified and platform
//! independent.

/// SplitMix64 output function applied to `x`.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// Combines a sequence of words into one seed.
pub fn mix(words: &[u64]) -> u64 {
    words.iter().fold(0u64, |acc, &w| splitmix64(acc ^ splitmix64(w)))
}

/// Seed of map `map_index` at environment size `size`.
pub fn map_seed(base: u64, size: u64, map_index: u64) -> u64 {
    mix(&[base, size, map_index])
}

/// Seed of the policy RNG for one experiment tuple.
pub fn tuple_seed(base: u64, tuple_id: &str) -> u64 {
    mix(&[base, fnv1a(tuple_id.as_bytes())])
}
