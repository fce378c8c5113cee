//! Stable seed derivation.
//!
//! Seeds are mixed with the SplitMix64 finalizer so that derived streams do
//! not depend on the standard library's hasher, which is not guaranteed to be
//! stable across releases.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds a sequence of words into one seed. Order matters.
pub fn derive_seed(parts: &[u64]) -> u64 {
    let mut h = mix(GOLDEN ^ parts.len() as u64);
    for &p in parts {
        h = mix(h.wrapping_add(GOLDEN) ^ mix(p));
    }
    h
}

/// Seed words for a signed vector, prefixed by its length.
pub(crate) fn words_of(coeffs: &[i64]) -> impl Iterator<Item = u64> + '_ {
    std::iter::once(coeffs.len() as u64).chain(coeffs.iter().map(|&c| c as u64))
}
