//! Seed derivation for independent, order-free random streams.

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for item `index` of stream `stream` under a base seed.
///
/// Distinct `(stream, index)` pairs give unrelated seeds, so work items can be
/// evaluated in any order (or concurrently) with identical results.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    mix(mix(mix(base) ^ stream.rotate_left(17)) ^ index)
}

/// Stream tags used across the crate.
pub(crate) mod streams {
    pub const CODEBOOK_L0: u64 = 0x10;
    pub const CODEBOOK_L1: u64 = 0x11;
    pub const CODEBOOK_L2: u64 = 0x12;
    pub const CODEBOOK_Q: u64 = 0x13;
    pub const TRIAL_SOURCE: u64 = 0x20;
    pub const TRIAL_ENCODER: u64 = 0x21;
    pub const SEARCH_RANDOM: u64 = 0x30;
}
