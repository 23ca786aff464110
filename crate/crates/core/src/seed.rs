// SPDX-License-Identifier: Apache-2.0

/// Derives the seed of an independent stream from a master seed.
///
/// SplitMix64 finalizer applied to the master seed offset by the stream
/// index times the golden-ratio increment.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
