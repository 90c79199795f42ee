//! Seed fan-out: every randomized stage draws from a seed derived from one
//! master seed and the stage's name, so stages stay independent of each other.

use sha2::{Digest, Sha256};

/// Derives the seed for `stage` from `master`.
///
/// The derivation is the first eight bytes (little-endian) of
/// `SHA-256(master.to_le_bytes() || stage)`.
pub fn derive(master: u64, stage: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update(stage.as_bytes());
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}
