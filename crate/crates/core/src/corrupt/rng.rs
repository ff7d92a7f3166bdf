//! Deterministic randomness: every frame's stream is a hash of
//! `(seed, frame_id, pattern, severity)`, so parallel workers need no
//! shared state and scheduling cannot change outputs.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::Pattern;

const DOMAIN: &[u8] = b"msfbench.rng.v1";

fn digest(seed: u64, frame_id: i64, pattern: Pattern, severity: u8) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(DOMAIN);
    hasher.update(seed.to_le_bytes());
    hasher.update(frame_id.to_le_bytes());
    hasher.update(pattern.code().as_bytes());
    hasher.update([severity]);
    hasher.finalize().into()
}

/// The random stream for one (job, frame) pair.
pub fn derive_rng(seed: u64, frame_id: i64, pattern: Pattern, severity: u8) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(digest(seed, frame_id, pattern, severity))
}

/// Compact per-frame seed recorded in manifests for reproduction audits.
pub fn frame_seed(seed: u64, frame_id: i64, pattern: Pattern, severity: u8) -> u64 {
    let d = digest(seed, frame_id, pattern, severity);
    u64::from_le_bytes(d[..8].try_into().expect("digest is 32 bytes"))
}
