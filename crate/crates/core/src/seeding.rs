//! Deterministic random streams.
//!
//! A run has one 64-bit master seed. Replica `r` draws from a ChaCha8 stream
//! seeded with `master ^ splitmix64(r)`, so each replica's output depends only
//! on `(master, r)` and not on how replicas are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Human-readable description of the replica seed derivation, recorded in outputs.
pub const SEED_DERIVATION: &str = "chacha8(seed_from_u64(master ^ splitmix64(replica)))";

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn replica_seed(master: u64, replica: u64) -> u64 {
    master ^ splitmix64(replica)
}

pub fn replica_rng(master: u64, replica: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(replica_seed(master, replica))
}
