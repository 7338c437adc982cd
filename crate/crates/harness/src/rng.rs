//! Per-trial RNG streams derived from a master seed.
//!
//! A stream index packs `(suite, case, trial)` into 64 bits; the generator is
//! ChaCha8 keyed by the master seed and positioned on that stream, so any
//! single trial can be replayed from `(seed, stream)` alone.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Trial slot reserved for per-case setup (algebra, flag, fixed subspaces).
pub const SETUP_TRIAL: u64 = 0xff_ffff;

pub fn stream_index(suite: u64, case: u64, trial: u64) -> u64 {
    debug_assert!(suite < 1 << 16 && case < 1 << 24 && trial < 1 << 24);
    (suite << 48) | (case << 24) | trial
}

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
