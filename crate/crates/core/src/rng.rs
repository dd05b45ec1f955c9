//! Deterministic random streams.
//!
//! Every random choice in the crate flows through ChaCha8 streams derived
//! from one u64 seed, so a system is reproducible bit for bit from
//! (signature, widths, t, seed). Parallel constraint set `i` draws from
//! stream `i + 1`; stream 0 is for callers that need scratch randomness
//! (corpus synthesis, fold shuffling).

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The stream for parallel constraint set `set_index`.
#[must_use]
pub fn set_stream(seed: u64, set_index: usize) -> ChaCha8Rng {
    stream(seed, set_index as u64 + 1)
}

/// An independent deterministic stream for the given domain tag.
#[must_use]
pub fn stream(seed: u64, domain: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(domain);
    rng
}
