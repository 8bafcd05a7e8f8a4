//! Seeded random streams.
//!
//! Every consumer of randomness draws from a ChaCha stream addressed by
//! `(root seed, stream id)`. Replication `r` of an experiment uses its own
//! stream ids, so results do not depend on how replications are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream used to draw prior atoms.
pub const PRIOR_STREAM: u64 = u64::MAX;
/// Stream used by Monte Carlo true-risk fallbacks. Disjoint from data streams.
pub const ORACLE_STREAM: u64 = u64::MAX - 1;

/// Opens stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream holding the synthetic dataset of replication `rep`.
pub fn data_stream(seed: u64, rep: u64) -> StreamRng {
    stream_rng(seed, 2 * rep)
}

/// Stream holding the random probe distributions of replication `rep`.
pub fn probe_stream(seed: u64, rep: u64) -> StreamRng {
    stream_rng(seed, 2 * rep + 1)
}
