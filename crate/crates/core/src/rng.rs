//! Seeded generator streams.
//!
//! Each agent owns independent ChaCha8 streams keyed by `(seed, agent id,
//! purpose)`, so results never depend on the order agents are processed in.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamPurpose {
    /// Mutation and neighbour scanning.
    Behaviour = 0,
    /// The create-versus-imitate draw.
    Decision = 1,
    /// Initial network weights.
    Memory = 2,
}

const PURPOSES: u64 = 3;

pub fn agent_stream(seed: u64, agent_id: usize, purpose: StreamPurpose) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(agent_id as u64 * PURPOSES + purpose as u64);
    rng
}

/// SplitMix64 finalizer.
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a base seed and a path of indices into a new seed.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix(base), |acc, &x| splitmix(acc ^ splitmix(x)))
}
