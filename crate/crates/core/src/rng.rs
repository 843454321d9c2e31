//! Reproducible random streams.
//!
//! Every sampling loop derives one ChaCha stream per trial from the caller's
//! seed, so results do not depend on scheduling or on how many trials ran
//! before.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SampleRng = ChaCha8Rng;

/// The generator for `stream` under `seed`.
pub fn stream(seed: u64, stream: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
