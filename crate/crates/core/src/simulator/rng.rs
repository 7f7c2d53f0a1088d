//! Seeded random substreams.
//!
//! Each run owns two ChaCha8 streams keyed by the same master seed and
//! distinguished by stream id, so transmission and service draws never
//! depend on how events interleave. Two policies run with the same seed see
//! the same transmission and service sequences.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Transmission,
    Service,
}

impl Stage {
    fn stream_id(self) -> u64 {
        match self {
            Stage::Transmission => 1,
            Stage::Service => 2,
        }
    }
}

pub fn substream(seed: u64, stage: Stage) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stage.stream_id());
    rng
}

/// Inverse-transform exponential draw, `-ln(1 - u) / rate` with `u` in `[0, 1)`.
pub fn sample_exp<R: Rng>(rng: &mut R, rate: f64) -> f64 {
    let u: f64 = rng.gen();
    -(-u).ln_1p() / rate
}
