//! Reproducible random streams.
//!
//! Every random draw in a simulation comes from a ChaCha stream selected by
//! a [`StreamKey`], so results do not depend on how trials are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    Secret = 1,
    RandomMessage = 2,
    BobNoise = 3,
    EveNoise = 4,
    Construction = 5,
    Pattern = 6,
}

/// Identifies one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub point: u64,
    pub trial: u64,
    pub user: u8,
    pub purpose: Purpose,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl StreamKey {
    pub fn new(point: u64, trial: u64, user: u8, purpose: Purpose) -> Self {
        StreamKey { point, trial, user, purpose }
    }

    fn stream_id(&self) -> u64 {
        let mut h = splitmix64(self.point);
        h = splitmix64(h ^ self.trial);
        h = splitmix64(h ^ ((self.user as u64) << 8 | self.purpose as u64));
        h
    }
}

/// Opens the stream `key` under `master_seed`.
pub fn stream(master_seed: u64, key: StreamKey) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(key.stream_id());
    rng
}

/// Plain seeded generator for construction-time randomness.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
