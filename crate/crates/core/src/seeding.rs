//! Deterministic RNG stream derivation.
//!
//! Every independent unit of work (a market within a generation, a corpus run,
//! the selection step) draws from its own ChaCha stream keyed by the master
//! seed, a domain tag and an index, so results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Specs = 1,
    Market = 2,
    Selection = 3,
    Init = 4,
    Corpus = 5,
    Backtest = 6,
    Analysis = 7,
}

/// RNG for `(domain, index)` under `seed`.
pub fn stream(seed: u64, domain: Domain, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(domain as u64)));
    rng.set_stream(index);
    rng
}

/// Packs a `(generation, slot)` pair into a stream index.
pub fn pair_index(major: u64, minor: u64) -> u64 {
    (major << 32) | (minor & 0xffff_ffff)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
