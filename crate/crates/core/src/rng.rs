//! Keyed, counter-based random streams.
//!
//! Every draw is a pure function of its key, so results do not depend on the
//! order in which draws are requested or on how work is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a, used to fold names into keys.
pub fn hash_str(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// A key built from a sequence of words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey(u64);

impl StreamKey {
    pub fn new(seed: u64) -> Self {
        StreamKey(splitmix(seed))
    }

    /// Derives a child key; distinct words give independent-looking streams.
    pub fn with(self, word: u64) -> Self {
        StreamKey(splitmix(self.0 ^ splitmix(word.wrapping_add(0x632B_E59B_D9B4_E019))))
    }

    pub fn with_str(self, s: &str) -> Self {
        self.with(hash_str(s))
    }

    pub fn with_f64(self, x: f64) -> Self {
        self.with(x.to_bits())
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// Uniform draw in [0, 1) with 53 random bits.
    pub fn uniform(self) -> f64 {
        (splitmix(self.0) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// A full generator seeded from this key, for shuffles and bulk draws.
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}
