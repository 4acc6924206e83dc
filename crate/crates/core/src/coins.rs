//! Public randomness shared by both parties.
//!
//! The coin string is a counter-indexed pseudorandom function of the seed:
//! word `i` is `mix64(key + i * GOLDEN)`. Both parties hold a copy of
//! [`SharedCoins`] and consume it in the same order, so they see identical
//! bits without communicating. The counter only moves forward, which is what
//! gives a rewound protocol fresh coins.

use serde::{Deserialize, Serialize};

use crate::bits::BitString;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const LANE_STEP: u64 = 0xd1b5_4a32_d192_ed03;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for trial `index` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    mix64(mix64(seed ^ 0x5eed).wrapping_add(index.wrapping_mul(GOLDEN)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharedCoins {
    seed: u64,
    /// Bits consumed so far.
    draw_counter: u64,
}

impl SharedCoins {
    pub fn new(seed: u64) -> Self {
        SharedCoins {
            seed,
            draw_counter: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn draw_counter(&self) -> u64 {
        self.draw_counter
    }

    #[inline]
    fn key(&self) -> u64 {
        mix64(self.seed)
    }

    #[inline]
    fn word_at(key: u64, index: u64) -> u64 {
        mix64(key.wrapping_add(index.wrapping_mul(GOLDEN)))
    }

    /// The next `n` coin bits.
    pub fn draw_bits(&mut self, n: usize) -> BitString {
        let key = self.key();
        let mut out = BitString::with_capacity(n);
        let mut pos = self.draw_counter;
        let end = pos + n as u64;
        while pos < end {
            let off = (pos & 63) as usize;
            let take = ((end - pos) as usize).min(64 - off);
            let w = Self::word_at(key, pos >> 6) >> off;
            out.push_bits(w, take);
            pos += take as u64;
        }
        self.draw_counter = end;
        out
    }

    pub fn draw_u64(&mut self) -> u64 {
        self.draw_bits(64).get_bits(0, 64)
    }

    /// Reserves `n_words` whole words for random access. The counter is first
    /// aligned to a word boundary.
    pub fn reserve(&mut self, n_words: u64) -> CoinBlock {
        let start = self.draw_counter.div_ceil(64);
        self.draw_counter = (start + n_words) * 64;
        CoinBlock {
            key: self.key(),
            start,
            n_words,
        }
    }
}

/// A contiguous run of coin words handed out by [`SharedCoins::reserve`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoinBlock {
    key: u64,
    start: u64,
    n_words: u64,
}

impl CoinBlock {
    pub fn len_words(&self) -> u64 {
        self.n_words
    }

    #[inline]
    pub fn word(&self, i: u64) -> u64 {
        debug_assert!(i < self.n_words, "coin word {i} outside block of {}", self.n_words);
        SharedCoins::word_at(self.key, self.start + i)
    }

    /// Word `q` of the unbounded stream seeded by lane `lane`. Used when the
    /// amount of randomness depends on data the parties may disagree on
    /// (such as a history length); the counter cost is one word per lane.
    #[inline]
    pub fn lane_word(&self, lane: u64, q: u64) -> u64 {
        mix64(self.word(lane) ^ (q.wrapping_add(1)).wrapping_mul(LANE_STEP))
    }
}
