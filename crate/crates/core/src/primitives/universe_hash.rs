//! Pairwise-independent hashing `((a*u + b) mod p) mod m` with `p = 2^61 - 1`.
//!
//! Inputs are reduced mod p first, so the family is pairwise independent on
//! universes below 2^61 - 1. The final `mod m` costs at most a factor
//! `(1 + m/p)^2` over the ideal `1/m` collision rate; the tests budget a
//! factor 2.

use serde::{Deserialize, Serialize};

use crate::coins::SharedCoins;

pub const MERSENNE61: u64 = (1u64 << 61) - 1;

#[inline]
pub fn mod_m61(x: u128) -> u64 {
    let m = MERSENNE61 as u128;
    // 2^61 = 1 (mod p); three folds bring any u128 below 2p
    let s = (x & m) + (x >> 61);
    let s = (s & m) + (s >> 61);
    let s = (s & m) + (s >> 61);
    let mut r = s as u64;
    if r >= MERSENNE61 {
        r -= MERSENNE61;
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairwiseHash {
    pub a: u64,
    pub b: u64,
    pub m: u64,
}

impl PairwiseHash {
    /// `a` in [1, p), `b` in [0, p), both from the next 128 coin bits.
    pub fn draw(m: u64, coins: &mut SharedCoins) -> Self {
        let (w0, w1) = (coins.draw_u64(), coins.draw_u64());
        Self::from_words(m, w0, w1)
    }

    pub fn from_words(m: u64, w0: u64, w1: u64) -> Self {
        assert!(m >= 1);
        PairwiseHash {
            a: 1 + w0 % (MERSENNE61 - 1),
            b: w1 % MERSENNE61,
            m,
        }
    }

    #[inline]
    pub fn raw(&self, u: u64) -> u64 {
        let u = u % MERSENNE61;
        mod_m61(self.a as u128 * u as u128 + self.b as u128)
    }

    #[inline]
    pub fn eval(&self, u: u64) -> u64 {
        self.raw(u) % self.m
    }
}

pub fn pairwise_universe_hash(u: u64, target_size: u64, coins: &mut SharedCoins) -> u64 {
    PairwiseHash::draw(target_size, coins).eval(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mersenne_reduction_matches_naive() {
        for &x in &[0u128, 1, MERSENNE61 as u128, (MERSENNE61 as u128) * 7 + 3, u128::from(u64::MAX) * u128::from(u64::MAX >> 3)] {
            assert_eq!(mod_m61(x) as u128, x % MERSENNE61 as u128);
        }
    }

    #[test]
    fn target_one_is_constant() {
        let mut c = SharedCoins::new(2);
        for u in 0..100 {
            assert_eq!(pairwise_universe_hash(u, 1, &mut c), 0);
        }
    }

    #[test]
    fn same_coins_same_output() {
        let mut a = SharedCoins::new(8);
        let mut b = SharedCoins::new(8);
        assert_eq!(pairwise_universe_hash(77, 1000, &mut a), pairwise_universe_hash(77, 1000, &mut b));
    }
}
