//! Digests built from inner-product tests.
//!
//! The input is padded with a single `1` bit so that strings of different
//! lengths map to distinct vectors. Digest bit `t` is the inner product with
//! an unbounded coin stream seeded by lane `t`, which keeps coin consumption
//! at one word per digest bit whatever the input length. Two parties whose
//! histories have diverged in length therefore stay coin-aligned afterwards.

use crate::bits::{BitString, Rows};
use crate::coins::{CoinBlock, SharedCoins};
use crate::primitives::inner_product::parity;
use crate::primitives::universe_hash::{mod_m61, MERSENNE61};

/// Reserves the coins for a `c_bits` digest.
pub fn checksum_block(c_bits: usize, coins: &mut SharedCoins) -> CoinBlock {
    coins.reserve(c_bits as u64)
}

/// Digest of `value` under a block from [`checksum_block`].
pub fn checksum_with(block: &CoinBlock, value: &BitString) -> BitString {
    digest_lanes(block, block.len_words() as usize, value)
}

fn digest_lanes(block: &CoinBlock, c: usize, value: &BitString) -> BitString {
    let len = value.len();
    let words = value.words();
    let mut out = BitString::with_capacity(c);
    for t in 0..c as u64 {
        let mut acc = 0u64;
        for (q, &w) in words.iter().enumerate() {
            acc ^= w & block.lane_word(t, q as u64);
        }
        // padding bit at position `len`
        let pad = block.lane_word(t, (len / 64) as u64) >> (len % 64);
        let bit = parity(acc) ^ (pad & 1 == 1);
        out.push(bit);
    }
    out
}

pub fn checksum(value: &BitString, c_bits: usize, coins: &mut SharedCoins) -> BitString {
    let block = checksum_block(c_bits, coins);
    checksum_with(&block, value)
}

/// Coins for [`row_digest`]: `c_bits` digest lanes plus a fingerprint point.
pub fn row_digest_block(c_bits: usize, coins: &mut SharedCoins) -> CoinBlock {
    coins.reserve(c_bits as u64 + 1)
}

/// Digest for large row matrices. Each row is reduced to a polynomial
/// fingerprint over GF(2^61 - 1) (32-bit chunks, one shared random point),
/// and the fingerprints get the inner-product digest. Two matrices of the
/// same shape that differ collide with probability at most
/// 2^-c + ceil(width/32) / (2^61 - 1), at a cost linear in the input instead
/// of c times the input.
pub fn row_digest(block: &CoinBlock, rows: &Rows) -> BitString {
    let c = block.len_words() as usize - 1;
    let x = 1 + block.lane_word(c as u64, 0) % (MERSENNE61 - 1);
    let mut fps = BitString::with_capacity(rows.count() * 64);
    for i in 0..rows.count() {
        let mut h = 0u64;
        let mut col = 0;
        while col < rows.width {
            let n = (rows.width - col).min(32);
            h = mod_m61(h as u128 * x as u128 + rows.field(i, col, n) as u128);
            col += n;
        }
        fps.push_bits(h, 64);
    }
    digest_lanes(block, c, &fps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_digest_separates_rows() {
        let mut coins = SharedCoins::new(4);
        let block = row_digest_block(32, &mut coins);
        let mut a = Rows::new(60);
        let mut b = Rows::new(60);
        for i in 0..5u64 {
            a.push_value(i);
            b.push_value(if i == 3 { 1 << 40 } else { i });
        }
        assert_eq!(row_digest(&block, &a), row_digest(&block, &a.clone()));
        assert_ne!(row_digest(&block, &a), row_digest(&block, &b));
        assert_eq!(row_digest(&block, &a).len(), 32);
    }

    #[test]
    fn equal_inputs_equal_digests() {
        let v = BitString::from_u64(0x1234, 16);
        for seed in 0..20 {
            let mut a = SharedCoins::new(seed);
            let mut b = SharedCoins::new(seed);
            assert_eq!(checksum(&v, 32, &mut a), checksum(&v, 32, &mut b));
        }
    }

    #[test]
    fn coin_use_is_length_independent() {
        let mut a = SharedCoins::new(1);
        let mut b = SharedCoins::new(1);
        checksum(&BitString::zeros(10), 8, &mut a);
        checksum(&BitString::zeros(1000), 8, &mut b);
        assert_eq!(a.draw_counter(), b.draw_counter());
    }

    #[test]
    fn prefix_padding_separates_lengths() {
        // "0" and "00" differ only in length; with 32 digest bits a collision
        // has probability 2^-32 per seed.
        let mut hits = 0;
        for seed in 0..200 {
            let mut a = SharedCoins::new(seed);
            let mut b = SharedCoins::new(seed);
            if checksum(&BitString::zeros(1), 32, &mut a) == checksum(&BitString::zeros(2), 32, &mut b) {
                hits += 1;
            }
        }
        assert_eq!(hits, 0);
    }
}
