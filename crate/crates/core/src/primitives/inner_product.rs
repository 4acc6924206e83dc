//! Inner-product equality tests: the test bit is `<value, w> mod 2` for a
//! shared random `w`. Equal inputs always agree; unequal inputs agree with
//! probability exactly 1/2 per test.

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::coins::{CoinBlock, SharedCoins};

/// Shape of a hash/test family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashSpec {
    pub input_bits: usize,
    pub output_bits: usize,
    pub coin_bits: u64,
}

impl HashSpec {
    /// `b` inner-product tests on an `l`-bit value.
    pub fn inner_product(l: usize, b: usize) -> Self {
        HashSpec {
            input_bits: l,
            output_bits: b,
            coin_bits: (l * b) as u64,
        }
    }

    /// Collision bound for unequal inputs.
    pub fn collision_bound(&self) -> f64 {
        (-(self.output_bits as f64)).exp2()
    }
}

#[inline]
pub fn parity(v: u64) -> bool {
    v.count_ones() & 1 == 1
}

/// Parity of `a & b` over two equally long bit strings.
pub fn dot(a: &BitString, b: &BitString) -> bool {
    assert_eq!(a.len(), b.len());
    let acc = a.words().iter().zip(b.words()).fold(0u64, |acc, (x, y)| acc ^ (x & y));
    parity(acc)
}

pub fn inner_product_test(value: &BitString, coins: &mut SharedCoins) -> bool {
    let w = coins.draw_bits(value.len());
    dot(value, &w)
}

/// `b` independent tests; consumes `b * len(value)` coin bits.
pub fn test_bits(value: &BitString, b: usize, coins: &mut SharedCoins) -> BitString {
    let mut out = BitString::with_capacity(b);
    for _ in 0..b {
        out.push(inner_product_test(value, coins));
    }
    out
}

/// Test row for one coordinate of a vector instance. Test `t` on coordinate
/// `coord` uses coin word `coord * l + t` of `block`, masked to the value
/// width, so rows stay aligned no matter which subset of coordinates a party
/// is still testing.
pub fn keyed_test_row(block: &CoinBlock, coord: usize, l: usize, value: u64, mask: u64) -> BitString {
    let mut row = BitString::with_capacity(l);
    let base = (coord * l) as u64;
    let v = value & mask;
    let mut t = 0;
    while t < l {
        let n = (l - t).min(64);
        let mut chunk = 0u64;
        for s in 0..n {
            let w = block.word(base + (t + s) as u64);
            chunk |= (parity(v & w) as u64) << s;
        }
        row.push_bits(chunk, n);
        t += n;
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_vector_always_zero() {
        let mut c = SharedCoins::new(5);
        let z = BitString::zeros(3);
        for _ in 0..50 {
            assert!(!inner_product_test(&z, &mut c));
        }
    }

    #[test]
    fn exhaustive_two_bit_case() {
        // x = 01, y = 11 (LSB first): difference 10, so w agrees iff w_1 = 0.
        let x = BitString::from_bools(&[false, true]);
        let y = BitString::from_bools(&[true, true]);
        let agree = (0..4u64)
            .filter(|&w| {
                let w = BitString::from_u64(w, 2);
                dot(&x, &w) == dot(&y, &w)
            })
            .count();
        assert_eq!(agree, 2);
    }

    #[test]
    fn equal_values_equal_bits() {
        let v = BitString::from_u64(0xabcdef, 24);
        let mut a = SharedCoins::new(11);
        let mut b = SharedCoins::new(11);
        assert_eq!(test_bits(&v, 100, &mut a), test_bits(&v, 100, &mut b));
        assert!(test_bits(&v, 0, &mut a).is_empty());
    }

    #[test]
    fn keyed_rows_depend_only_on_coordinate() {
        let mut c = SharedCoins::new(4);
        let block = c.reserve(10 * 70);
        let r1 = keyed_test_row(&block, 3, 70, 0x55, 0xff);
        let r2 = keyed_test_row(&block, 3, 70, 0x55, 0xff);
        assert_eq!(r1, r2);
        assert_eq!(r1.len(), 70);
    }
}
