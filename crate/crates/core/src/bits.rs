//! Packed bit strings.
//!
//! Bit `i` lives in word `i / 64` at position `i % 64` (LSB first). Every
//! protocol message, test row and history segment is a `BitString`, so the
//! length is tracked exactly rather than rounded to bytes.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

#[inline]
fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitString {
            words: Vec::with_capacity(bits.div_ceil(64)),
            len: 0,
        }
    }

    pub fn zeros(len: usize) -> Self {
        BitString {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut s = Self::with_capacity(bits.len());
        for &b in bits {
            s.push(b);
        }
        s
    }

    /// Low `len` bits of `value`, LSB first.
    pub fn from_u64(value: u64, len: usize) -> Self {
        let mut s = Self::with_capacity(len);
        s.push_bits(value, len);
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let m = 1u64 << (i & 63);
        if b {
            self.words[i >> 6] |= m;
        } else {
            self.words[i >> 6] &= !m;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let b = self.get(i);
        self.set(i, !b);
    }

    #[inline]
    pub fn push(&mut self, b: bool) {
        if self.len & 63 == 0 {
            self.words.push(0);
        }
        if b {
            self.words[self.len >> 6] |= 1u64 << (self.len & 63);
        }
        self.len += 1;
    }

    /// Appends the low `n` bits of `value` (n <= 64).
    pub fn push_bits(&mut self, value: u64, n: usize) {
        assert!(n <= 64);
        if n == 0 {
            return;
        }
        let value = value & low_mask(n);
        let off = self.len & 63;
        if off == 0 {
            self.words.push(value);
        } else {
            let last = self.words.len() - 1;
            self.words[last] |= value << off;
            if off + n > 64 {
                self.words.push(value >> (64 - off));
            }
        }
        self.len += n;
    }

    /// Reads `n <= 64` bits starting at `pos`.
    pub fn get_bits(&self, pos: usize, n: usize) -> u64 {
        assert!(n <= 64 && pos + n <= self.len, "read {pos}+{n} past {}", self.len);
        if n == 0 {
            return 0;
        }
        let w = pos >> 6;
        let off = pos & 63;
        let mut v = self.words[w] >> off;
        if off + n > 64 {
            v |= self.words[w + 1] << (64 - off);
        }
        v & low_mask(n)
    }

    pub fn append(&mut self, other: &BitString) {
        if self.len & 63 == 0 {
            self.words.truncate(self.len >> 6);
            self.words.extend_from_slice(&other.words);
            self.len += other.len;
            return;
        }
        let mut pos = 0;
        while pos < other.len {
            let n = (other.len - pos).min(64);
            self.push_bits(other.get_bits(pos, n), n);
            pos += n;
        }
    }

    pub fn slice(&self, pos: usize, len: usize) -> BitString {
        assert!(pos + len <= self.len);
        let mut out = BitString::with_capacity(len);
        let mut p = 0;
        while p < len {
            let n = (len - p).min(64);
            out.push_bits(self.get_bits(pos + p, n), n);
            p += n;
        }
        out
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Bytes LSB-first, then lowercase hex. Trailing pad bits are zero.
    pub fn to_hex(&self) -> String {
        let nbytes = self.len.div_ceil(8);
        let mut s = String::with_capacity(nbytes * 2);
        for b in 0..nbytes {
            let byte = (self.words[b / 8] >> ((b % 8) * 8)) as u8;
            s.push_str(&format!("{byte:02x}"));
        }
        s
    }

    pub fn from_hex(hex: &str, len: usize) -> Option<Self> {
        if hex.len() != len.div_ceil(8) * 2 {
            return None;
        }
        let mut out = BitString::zeros(len);
        for (b, chunk) in hex.as_bytes().chunks(2).enumerate() {
            let byte = u8::from_str_radix(std::str::from_utf8(chunk).ok()?, 16).ok()?;
            for i in 0..8 {
                let idx = b * 8 + i;
                if (byte >> i) & 1 == 1 {
                    if idx >= len {
                        return None;
                    }
                    out.set(idx, true);
                }
            }
        }
        Some(out)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 128 {
            let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
            write!(f, "BitString({s})")
        } else {
            write!(f, "BitString(len={}, hex={}..)", self.len, &self.to_hex()[..16])
        }
    }
}

#[derive(Serialize, Deserialize)]
struct HexForm {
    len: usize,
    hex: String,
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        HexForm {
            len: self.len,
            hex: self.to_hex(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let h = HexForm::deserialize(d)?;
        BitString::from_hex(&h.hex, h.len)
            .ok_or_else(|| serde::de::Error::custom("malformed hex bit string"))
    }
}

/// Fixed-width rows packed back to back; row `i` is bits `[i*width, (i+1)*width)`.
/// The row count is kept separately so zero-width rows still count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Rows {
    pub width: usize,
    n: usize,
    pub bits: BitString,
}

impl Rows {
    pub fn new(width: usize) -> Self {
        Rows {
            width,
            n: 0,
            bits: BitString::new(),
        }
    }

    pub fn from_bits(width: usize, n: usize, bits: BitString) -> Self {
        assert_eq!(bits.len(), width * n, "row data length");
        Rows { width, n, bits }
    }

    pub fn zeros(width: usize, n: usize) -> Self {
        Rows::from_bits(width, n, BitString::zeros(width * n))
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn push_row(&mut self, row: &BitString) {
        assert_eq!(row.len(), self.width);
        self.bits.append(row);
        self.n += 1;
    }

    /// Appends a row given as the low `width` bits of `v` (width <= 64).
    pub fn push_value(&mut self, v: u64) {
        self.bits.push_bits(v, self.width);
        self.n += 1;
    }

    pub fn row(&self, i: usize) -> BitString {
        self.bits.slice(i * self.width, self.width)
    }

    /// Compares row `i` of both matrices without allocating.
    pub fn row_eq(&self, i: usize, other: &Rows, j: usize) -> bool {
        assert_eq!(self.width, other.width);
        let mut p = 0;
        while p < self.width {
            let n = (self.width - p).min(64);
            if self.bits.get_bits(i * self.width + p, n) != other.bits.get_bits(j * other.width + p, n) {
                return false;
            }
            p += n;
        }
        true
    }

    /// `n <= 64` bits of row `i` starting at column `col`.
    pub fn field(&self, i: usize, col: usize, n: usize) -> u64 {
        self.bits.get_bits(i * self.width + col, n)
    }
}
