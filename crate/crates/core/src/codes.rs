//! Small prefix codes used in protocol framing.

use crate::bits::BitString;
use crate::error::{Error, Result};

pub struct BitReader<'a> {
    bits: &'a BitString,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a BitString) -> Self {
        BitReader { bits, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn bit(&mut self) -> Result<bool> {
        if self.pos >= self.bits.len() {
            return Err(Error::Malformed("read past end".into()));
        }
        let b = self.bits.get(self.pos);
        self.pos += 1;
        Ok(b)
    }

    pub fn bits(&mut self, n: usize) -> Result<u64> {
        if self.pos + n > self.bits.len() {
            return Err(Error::Malformed("read past end".into()));
        }
        let v = self.bits.get_bits(self.pos, n);
        self.pos += n;
        Ok(v)
    }

    pub fn take(&mut self, n: usize) -> Result<BitString> {
        if self.pos + n > self.bits.len() {
            return Err(Error::Malformed("read past end".into()));
        }
        let s = self.bits.slice(self.pos, n);
        self.pos += n;
        Ok(s)
    }

    /// Counts zeros up to the terminating one: `0^(i-1) 1` reads as i.
    pub fn unary(&mut self) -> Result<u64> {
        let mut i = 1;
        while !self.bit()? {
            i += 1;
        }
        Ok(i)
    }

    pub fn gamma(&mut self) -> Result<u64> {
        let mut zeros = 0;
        while !self.bit()? {
            zeros += 1;
            if zeros > 63 {
                return Err(Error::Malformed("gamma code too long".into()));
            }
        }
        let rest = self.bits(zeros)?;
        Ok((1u64 << zeros) | rest)
    }
}

/// `0^(i-1) 1`, i >= 1.
pub fn push_unary(out: &mut BitString, i: u64) {
    assert!(i >= 1);
    for _ in 1..i {
        out.push(false);
    }
    out.push(true);
}

/// Elias gamma for n >= 1: floor(log2 n) zeros, a one, then the low bits
/// of n below its leading one (LSB first).
pub fn push_gamma(out: &mut BitString, n: u64) {
    assert!(n >= 1);
    let nb = 63 - n.leading_zeros() as usize;
    for _ in 0..nb {
        out.push(false);
    }
    out.push(true);
    out.push_bits(n & ((1u64 << nb) - 1), nb);
}

pub fn gamma_len(n: u64) -> usize {
    2 * (63 - n.leading_zeros() as usize) + 1
}

/// Subset of `0..n` as either a bitmap or gamma-coded gaps, whichever is
/// shorter, behind a one-bit selector.
pub fn push_subset(out: &mut BitString, n: usize, members: &[usize]) {
    let mut gap_len = gamma_len(members.len() as u64 + 1);
    let mut prev = 0usize;
    for (i, &m) in members.iter().enumerate() {
        let gap = if i == 0 { m + 1 } else { m - prev };
        gap_len += gamma_len(gap as u64);
        prev = m;
    }
    if gap_len < n {
        out.push(true);
        push_gamma(out, members.len() as u64 + 1);
        let mut prev = 0usize;
        for (i, &m) in members.iter().enumerate() {
            let gap = if i == 0 { m + 1 } else { m - prev };
            push_gamma(out, gap as u64);
            prev = m;
        }
    } else {
        out.push(false);
        let mut bm = BitString::zeros(n);
        for &m in members {
            bm.set(m, true);
        }
        out.append(&bm);
    }
}

pub fn read_subset(r: &mut BitReader<'_>, n: usize) -> Result<Vec<usize>> {
    if r.bit()? {
        let count = r.gamma()? - 1;
        let mut out = Vec::with_capacity(count as usize);
        let mut prev = 0usize;
        for i in 0..count {
            let gap = r.gamma()? as usize;
            let m = if i == 0 { gap - 1 } else { prev + gap };
            if m >= n {
                return Err(Error::Malformed("subset member out of range".into()));
            }
            out.push(m);
            prev = m;
        }
        Ok(out)
    } else {
        let bm = r.take(n)?;
        Ok((0..n).filter(|&i| bm.get(i)).collect())
    }
}
