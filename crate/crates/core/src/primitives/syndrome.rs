//! Hamming-distance-bounded exchange by syndrome source coding.
//!
//! The sender treats its K symbols of L bits as a word over GF(2^m) and sends
//! the 2d syndromes `S_i = sum_c v_c * alpha^(i*c)`, i = 1..2d. The receiver
//! subtracts the syndromes of its own word, which leaves the syndromes of the
//! error pattern `x xor y`. If at most d symbols differ, Berlekamp-Massey,
//! Chien search and Forney recover the pattern exactly. Beyond d there is no
//! guarantee: the decoder may flag a failure or silently return a wrong word.
//!
//! Symbols wider than 20 bits are split into independent lanes of at most 16
//! bits; a symbol difference shows up as at most one error per lane, so each
//! lane still sees at most d errors.

use serde::{Deserialize, Serialize};

use crate::bits::{BitString, Rows};
use crate::error::{Error, Result};
use crate::primitives::gf::{Gf, MAX_M};

const LANE_WIDTH: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lane {
    pub offset: usize,
    pub width: usize,
    pub m: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyndromeCodec {
    pub k: usize,
    pub l: usize,
    pub d: usize,
    /// Symbol width of the first lane (the only lane when L <= 20).
    pub m: u32,
    pub poly: u32,
    pub lanes: Vec<Lane>,
    pub syndrome_bits: usize,
}

pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

impl SyndromeCodec {
    pub fn new(k: usize, l: usize, d: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("codec needs K >= 1".into()));
        }
        if d > k {
            return Err(Error::InvalidInput(format!("d={d} exceeds K={k}")));
        }
        let m_min = ceil_log2(k as u64 + 1).max(1);
        if m_min > MAX_M {
            return Err(Error::InvalidInput(format!("K={k} needs a field wider than 2^{MAX_M}")));
        }
        let lanes = if l <= MAX_M as usize {
            vec![Lane {
                offset: 0,
                width: l,
                m: (l as u32).max(m_min),
            }]
        } else {
            let n = l.div_ceil(LANE_WIDTH);
            let w = l.div_ceil(n);
            let mut lanes = Vec::with_capacity(n);
            let mut off = 0;
            while off < l {
                let width = w.min(l - off);
                lanes.push(Lane {
                    offset: off,
                    width,
                    m: (width as u32).max(m_min),
                });
                off += width;
            }
            lanes
        };
        let syndrome_bits = lanes.iter().map(|ln| 2 * d * ln.m as usize).sum();
        let m = lanes[0].m;
        Ok(SyndromeCodec {
            k,
            l,
            d,
            m,
            poly: crate::primitives::gf::PRIMITIVE_POLYS[m as usize],
            lanes,
            syndrome_bits,
        })
    }

    /// Payload size without building the codec, for cost planning.
    pub fn payload_bits(k: usize, l: usize, d: usize) -> Result<usize> {
        Ok(Self::new(k, l, d)?.syndrome_bits)
    }

    fn lane_syndromes(&self, lane: &Lane, rows: &Rows) -> Vec<u32> {
        let f = Gf::get(lane.m);
        let n2 = 2 * self.d;
        let mut s = vec![0u32; n2];
        let order = f.order as u64;
        for c in 0..self.k {
            let v = rows.field(c, lane.offset, lane.width) as u32;
            if v == 0 {
                continue;
            }
            let step = c as u64 % order;
            let mut e = (f.log(v) as u64 + step) % order;
            for si in s.iter_mut() {
                *si ^= f.exp_reduced(e as usize);
                e += step;
                if e >= order {
                    e -= order;
                }
            }
        }
        s
    }

    pub fn encode(&self, rows: &Rows) -> BitString {
        assert_eq!(rows.width, self.l);
        assert_eq!(rows.count(), self.k);
        let mut out = BitString::with_capacity(self.syndrome_bits);
        if self.d == 0 {
            return out;
        }
        for lane in &self.lanes {
            for s in self.lane_syndromes(lane, rows) {
                out.push_bits(s as u64, lane.m as usize);
            }
        }
        out
    }

    /// Recovers the sender's rows from `y` and the syndrome. Returns the
    /// recovered rows and a failure flag; on failure the rows equal `y`.
    pub fn decode(&self, y: &Rows, syndrome: &BitString) -> (Rows, bool) {
        assert_eq!(y.width, self.l);
        assert_eq!(y.count(), self.k);
        if syndrome.len() != self.syndrome_bits {
            return (y.clone(), true);
        }
        if self.d == 0 {
            return (y.clone(), false);
        }
        let mut corrections: Vec<Vec<(usize, u32)>> = Vec::with_capacity(self.lanes.len());
        let mut pos = 0;
        for lane in &self.lanes {
            let mut s = self.lane_syndromes(lane, y);
            for si in s.iter_mut() {
                *si ^= syndrome.get_bits(pos, lane.m as usize) as u32;
                pos += lane.m as usize;
            }
            match self.locate(lane, &s) {
                Some(errs) => corrections.push(errs),
                None => return (y.clone(), true),
            }
        }
        if corrections.iter().all(|c| c.is_empty()) {
            return (y.clone(), false);
        }
        let mut patch: Vec<Vec<u32>> = vec![Vec::new(); self.k];
        let mut touched = vec![false; self.k];
        for (li, errs) in corrections.iter().enumerate() {
            for &(c, e) in errs {
                if !touched[c] {
                    touched[c] = true;
                    patch[c] = vec![0; self.lanes.len()];
                }
                patch[c][li] = e;
            }
        }
        let mut bits = BitString::with_capacity(self.k * self.l);
        for c in 0..self.k {
            if !touched[c] {
                bits.append(&y.bits.slice(c * self.l, self.l));
                continue;
            }
            for (li, lane) in self.lanes.iter().enumerate() {
                let v = y.field(c, lane.offset, lane.width) ^ patch[c][li] as u64;
                bits.push_bits(v, lane.width);
            }
        }
        (Rows::from_bits(self.l, self.k, bits), false)
    }

    /// Error positions and values for one lane, or None if inconsistent.
    fn locate(&self, lane: &Lane, s: &[u32]) -> Option<Vec<(usize, u32)>> {
        if s.iter().all(|&v| v == 0) {
            return Some(Vec::new());
        }
        let f = Gf::get(lane.m);
        let lambda = berlekamp_massey(f, s);
        let nerr = lambda.len() - 1;
        if nerr == 0 || nerr > self.d {
            return None;
        }
        // Chien search over the K valid positions: position c is an error
        // location iff Lambda(alpha^-c) = 0.
        let order = f.order as u64;
        let mut roots = Vec::with_capacity(nerr);
        for c in 0..self.k {
            let inv = (order - c as u64 % order) % order;
            let mut acc = 0u32;
            for (j, &coef) in lambda.iter().enumerate() {
                if coef != 0 {
                    acc ^= f.mul(coef, f.alpha_pow(inv * j as u64));
                }
            }
            if acc == 0 {
                roots.push(c);
                if roots.len() > nerr {
                    return None;
                }
            }
        }
        if roots.len() != nerr {
            return None;
        }
        // Forney with first syndrome index 1: e = Omega(X^-1) / Lambda'(X^-1).
        let two_d = s.len();
        let mut omega = vec![0u32; two_d];
        for (i, &si) in s.iter().enumerate() {
            for (j, &lj) in lambda.iter().enumerate() {
                if i + j < two_d {
                    omega[i + j] ^= f.mul(si, lj);
                }
            }
        }
        let limit = 1u64 << lane.width;
        let mut out = Vec::with_capacity(nerr);
        for &c in &roots {
            let xinv = (order - c as u64 % order) % order;
            let mut num = 0u32;
            for (i, &o) in omega.iter().enumerate() {
                if o != 0 {
                    num ^= f.mul(o, f.alpha_pow(xinv * i as u64));
                }
            }
            let mut den = 0u32;
            for j in (1..lambda.len()).step_by(2) {
                if lambda[j] != 0 {
                    den ^= f.mul(lambda[j], f.alpha_pow(xinv * (j as u64 - 1)));
                }
            }
            if den == 0 {
                return None;
            }
            let e = f.div(num, den);
            if e == 0 || e as u64 >= limit {
                return None;
            }
            out.push((c, e));
        }
        Some(out)
    }
}

/// Shortest LFSR (connection polynomial, constant term 1) generating `s`.
/// The returned vector is trimmed so its length is degree + 1; a result whose
/// degree disagrees with the LFSR length is reported as degree 0.
pub fn berlekamp_massey(f: &Gf, s: &[u32]) -> Vec<u32> {
    let n = s.len();
    let mut c = vec![0u32; n + 1];
    let mut b = vec![0u32; n + 1];
    c[0] = 1;
    b[0] = 1;
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut bscale = 1u32;
    for i in 0..n {
        let mut delta = s[i];
        for j in 1..=len {
            delta ^= f.mul(c[j], s[i - j]);
        }
        if delta == 0 {
            shift += 1;
            continue;
        }
        let coef = f.div(delta, bscale);
        if 2 * len <= i {
            let t = c.clone();
            for j in 0..=n - shift {
                if b[j] != 0 {
                    c[j + shift] ^= f.mul(coef, b[j]);
                }
            }
            len = i + 1 - len;
            b = t;
            bscale = delta;
            shift = 1;
        } else {
            for j in 0..=n - shift {
                if b[j] != 0 {
                    c[j + shift] ^= f.mul(coef, b[j]);
                }
            }
            shift += 1;
        }
    }
    let mut deg = n;
    while deg > 0 && c[deg] == 0 {
        deg -= 1;
    }
    if deg != len {
        return vec![1];
    }
    c.truncate(deg + 1);
    c
}
