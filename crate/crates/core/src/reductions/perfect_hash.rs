//! Succinct two-level perfect hashing of a k-set A into [k].
//!
//! Level 1 compresses the universe: h'(x) = ((a x) mod p) mod R1 with R1 the
//! first prime >= 4k^2, retried until injective on A. A pairwise hash h_*
//! then splits [R1] into k buckets A_0..A_(k-1) and is retried until
//! sum |A_j|^2 <= 4k. Each bucket of size s >= 2 picks, from a shared pool of
//! 2 ceil(log2 k) + 4 pairwise functions, the first one injective on it mod
//! s^2; if some bucket finds none the whole pool is redrawn (a new
//! generation). The buckets' ranges are laid end to end into [M],
//! M = sum s^2 <= 4k, and a used-slot bitmap over [M] turns positions into
//! ranks in [k].
//!
//! Every candidate comes from a stream keyed by a 64-bit word drawn from
//! Alice's private coins; the key travels in the encoding and all choices
//! are unary indices into those streams.
//!
//! Wire format: 16-bit version, gamma(body length + 1), then the body:
//! key (64 bits), gamma(k + 1), gamma(universe_bits), unary a-index, unary
//! h_*-index, bucket sizes (s_j zeros and a one each, 2k bits in total),
//! unary generation, a unary function index per bucket of size >= 2, and
//! the M-bit used bitmap.

use crate::bits::BitString;
use crate::codes::{push_gamma, push_unary, BitReader};
use crate::coins::{derive_seed, mix64, SharedCoins};
use crate::error::{Error, Result};
use crate::primitives::syndrome::ceil_log2;
use crate::primitives::universe_hash::PairwiseHash;
use crate::reductions::primes::next_prime;

pub const VERSION: u64 = 1;
const VERSION_BITS: usize = 16;
pub const MAX_UNIVERSE_BITS: u32 = 62;

const STREAM_A: u64 = 0;
const STREAM_HSTAR: u64 = 1;
const STREAM_POOL: u64 = 2;

fn stream_word(key: u64, stream: u64, i: u64) -> u64 {
    mix64(derive_seed(key, stream) ^ mix64(i.wrapping_add(1)))
}

fn pool_size(k: u64) -> u64 {
    2 * ceil_log2(k) as u64 + 4
}

/// The parsed or freshly built function, with evaluation tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectHash {
    pub k: u64,
    pub universe_bits: u32,
    pub key: u64,
    pub p: u64,
    pub r1: u64,
    pub a_index: u64,
    pub hstar_index: u64,
    pub sizes: Vec<u64>,
    pub generation: u64,
    /// Pool index per bucket; meaningful only for sizes >= 2.
    pub fn_index: Vec<u64>,
    pub used: BitString,
    a: u64,
    hstar: PairwiseHash,
    bucket_fns: Vec<Option<PairwiseHash>>,
    offsets: Vec<u64>,
    rank: Vec<u32>,
}

struct Params {
    p: u64,
    r1: u64,
}

fn params(k: u64, universe_bits: u32) -> Params {
    let p = next_prime((1u64 << universe_bits).max(k * k * universe_bits as u64));
    Params {
        p,
        r1: next_prime(4 * k * k),
    }
}

fn a_candidate(key: u64, p: u64, i: u64) -> u64 {
    1 + stream_word(key, STREAM_A, i) % (p - 1)
}

fn hstar_candidate(key: u64, k: u64, i: u64) -> PairwiseHash {
    PairwiseHash::from_words(k, stream_word(key, STREAM_HSTAR, 2 * i), stream_word(key, STREAM_HSTAR, 2 * i + 1))
}

fn pool_fn(key: u64, generation: u64, t: u64, s: u64) -> PairwiseHash {
    let stream = STREAM_POOL + generation;
    PairwiseHash::from_words(s * s, stream_word(key, stream, 2 * t), stream_word(key, stream, 2 * t + 1))
}

#[inline]
fn level1(a: u64, p: u64, r1: u64, u: u64) -> u64 {
    ((a as u128 * (u % p) as u128) % p as u128) as u64 % r1
}

fn injective(vals: impl Iterator<Item = u64>, scratch: &mut Vec<u64>) -> bool {
    scratch.clear();
    scratch.extend(vals);
    scratch.sort_unstable();
    scratch.windows(2).all(|w| w[0] != w[1])
}

impl PerfectHash {
    /// Builds a perfect hash for the distinct elements of `set` (all below
    /// 2^universe_bits), drawing the key from `private`.
    pub fn build(set: &[u64], universe_bits: u32, private: &mut SharedCoins) -> Result<Self> {
        if universe_bits == 0 || universe_bits > MAX_UNIVERSE_BITS {
            return Err(Error::InvalidInput(format!("universe_bits {universe_bits} not in 1..={MAX_UNIVERSE_BITS}")));
        }
        let mut elems = set.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if elems.iter().any(|&u| u >> universe_bits != 0) {
            return Err(Error::InvalidInput("element outside the universe".into()));
        }
        let k = elems.len() as u64;
        let key = private.draw_u64();
        if k == 0 {
            return Self::assemble(0, universe_bits, key, 0, 0, Vec::new(), 0, Vec::new(), BitString::new());
        }
        let Params { p, r1 } = params(k, universe_bits);
        let mut scratch = Vec::new();

        let mut a_index = 0;
        let h1: Vec<u64> = loop {
            let a = a_candidate(key, p, a_index);
            if injective(elems.iter().map(|&u| level1(a, p, r1, u)), &mut scratch) {
                break elems.iter().map(|&u| level1(a, p, r1, u)).collect();
            }
            a_index += 1;
        };

        let mut hstar_index = 0;
        let buckets: Vec<Vec<u64>> = loop {
            let h = hstar_candidate(key, k, hstar_index);
            let mut b = vec![Vec::new(); k as usize];
            for &y in &h1 {
                b[h.eval(y) as usize].push(y);
            }
            if b.iter().map(|v| (v.len() * v.len()) as u64).sum::<u64>() <= 4 * k {
                break b;
            }
            hstar_index += 1;
        };
        let sizes: Vec<u64> = buckets.iter().map(|b| b.len() as u64).collect();

        let pool = pool_size(k);
        let mut generation = 0;
        let fn_index = 'gen: loop {
            let mut idx = vec![0u64; k as usize];
            for (j, b) in buckets.iter().enumerate() {
                let s = b.len() as u64;
                if s < 2 {
                    continue;
                }
                match (0..pool).find(|&t| {
                    let f = pool_fn(key, generation, t, s);
                    injective(b.iter().map(|&y| f.eval(y)), &mut scratch)
                }) {
                    Some(t) => idx[j] = t,
                    None => {
                        generation += 1;
                        continue 'gen;
                    }
                }
            }
            break idx;
        };

        let m: u64 = sizes.iter().map(|s| s * s).sum();
        let mut used = BitString::zeros(m as usize);
        let mut off = 0u64;
        for (j, b) in buckets.iter().enumerate() {
            let s = b.len() as u64;
            for &y in b {
                let pos = if s >= 2 { pool_fn(key, generation, fn_index[j], s).eval(y) } else { 0 };
                used.set((off + pos) as usize, true);
            }
            off += s * s;
        }
        Self::assemble(k, universe_bits, key, a_index, hstar_index, sizes, generation, fn_index, used)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        k: u64,
        universe_bits: u32,
        key: u64,
        a_index: u64,
        hstar_index: u64,
        sizes: Vec<u64>,
        generation: u64,
        fn_index: Vec<u64>,
        used: BitString,
    ) -> Result<Self> {
        let (p, r1) = if k == 0 {
            (0, 0)
        } else {
            let pr = params(k, universe_bits);
            (pr.p, pr.r1)
        };
        let a = if k == 0 { 0 } else { a_candidate(key, p, a_index) };
        let hstar = hstar_candidate(key, k.max(1), hstar_index);
        let bucket_fns = sizes
            .iter()
            .zip(&fn_index)
            .map(|(&s, &t)| (s >= 2).then(|| pool_fn(key, generation, t, s)))
            .collect();
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut off = 0;
        for &s in &sizes {
            offsets.push(off);
            off += s * s;
        }
        if used.len() as u64 != off {
            return Err(Error::Malformed("used bitmap length does not match bucket sizes".into()));
        }
        let mut rank = Vec::with_capacity(used.len() + 1);
        let mut c = 0u32;
        rank.push(0);
        for i in 0..used.len() {
            c += used.get(i) as u32;
            rank.push(c);
        }
        if c as u64 != k {
            return Err(Error::Malformed(format!("{c} used slots for k = {k}")));
        }
        Ok(PerfectHash {
            k,
            universe_bits,
            key,
            p,
            r1,
            a_index,
            hstar_index,
            sizes,
            generation,
            fn_index,
            used,
            a,
            hstar,
            bucket_fns,
            offsets,
            rank,
        })
    }

    /// Slot of `u` in [k]. Distinct on the built set; arbitrary (but in
    /// range) elsewhere. Panics when k = 0.
    pub fn eval(&self, u: u64) -> u64 {
        assert!(self.k > 0, "empty perfect hash has no slots");
        let y = level1(self.a, self.p, self.r1, u);
        let j = self.hstar.eval(y) as usize;
        let inner = match &self.bucket_fns[j] {
            Some(f) => f.eval(y),
            None => 0,
        };
        let pos = (self.offsets[j] + inner).min(self.used.len() as u64 - 1) as usize;
        (self.rank[pos] as u64).min(self.k - 1)
    }

    /// Intermediate range M = sum |A_j|^2.
    pub fn range(&self) -> u64 {
        self.used.len() as u64
    }

    fn body(&self) -> BitString {
        let mut b = BitString::new();
        b.push_bits(self.key, 64);
        push_gamma(&mut b, self.k + 1);
        push_gamma(&mut b, self.universe_bits as u64);
        if self.k == 0 {
            return b;
        }
        push_unary(&mut b, self.a_index + 1);
        push_unary(&mut b, self.hstar_index + 1);
        for &s in &self.sizes {
            push_unary(&mut b, s + 1);
        }
        push_unary(&mut b, self.generation + 1);
        for (&s, &t) in self.sizes.iter().zip(&self.fn_index) {
            if s >= 2 {
                push_unary(&mut b, t + 1);
            }
        }
        b.append(&self.used);
        b
    }

    pub fn encode(&self) -> BitString {
        let body = self.body();
        let mut out = BitString::new();
        out.push_bits(VERSION, VERSION_BITS);
        push_gamma(&mut out, body.len() as u64 + 1);
        out.append(&body);
        out
    }

    pub fn total_bits(&self) -> usize {
        self.encode().len()
    }

    pub fn parse(bits: &BitString) -> Result<Self> {
        let mut r = BitReader::new(bits);
        let version = r.bits(VERSION_BITS)?;
        if version != VERSION {
            return Err(Error::Malformed(format!("perfect hash version {version}")));
        }
        let body_len = r.gamma()? - 1;
        let start = r.position();
        let key = r.bits(64)?;
        let k = r.gamma()? - 1;
        let universe_bits = r.gamma()?;
        if universe_bits > MAX_UNIVERSE_BITS as u64 {
            return Err(Error::Malformed(format!("universe_bits {universe_bits}")));
        }
        let universe_bits = universe_bits as u32;
        if k == 0 {
            return Self::assemble(0, universe_bits, key, 0, 0, Vec::new(), 0, Vec::new(), BitString::new());
        }
        if k > bits.len() as u64 {
            return Err(Error::Malformed("k exceeds encoding length".into()));
        }
        let a_index = r.unary()? - 1;
        let hstar_index = r.unary()? - 1;
        let mut sizes = Vec::with_capacity(k as usize);
        for _ in 0..k {
            sizes.push(r.unary()? - 1);
        }
        let generation = r.unary()? - 1;
        let pool = pool_size(k);
        let mut fn_index = vec![0; k as usize];
        for (j, &s) in sizes.iter().enumerate() {
            if s >= 2 {
                fn_index[j] = r.unary()? - 1;
                if fn_index[j] >= pool {
                    return Err(Error::Malformed("function index outside the pool".into()));
                }
            }
        }
        let m: u64 = sizes.iter().map(|s| s * s).sum();
        if m > 4 * k {
            return Err(Error::Malformed("bucket sizes exceed 4k".into()));
        }
        let used = r.take(m as usize)?;
        if (r.position() - start) as u64 != body_len {
            return Err(Error::Malformed("body length mismatch".into()));
        }
        Self::assemble(k, universe_bits, key, a_index, hstar_index, sizes, generation, fn_index, used)
    }
}
