//! SetIntersection and EqualityTesting in terms of each other.
//!
//! One direction: Alice sends a perfect hash of A into [k], Bob answers with
//! his bucket sizes, and the two run equality testing with one coordinate
//! per (bucket, element of Bob's bucket), Alice's value being the unique
//! element of A in that bucket. Bob's bucket sizes ride in the same merged
//! round as his first message of the inner protocol, so the whole reduction
//! costs one extra round.
//!
//! The other direction tags coordinates, (i, x_i) -> i 2^b + x_i, and needs
//! no communication of its own.

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::codes::{push_unary, BitReader};
use crate::coins::SharedCoins;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::primitives::syndrome::ceil_log2;
use crate::protocols::engine::Link;
use crate::reductions::perfect_hash::{PerfectHash, MAX_UNIVERSE_BITS};
use crate::transcript::Direction;

pub const HASH_TAG: &str = "si.hash";
pub const SIZES_TAG: &str = "si.sizes";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetIntRun {
    /// Sorted, as seen by Bob (Alice learns the same set from the verdicts).
    pub intersection: Vec<u64>,
    pub encoding_bits: u64,
    pub sizes_bits: u64,
    /// Coordinates of the inner instance (= |B| after deduplication).
    pub inner_k: usize,
}

impl SetIntRun {
    /// Reduction overhead: perfect-hash encoding plus bucket sizes.
    pub fn zeta(&self) -> u64 {
        self.encoding_bits + self.sizes_bits
    }
}

fn distinct(v: &[u64]) -> Vec<u64> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// The inner EqualityTesting instance: coordinates sorted by (slot, Bob's
/// element). Returns the instance (None if Bob's set is empty) and Bob's
/// element per coordinate.
pub fn derived_instance(
    hash: &PerfectHash,
    a: &[u64],
    b: &[u64],
    universe_bits: u32,
) -> Result<(Option<Instance>, Vec<u64>)> {
    let mut by_slot = vec![0u64; hash.k as usize];
    for &u in a {
        by_slot[hash.eval(u) as usize] = u;
    }
    let mut pairs: Vec<(u64, u64)> = b.iter().map(|&v| (hash.eval(v), v)).collect();
    pairs.sort_unstable();
    if pairs.is_empty() {
        return Ok((None, Vec::new()));
    }
    let x = pairs.iter().map(|&(s, _)| by_slot[s as usize]).collect();
    let y: Vec<u64> = pairs.iter().map(|&(_, v)| v).collect();
    Ok((Some(Instance::new(universe_bits, x, y.clone())?), y))
}

/// Runs the reduction. `eq` is any EqualityTesting solver: it receives the
/// derived instance and the link with Bob to move, and returns per-coordinate
/// verdicts. `private` supplies Alice's coins for the perfect hash.
pub fn setint_via_eq<F>(
    a: &[u64],
    b: &[u64],
    universe_bits: u32,
    eq: F,
    private: &mut SharedCoins,
    link: &mut Link,
) -> Result<SetIntRun>
where
    F: FnOnce(&Instance, &mut Link) -> Result<Vec<bool>>,
{
    let (a, b) = (distinct(a), distinct(b));
    link.next_sender = Direction::AtoB;
    let hash = PerfectHash::build(&a, universe_bits, private)?;
    let enc = hash.encode();
    let encoding_bits = enc.len() as u64;
    link.send(HASH_TAG, enc.clone());

    // Bob's side works from the received bits only
    let bob_hash = PerfectHash::parse(&enc)?;
    let mut sizes = vec![0u64; bob_hash.k as usize];
    if bob_hash.k > 0 {
        for &v in &b {
            sizes[bob_hash.eval(v) as usize] += 1;
        }
    }
    let mut msg = BitString::new();
    for &s in &sizes {
        push_unary(&mut msg, s + 1);
    }
    let sizes_bits = msg.len() as u64;
    link.reply(SIZES_TAG, msg.clone());

    // Alice reads the sizes back; they fix the coordinate count
    let mut rd = BitReader::new(&msg);
    let inner_k: u64 = (0..hash.k).map(|_| rd.unary().map(|u| u - 1)).sum::<Result<u64>>()?;
    let mut run = SetIntRun {
        intersection: Vec::new(),
        encoding_bits,
        sizes_bits,
        inner_k: inner_k as usize,
    };
    if hash.k == 0 || b.is_empty() {
        return Ok(run);
    }
    let (inst, bob_elems) = derived_instance(&hash, &a, &b, universe_bits)?;
    let inst = inst.expect("Bob's set is not empty");
    if inst.k() as u64 != inner_k {
        return Err(Error::InvalidInput("bucket sizes disagree with the derived instance".into()));
    }
    let verdicts = eq(&inst, link)?;
    run.intersection = bob_elems
        .iter()
        .zip(&verdicts)
        .filter_map(|(&v, &eq)| eq.then_some(v))
        .collect();
    run.intersection.sort_unstable();
    run.intersection.dedup();
    Ok(run)
}

/// Universe bits needed for the tagged sets of an instance.
pub fn tagged_universe_bits(inst: &Instance) -> u32 {
    inst.coord_bits + ceil_log2(inst.k() as u64)
}

pub fn tag(i: usize, v: u64, coord_bits: u32) -> u64 {
    ((i as u64) << coord_bits) | v
}

/// Equality testing through any SetIntersection solver `setint(A, B,
/// universe_bits)`. Coordinate i is equal iff (i, x_i) is in the returned
/// intersection.
pub fn eq_via_setint<F>(inst: &Instance, setint: F) -> Result<Vec<bool>>
where
    F: FnOnce(&[u64], &[u64], u32) -> Result<Vec<u64>>,
{
    let ub = tagged_universe_bits(inst);
    if ub > MAX_UNIVERSE_BITS {
        return Err(Error::InvalidInput(format!("tagged universe needs {ub} bits")));
    }
    let cb = inst.coord_bits;
    let a: Vec<u64> = inst.x.iter().enumerate().map(|(i, &v)| tag(i, v, cb)).collect();
    let b: Vec<u64> = inst.y.iter().enumerate().map(|(i, &v)| tag(i, v, cb)).collect();
    let mut common = setint(&a, &b, ub)?;
    common.sort_unstable();
    Ok(a.iter().map(|t| common.binary_search(t).is_ok()).collect())
}
