//! Universe reduction: hash both sets into [m], m = ceil(4k^2 / p_err), with
//! one shared pairwise function. Intersections survive; disjoint sets
//! collide with probability at most about k^2 / m.

use serde::{Deserialize, Serialize};

use crate::coins::SharedCoins;
use crate::error::{Error, Result};
use crate::primitives::universe_hash::PairwiseHash;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedSets {
    pub m: u64,
    pub hash: PairwiseHash,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

impl ReducedSets {
    pub fn intersects(&self) -> bool {
        let mut a = self.a.clone();
        a.sort_unstable();
        self.b.iter().any(|v| a.binary_search(v).is_ok())
    }
}

pub fn reduced_range(k: u64, p_err: f64) -> Result<u64> {
    if !(p_err > 0.0 && p_err < 1.0) {
        return Err(Error::InvalidInput(format!("p_err {p_err} not in (0, 1)")));
    }
    Ok(((4 * k * k) as f64 / p_err).ceil().max(1.0) as u64)
}

pub fn reduce_universe(a: &[u64], b: &[u64], k: u64, p_err: f64, coins: &mut SharedCoins) -> Result<ReducedSets> {
    Ok(reduce_to_range(a, b, reduced_range(k, p_err)?, coins))
}

/// Same with an explicit range; m = 1 sends everything to 0.
pub fn reduce_to_range(a: &[u64], b: &[u64], m: u64, coins: &mut SharedCoins) -> ReducedSets {
    let hash = PairwiseHash::draw(m, coins);
    ReducedSets {
        m,
        hash,
        a: a.iter().map(|&u| hash.eval(u)).collect(),
        b: b.iter().map(|&u| hash.eval(u)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_formula() {
        assert_eq!(reduced_range(32, 1.0 / 1024.0).unwrap(), 4 * 1024 * 1024);
        assert!(reduced_range(4, 1.0).is_err());
    }

    #[test]
    fn common_element_survives() {
        let mut c = SharedCoins::new(5);
        for t in 0..100 {
            let r = reduce_universe(&[t, 1000 + t], &[5000, t], 2, 0.1, &mut c).unwrap();
            assert!(r.intersects());
        }
    }
}
