use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A pair of k-dimensional vectors over a `2^coord_bits` universe.
/// Alice holds `x`, Bob holds `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub coord_bits: u32,
    pub x: Vec<u64>,
    pub y: Vec<u64>,
}

fn value_mask(coord_bits: u32) -> u64 {
    if coord_bits >= 64 {
        u64::MAX
    } else {
        (1u64 << coord_bits) - 1
    }
}

impl Instance {
    pub fn new(coord_bits: u32, x: Vec<u64>, y: Vec<u64>) -> Result<Self> {
        if coord_bits == 0 || coord_bits > 64 {
            return Err(Error::InvalidInput(format!("coord_bits {coord_bits} not in 1..=64")));
        }
        if x.len() != y.len() || x.is_empty() {
            return Err(Error::InvalidInput(format!(
                "vector lengths {} and {} must match and be positive",
                x.len(),
                y.len()
            )));
        }
        let m = value_mask(coord_bits);
        if x.iter().chain(&y).any(|&v| v & !m != 0) {
            return Err(Error::InvalidInput("value exceeds coord_bits".into()));
        }
        Ok(Instance { coord_bits, x, y })
    }

    pub fn k(&self) -> usize {
        self.x.len()
    }

    pub fn equal_set(&self) -> BTreeSet<usize> {
        (0..self.k()).filter(|&i| self.x[i] == self.y[i]).collect()
    }

    pub fn is_equal(&self, i: usize) -> bool {
        self.x[i] == self.y[i]
    }

    pub fn hamming_distance(&self) -> usize {
        self.x.iter().zip(&self.y).filter(|(a, b)| a != b).count()
    }

    /// Ground-truth verdict vector.
    pub fn truth(&self) -> Vec<bool> {
        (0..self.k()).map(|i| self.is_equal(i)).collect()
    }
}

/// Random instance with `x_i = y_i` exactly on `equal_set`; every other
/// coordinate gets a uniform `x_i` and a uniform `y_i != x_i`.
pub fn make_instance(k: usize, coord_bits: u32, equal_set: &[usize], seed: u64) -> Result<Instance> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    if coord_bits == 0 || coord_bits > 64 {
        return Err(Error::InvalidInput(format!("coord_bits {coord_bits} not in 1..=64")));
    }
    if let Some(&bad) = equal_set.iter().find(|&&i| i >= k) {
        return Err(Error::InvalidInput(format!("equal index {bad} out of range for k={k}")));
    }
    let mut eq = vec![false; k];
    for &i in equal_set {
        eq[i] = true;
    }
    let mask = value_mask(coord_bits);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Vec::with_capacity(k);
    let mut y = Vec::with_capacity(k);
    for &same in &eq {
        let a = rng.gen::<u64>() & mask;
        let b = if same {
            a
        } else {
            // uniform over the other 2^cb - 1 values
            let off = if mask == u64::MAX {
                rng.gen_range(1..=u64::MAX)
            } else {
                rng.gen_range(1..=mask)
            };
            a ^ off
        };
        x.push(a);
        y.push(b);
    }
    Instance::new(coord_bits, x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_equality_single() {
        let inst = make_instance(1, 4, &[0], 1).unwrap();
        assert_eq!(inst.x, inst.y);
    }

    #[test]
    fn forced_inequality() {
        let inst = make_instance(4, 8, &[], 2).unwrap();
        assert!(inst.x.iter().zip(&inst.y).all(|(a, b)| a != b));
    }

    #[test]
    fn planted_pair() {
        let inst = make_instance(16, 12, &[0, 5], 3).unwrap();
        let eq: Vec<usize> = (0..16).filter(|&i| inst.x[i] == inst.y[i]).collect();
        assert_eq!(eq, vec![0, 5]);
        assert!(inst.x.iter().chain(&inst.y).all(|&v| v < 1 << 12));
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(make_instance(4, 8, &[4], 0).is_err());
    }

    #[test]
    fn one_bit_coordinates_flip() {
        let inst = make_instance(32, 1, &[], 9).unwrap();
        assert!(inst.x.iter().zip(&inst.y).all(|(a, b)| a ^ b == 1));
    }
}
