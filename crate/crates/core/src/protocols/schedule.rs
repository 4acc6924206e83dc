//! Per-phase parameter sequences. Fractional values are rounded up.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rounds up, but snaps values within floating-point noise of an integer
/// (e.g. 64^(2/3) = 15.999999999999998) to that integer.
pub fn ceil_eps(v: f64) -> u64 {
    let r = v.round();
    if (v - r).abs() <= 1e-9 * v.abs().max(1.0) {
        r.max(0.0) as u64
    } else {
        v.ceil().max(0.0) as u64
    }
}

pub fn floor_eps(v: f64) -> u64 {
    let r = v.round();
    if (v - r).abs() <= 1e-9 * v.abs().max(1.0) {
        r.max(0.0) as u64
    } else {
        v.floor().max(0.0) as u64
    }
}

/// `k^e` for real exponent e.
pub fn pow(k: u64, e: f64) -> f64 {
    (k as f64).powf(e)
}

/// exp^(j)(2): 2, 4, 16, 65536, then too large for any desk-scale k.
pub fn tower(j: u32) -> Option<u64> {
    match j {
        0 => Some(2),
        1 => Some(4),
        2 => Some(16),
        3 => Some(65536),
        _ => None,
    }
}

/// Iterated logarithm base 2: applications of log2 until the value is <= 1.
pub fn log_star(n: f64) -> u32 {
    let mut v = n;
    let mut c = 0;
    while v > 1.0 {
        v = v.log2();
        c += 1;
    }
    c
}

/// floor(log2(k0) / denom), the usual round-count ceiling.
pub fn max_rounds(k0: u64, denom: u32) -> u64 {
    if k0 <= 1 {
        return 0;
    }
    floor_eps((k0 as f64).log2() / denom as f64)
}

/// Whether out-of-domain parameters are rejected or allowed to run with a
/// vacuous guarantee.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainPolicy {
    #[default]
    Strict,
    Relaxed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    DimensionReduction,
    Simple,
    ExistsEqual,
    Rewind,
    Adaptive,
}

/// `k[0]` is the initial bound; `k[j]`, `l[j-1]` and `b[j-1]` belong to phase j.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseSchedule {
    pub variant: Variant,
    pub k: Vec<u64>,
    pub l: Vec<u64>,
    pub b: Vec<u64>,
}

impl PhaseSchedule {
    pub fn phases(&self) -> usize {
        self.l.len()
    }

    /// l_j = 3 + exp^(j-1)(2), k_j = max(ceil(k / (2^(j-1) exp^(j)(2))), E),
    /// stopping at the first phase whose k_j reaches E.
    pub fn dimension_reduction(k: u64, e: u64) -> Self {
        let mut s = PhaseSchedule {
            variant: Variant::DimensionReduction,
            k: vec![k],
            l: vec![],
            b: vec![],
        };
        if k <= e {
            return s;
        }
        let mut j = 1u32;
        loop {
            let l = 3 + tower(j - 1).expect("dimension reduction ends by phase 4");
            let kj = match tower(j) {
                Some(t) => {
                    let denom = (1u128 << (j - 1)) * t as u128;
                    (k as u128).div_ceil(denom) as u64
                }
                None => 0,
            }
            .max(e);
            s.l.push(l);
            s.k.push(kj);
            if kj <= e {
                return s;
            }
            j += 1;
        }
    }

    /// k_j = ceil(k0^(1-j/r)), l_j = ceil(4 E k0^(j/r - 1)).
    pub fn simple(k0: u64, e: u64, r: u32) -> Self {
        let rf = r as f64;
        let mut s = PhaseSchedule {
            variant: Variant::Simple,
            k: vec![k0],
            l: vec![],
            b: vec![],
        };
        for j in 1..=r {
            let jf = j as f64;
            s.k.push(ceil_eps(pow(k0, 1.0 - jf / rf)));
            s.l.push(ceil_eps(4.0 * e as f64 * pow(k0, jf / rf - 1.0)));
        }
        s
    }

    /// l_j = ceil(2 E k^(j/r - 1)).
    pub fn exists_equal(k: u64, e: u64, r: u32) -> Self {
        let rf = r as f64;
        let mut s = PhaseSchedule {
            variant: Variant::ExistsEqual,
            k: vec![k],
            l: vec![],
            b: vec![],
        };
        for j in 1..=r {
            s.l.push(ceil_eps(2.0 * e as f64 * pow(k, j as f64 / rf - 1.0)));
        }
        s
    }

    /// B_j = ceil(E k0^(1/r) / min(j^2, r)), k_j = ceil(k0^(1-j/r)),
    /// l_j = ceil(B_j / k_(j-1)).
    pub fn rewind(k0: u64, e: u64, r: u32) -> Self {
        let rf = r as f64;
        let root = pow(k0, 1.0 / rf);
        let mut s = PhaseSchedule {
            variant: Variant::Rewind,
            k: vec![k0],
            l: vec![],
            b: vec![],
        };
        for j in 1..=r {
            let bj = ceil_eps(e as f64 * root / (j * j).min(r) as f64);
            let kj = ceil_eps(pow(k0, 1.0 - j as f64 / rf));
            let prev = s.k[j as usize - 1].max(1);
            s.b.push(bj);
            s.l.push(bj.div_ceil(prev));
            s.k.push(kj);
        }
        s
    }

    /// Nominal adaptive schedule with E' = 7E: l_1 = ceil(E' k0^(1/r - 1)),
    /// l_j = ceil(2 E' / k0^(1 - j/r)) for j >= 2, and k_j = ceil(k0^(1-j/r))
    /// before the beta correction applied at run time.
    pub fn adaptive(k0: u64, e: u64, r: u32) -> Self {
        let rf = r as f64;
        let ep = 7.0 * e as f64;
        let mut s = PhaseSchedule {
            variant: Variant::Adaptive,
            k: vec![k0],
            l: vec![],
            b: vec![],
        };
        for j in 1..=r {
            let jf = j as f64;
            let l = if j == 1 {
                ceil_eps(ep * pow(k0, 1.0 / rf - 1.0))
            } else {
                ceil_eps(2.0 * ep / pow(k0, 1.0 - jf / rf))
            };
            s.l.push(l);
            s.k.push(ceil_eps(pow(k0, 1.0 - jf / rf)));
        }
        s
    }

    /// Sum over phases of k_(j-1) * l_j.
    pub fn test_volume(&self) -> u64 {
        self.l.iter().enumerate().map(|(i, &l)| self.k[i] * l).sum()
    }
}

pub fn check_simple_domain(k0: u64, r: u32, policy: DomainPolicy) -> Result<()> {
    if r == 0 {
        return Err(Error::Domain("r must be at least 1".into()));
    }
    if policy == DomainPolicy::Strict && r as u64 > max_rounds(k0, 2) {
        return Err(Error::Domain(format!(
            "r={r} exceeds floor(log2(k0)/2)={} for k0={k0}",
            max_rounds(k0, 2)
        )));
    }
    Ok(())
}

pub fn check_exists_domain(k: u64, e: u64, r: u32, policy: DomainPolicy) -> Result<()> {
    if r == 0 || e == 0 {
        return Err(Error::Domain("r and E must be at least 1".into()));
    }
    if policy == DomainPolicy::Strict {
        if e < k {
            return Err(Error::Domain(format!("E={e} below k={k}")));
        }
        if r as u64 > max_rounds(k, 2) {
            return Err(Error::Domain(format!("r={r} exceeds floor(log2(k)/2) for k={k}")));
        }
    }
    Ok(())
}

pub fn check_rewind_domain(k0: u64, r: u32, policy: DomainPolicy) -> Result<()> {
    if r == 0 {
        return Err(Error::Domain("r must be at least 1".into()));
    }
    if policy == DomainPolicy::Strict && r as u64 > max_rounds(k0, 6) {
        return Err(Error::Domain(format!("r={r} exceeds floor(log2(k0)/6) for k0={k0}")));
    }
    Ok(())
}

pub fn check_adaptive_domain(k0: u64, r: u32, policy: DomainPolicy) -> Result<()> {
    check_simple_domain(k0, r, policy)?;
    if policy == DomainPolicy::Strict && !r.is_power_of_two() {
        return Err(Error::Domain(format!("r={r} is not a power of two")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapping() {
        assert_eq!(ceil_eps(64f64.powf(2.0 / 3.0)), 16);
        assert_eq!(ceil_eps(2.0000001), 3);
        assert_eq!(ceil_eps(12.649), 13);
    }

    #[test]
    fn log_star_values() {
        assert_eq!(log_star(1.0), 0);
        assert_eq!(log_star(2.0), 1);
        assert_eq!(log_star(16.0), 3);
        assert_eq!(log_star(512.0), 4);
        assert_eq!(log_star(65536.0), 4);
        assert_eq!(log_star(65537.0), 5);
    }

    #[test]
    fn dimension_reduction_short_circuit() {
        assert_eq!(PhaseSchedule::dimension_reduction(8, 8).phases(), 0);
    }
}
