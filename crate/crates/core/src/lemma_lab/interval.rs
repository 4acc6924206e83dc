//! Outward-rounded f64 intervals. Every operation widens its result by a
//! few ulps, which covers the rounding of the basic operations and of
//! `log2` (libm is not correctly rounded but stays within an ulp or two).

use serde::{Deserialize, Serialize};

const LOG_ULPS: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(mut v: f64, n: u32) -> f64 {
    for _ in 0..n {
        v = v.next_down();
    }
    v
}

fn up(mut v: f64, n: u32) -> f64 {
    for _ in 0..n {
        v = v.next_up();
    }
    v
}

#[allow(clippy::should_implement_trait)]
impl Interval {
    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    /// An integer, exact when below 2^53.
    pub fn int(n: u64) -> Self {
        let v = n as f64;
        if v as u64 == n && n < (1 << 53) {
            Self::point(v)
        } else {
            Interval { lo: down(v, 1), hi: up(v, 1) }
        }
    }

    fn widened(lo: f64, hi: f64) -> Self {
        Interval { lo: down(lo, 1), hi: up(hi, 1) }
    }

    pub fn add(self, o: Self) -> Self {
        Self::widened(self.lo + o.lo, self.hi + o.hi)
    }

    pub fn sub(self, o: Self) -> Self {
        Self::widened(self.lo - o.hi, self.hi - o.lo)
    }

    pub fn neg(self) -> Self {
        Interval { lo: -self.hi, hi: -self.lo }
    }

    pub fn mul(self, o: Self) -> Self {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::widened(lo, hi)
    }

    /// Division by an interval that excludes zero.
    pub fn div(self, o: Self) -> Self {
        assert!(o.lo > 0.0 || o.hi < 0.0, "division by an interval containing zero");
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::widened(lo, hi)
    }

    /// log2 of a positive interval.
    pub fn log2(self) -> Self {
        assert!(self.lo > 0.0, "log2 of a nonpositive interval");
        Interval {
            lo: down(self.lo.log2(), LOG_ULPS),
            hi: up(self.hi.log2(), LOG_ULPS),
        }
    }

    pub fn exp2(self) -> Self {
        Interval {
            lo: down(self.lo.exp2(), LOG_ULPS).max(0.0),
            hi: up(self.hi.exp2(), LOG_ULPS),
        }
    }

    pub fn max0(self) -> Self {
        Interval {
            lo: self.lo.max(0.0),
            hi: self.hi.max(0.0),
        }
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encloses_exact_values() {
        let third = Interval::int(1).div(Interval::int(3));
        assert!(third.lo < 1.0 / 3.0 + 1e-17 && third.hi > 1.0 / 3.0 - 1e-17);
        let l = Interval::int(1 << 20).log2();
        assert!(l.contains(20.0));
        assert!(l.width() < 1e-13);
        let d = Interval::int(5).sub(Interval::int(7));
        assert!(d.contains(-2.0));
    }
}
