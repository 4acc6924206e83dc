//! GF(2^m) arithmetic for 1 <= m <= 20 via log/antilog tables.
//!
//! Tables are built once per field width and shared process-wide.

use std::sync::OnceLock;

pub const MAX_M: u32 = 20;

/// Primitive polynomial per width, including the x^m term.
pub const PRIMITIVE_POLYS: [u32; 21] = [
    0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443, 0x8003,
    0x1100B, 0x20009, 0x40081, 0x80027, 0x100009,
];

#[derive(Debug)]
pub struct Gf {
    pub m: u32,
    pub poly: u32,
    /// Multiplicative group order 2^m - 1.
    pub order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

static FIELDS: [OnceLock<Gf>; 21] = [const { OnceLock::new() }; 21];

impl Gf {
    pub fn get(m: u32) -> &'static Gf {
        assert!((1..=MAX_M).contains(&m), "field width {m} unsupported");
        FIELDS[m as usize].get_or_init(|| Gf::build(m))
    }

    fn build(m: u32) -> Gf {
        let poly = PRIMITIVE_POLYS[m as usize];
        let order = (1u32 << m) - 1;
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; 1 << m];
        let mut v = 1u32;
        for i in 0..order {
            exp[i as usize] = v;
            log[v as usize] = i;
            v <<= 1;
            if v & (1 << m) != 0 {
                v ^= poly;
            }
        }
        for i in order..2 * order {
            exp[i as usize] = exp[(i - order) as usize];
        }
        Gf {
            m,
            poly,
            order,
            exp,
            log,
        }
    }

    /// alpha^e for e already reduced below the group order.
    #[inline]
    pub fn exp_reduced(&self, e: usize) -> u32 {
        self.exp[e]
    }

    #[inline]
    pub fn alpha_pow(&self, e: u64) -> u32 {
        self.exp[(e % self.order as u64) as usize]
    }

    #[inline]
    pub fn log(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        self.log[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    #[inline]
    pub fn div(&self, a: u32, b: u32) -> u32 {
        assert!(b != 0, "division by zero in GF(2^{})", self.m);
        if a == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.order - self.log[b as usize]) as usize]
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.div(1, a)
    }

    /// Checks that alpha generates the whole multiplicative group.
    pub fn is_primitive(&self) -> bool {
        let mut seen = vec![false; 1 << self.m];
        for i in 0..self.order {
            let v = self.exp[i as usize];
            if v == 0 || seen[v as usize] {
                return false;
            }
            seen[v as usize] = true;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Shift-and-add multiply, independent of the tables.
    fn slow_mul(m: u32, poly: u32, mut a: u32, mut b: u32) -> u32 {
        let mut r = 0;
        while b != 0 {
            if b & 1 == 1 {
                r ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & (1 << m) != 0 {
                a ^= poly;
            }
        }
        r
    }

    #[test]
    fn every_table_polynomial_is_primitive() {
        for m in 1..=MAX_M {
            assert!(Gf::get(m).is_primitive(), "m={m}");
        }
    }

    #[test]
    fn table_mul_matches_shift_and_add() {
        for m in [1, 2, 3, 4, 8, 13] {
            let f = Gf::get(m);
            let n = 1u32 << m;
            for a in (0..n).step_by((n as usize / 64).max(1)) {
                for b in (0..n).step_by((n as usize / 64).max(1)) {
                    assert_eq!(f.mul(a, b), slow_mul(m, f.poly, a, b));
                    if b != 0 {
                        assert_eq!(f.mul(f.div(a, b), b), a);
                    }
                }
            }
        }
    }
}
