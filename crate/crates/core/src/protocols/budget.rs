//! Error budget for ExistsEqual.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// Smallest E' >= E + 2 with C(E'+k-1, k-1) * 2^(-E') <= 2^(-(E+1)),
/// i.e. C(E'+k-1, k-1) <= 2^(E'-E-1), in exact integer arithmetic.
pub fn error_budget_threshold(e: u64, k: u64) -> u64 {
    assert!(e >= 1 && k >= 1);
    let mut ep = e + 2;
    let mut binom = binomial(ep + k - 1, k - 1);
    loop {
        if binom <= BigUint::one() << (ep - e - 1) {
            return ep;
        }
        // C(n+1, k-1) = C(n, k-1) * (n+1) / (n+1-(k-1))
        let n = ep + k - 1;
        binom = binom * BigUint::from(n + 1) / BigUint::from(ep + 1);
        ep += 1;
    }
}

pub fn binomial(n: u64, r: u64) -> BigUint {
    let r = r.min(n - r.min(n));
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetState {
    pub e_prime: u64,
    pub spent: u64,
    pub terminated: bool,
}

impl BudgetState {
    pub fn new(e_prime: u64) -> Self {
        BudgetState {
            e_prime,
            spent: 0,
            terminated: false,
        }
    }

    /// Adds a phase's l_j * |I_j| and reports whether the budget is used up.
    pub fn charge(&mut self, amount: u64) -> bool {
        self.spent += amount;
        if self.spent >= self.e_prime {
            self.terminated = true;
        }
        self.terminated
    }
}
