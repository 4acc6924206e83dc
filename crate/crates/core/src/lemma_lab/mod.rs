//! Numerical checks of two entropy inequalities over explicit finite
//! distributions:
//!
//! * support reduction: if H(p) >= s - g and q(x) <= p(x)/alpha on supp(q),
//!   then H(q) >= s - g/alpha - H(alpha)/alpha;
//! * KL-Markov: if H(q) >= s - g1 and p(x) >= 2^(-s-g2) on supp(q), then
//!   Pr_q[q(x)/p(x) > 2^(g1/alpha + g2 - (1-alpha) log2(1-alpha)/alpha)] <= alpha.
//!
//! Distributions are integer weight vectors, so every probability is an
//! exact rational and event masses compare exactly. Logarithms go through
//! outward-rounded intervals; a check reports `Violated` only when the
//! interval proves it, and `Tight` when the margin is within rounding of 0.

pub mod interval;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use interval::Interval;

/// Weights stay below this so totals over 2^12 points are exact in f64.
const MAX_WEIGHT: u64 = 1 << 36;

/// A rational in [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0 && num <= den);
        Ratio { num, den }
    }

    pub fn value(&self) -> Interval {
        Interval::int(self.num).div(Interval::int(self.den))
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }
}

/// Binary entropy in bits; 0 at the endpoints.
pub fn binary_entropy(a: Ratio) -> Interval {
    if a.num == 0 || a.is_one() {
        return Interval::point(0.0);
    }
    let d = Interval::int(a.den).log2();
    let la = Interval::int(a.num).log2().sub(d);
    let lb = Interval::int(a.den - a.num).log2().sub(d);
    let pa = a.value();
    let pb = Ratio::new(a.den - a.num, a.den).value();
    pa.mul(la).add(pb.mul(lb)).neg()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteDistribution {
    /// Universe of 2^s points.
    pub s: u32,
    pub weights: Vec<u64>,
}

impl FiniteDistribution {
    pub fn new(s: u32, weights: Vec<u64>) -> Result<Self> {
        if s > 20 || weights.len() != 1usize << s {
            return Err(Error::InvalidInput(format!("{} weights for s = {s}", weights.len())));
        }
        let total: u128 = weights.iter().map(|&w| w as u128).sum();
        if total == 0 || total >= 1 << 53 {
            return Err(Error::InvalidInput(format!("total weight {total} outside (0, 2^53)")));
        }
        Ok(FiniteDistribution { s, weights })
    }

    pub fn uniform(s: u32) -> Self {
        FiniteDistribution::new(s, vec![1; 1 << s]).expect("valid")
    }

    pub fn total(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn support_size(&self) -> usize {
        self.weights.iter().filter(|&&w| w > 0).count()
    }

    /// log2 p(x) for x in the support.
    pub fn log2_prob(&self, x: usize) -> Interval {
        Interval::int(self.weights[x]).log2().sub(Interval::int(self.total()).log2())
    }

    /// H = log2 W - (1/W) sum w log2 w.
    pub fn entropy(&self) -> Interval {
        let mut acc = Interval::point(0.0);
        for &w in &self.weights {
            if w > 1 {
                acc = acc.add(Interval::int(w).mul(Interval::int(w).log2()));
            }
        }
        let t = Interval::int(self.total());
        t.log2().sub(acc.div(t)).max0()
    }

    /// p conditioned on `event` (indices into the universe).
    pub fn conditioned(&self, event: &[usize]) -> Result<Self> {
        let mut w = vec![0; self.weights.len()];
        for &x in event {
            w[x] = self.weights[x];
        }
        FiniteDistribution::new(self.s, w)
    }

    pub fn mass(&self, event: &[usize]) -> Ratio {
        Ratio::new(event.iter().map(|&x| self.weights[x]).sum(), self.total())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    /// The margin is 0 within rounding (equality cases).
    Tight,
    Violated,
}

fn classify(margin: Interval) -> Verdict {
    if margin.lo >= 0.0 {
        Verdict::Holds
    } else if margin.hi < 0.0 {
        Verdict::Violated
    } else {
        Verdict::Tight
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportCheck {
    pub s: u32,
    pub alpha: Ratio,
    pub g: Interval,
    pub h_q: Interval,
    pub bound: Interval,
    /// H(q) minus the bound.
    pub margin: Interval,
    pub verdict: Verdict,
}

/// Conditions p on `event` (mass >= alpha) and checks the support-reduction
/// inequality with g = s - H(p).
pub fn check_entropy_support(p: &FiniteDistribution, event: &[usize], alpha: Ratio) -> Result<SupportCheck> {
    if alpha.num == 0 {
        return Err(Error::InvalidInput("alpha must be positive".into()));
    }
    let m = p.mass(event);
    // p(X) >= alpha, exactly
    if (m.num as u128) * (alpha.den as u128) < (alpha.num as u128) * (m.den as u128) {
        return Err(Error::InvalidInput("event mass below alpha".into()));
    }
    if p.support_size() < 2 {
        return Err(Error::InvalidInput("g must lie below s".into()));
    }
    let q = p.conditioned(event)?;
    let s = Interval::int(p.s as u64);
    let g = s.sub(p.entropy()).max0();
    let a = alpha.value();
    let bound = s.sub(g.div(a)).sub(binary_entropy(alpha).div(a));
    let h_q = q.entropy();
    let margin = h_q.sub(bound);
    Ok(SupportCheck {
        s: p.s,
        alpha,
        g,
        h_q,
        bound,
        margin,
        verdict: classify(margin),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KlCheck {
    pub s: u32,
    pub alpha: Ratio,
    pub g1: f64,
    pub g2: f64,
    pub log2_threshold: Interval,
    /// q-mass of points certainly above the threshold.
    pub tail_certain: Ratio,
    /// q-mass of points possibly above it.
    pub tail_possible: Ratio,
    pub verdict: Verdict,
}

/// Checks the KL-Markov inequality with the smallest admissible g1 and g2
/// (rounded up to certified values).
pub fn check_kl_markov(p: &FiniteDistribution, q: &FiniteDistribution, alpha: Ratio) -> Result<KlCheck> {
    if p.s != q.s {
        return Err(Error::InvalidInput("p and q live on different universes".into()));
    }
    if alpha.num == 0 || alpha.is_one() {
        return Err(Error::InvalidInput("alpha must lie in (0, 1)".into()));
    }
    let supp: Vec<usize> = (0..q.weights.len()).filter(|&x| q.weights[x] > 0).collect();
    if supp.iter().any(|&x| p.weights[x] == 0) {
        return Err(Error::InvalidInput("supp(q) not inside supp(p)".into()));
    }
    let s = Interval::int(q.s as u64);
    let g1 = s.sub(q.entropy()).max0().hi;
    if g1 >= q.s as f64 {
        return Err(Error::InvalidInput("g1 must lie below s".into()));
    }
    let mut g2 = 0.0f64;
    for &x in &supp {
        g2 = g2.max(s.add(p.log2_prob(x)).neg().hi);
    }
    let a = alpha.value();
    let one_minus = Ratio::new(alpha.den - alpha.num, alpha.den);
    let om = one_minus.value();
    let om_log = Interval::int(one_minus.num).log2().sub(Interval::int(one_minus.den).log2());
    let log2_threshold = Interval::point(g1)
        .div(a)
        .add(Interval::point(g2))
        .sub(om.mul(om_log).div(a));
    let (mut certain, mut possible) = (0u64, 0u64);
    for &x in &supp {
        let lr = q.log2_prob(x).sub(p.log2_prob(x));
        if lr.lo > log2_threshold.hi {
            certain += q.weights[x];
        }
        if lr.hi > log2_threshold.lo {
            possible += q.weights[x];
        }
    }
    let v = q.total();
    let above = |t: u64| (t as u128) * (alpha.den as u128) > (alpha.num as u128) * (v as u128);
    let verdict = if above(certain) {
        Verdict::Violated
    } else if above(possible) {
        Verdict::Tight
    } else {
        Verdict::Holds
    };
    Ok(KlCheck {
        s: q.s,
        alpha,
        g1,
        g2,
        log2_threshold,
        tail_certain: Ratio::new(certain, v),
        tail_possible: Ratio::new(possible, v),
        verdict,
    })
}

/// Normalized-exponential weights with a random skew exponent; about
/// `zero_frac` of the points get weight 0. At least two points stay
/// positive.
pub fn random_weights(rng: &mut impl Rng, n: usize, zero_frac: f64) -> Vec<u64> {
    let skew: f64 = rng.gen_range(0.3..4.0);
    let scale = (MAX_WEIGHT >> 13) as f64;
    let mut w: Vec<u64> = (0..n)
        .map(|_| {
            if rng.gen_bool(zero_frac) {
                return 0;
            }
            let e = -(1.0 - rng.gen::<f64>()).ln();
            ((e.powf(skew) * scale).ceil() as u64).clamp(1, MAX_WEIGHT >> 12)
        })
        .collect();
    while w.iter().filter(|&&v| v > 0).count() < 2.min(n) {
        let i = rng.gen_range(0..n);
        w[i] = w[i].max(1) + rng.gen_range(0..1000);
    }
    w
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub trials: u64,
    pub violations: u64,
    pub tight: u64,
    /// Smallest certified lower end of the margin seen (support lemma), or
    /// smallest slack alpha - tail (KL lemma).
    pub min_margin: f64,
    pub first_violation: Option<String>,
}

impl LemmaReport {
    fn new(lemma: &str) -> Self {
        LemmaReport {
            lemma: lemma.into(),
            min_margin: f64::INFINITY,
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// One admissible (p, X, alpha) draw: p on 2^s points with s in 1..=max_s,
/// a random event X and alpha in (0, p(X)].
pub fn random_support_case(rng: &mut impl Rng, max_s: u32) -> (FiniteDistribution, Vec<usize>, Ratio) {
    loop {
        let s = rng.gen_range(1..=max_s);
        let n = 1usize << s;
        let zero_frac = if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.0..0.6) };
        let p = FiniteDistribution::new(s, random_weights(rng, n, zero_frac)).expect("valid weights");
        let keep: f64 = rng.gen_range(0.05..=1.0);
        let event: Vec<usize> = (0..n).filter(|_| rng.gen_bool(keep)).collect();
        let m = p.mass(&event);
        if m.num == 0 {
            continue;
        }
        // alpha = p(X) * t / 1000, sometimes exactly p(X)
        let t = if rng.gen_bool(0.2) { 1000 } else { rng.gen_range(1..=1000u64) };
        let alpha = Ratio::new(m.num * t, m.den * 1000);
        return (p, event, alpha);
    }
}

/// One admissible (p, q, alpha) draw with supp(q) inside supp(p).
pub fn random_kl_case(rng: &mut impl Rng, max_s: u32) -> (FiniteDistribution, FiniteDistribution, Ratio) {
    loop {
        let s = rng.gen_range(1..=max_s);
        let n = 1usize << s;
        let zero_frac = if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.0..0.5) };
        let pw = random_weights(rng, n, zero_frac);
        let qw: Vec<u64> = match rng.gen_range(0..3) {
            // fresh weights on p's support
            0 => {
                let zf = rng.gen_range(0.0..0.5);
                let fresh = random_weights(rng, n, zf);
                fresh.iter().zip(&pw).map(|(&f, &w)| if w > 0 { f } else { 0 }).collect()
            }
            // p reweighted by random factors
            1 => pw.iter().map(|&w| w * rng.gen_range(1..=64)).collect(),
            // p conditioned on a random event
            _ => {
                let keep: f64 = rng.gen_range(0.05..=1.0);
                pw.iter().map(|&w| if rng.gen_bool(keep) { w } else { 0 }).collect()
            }
        };
        if qw.iter().filter(|&&w| w > 0).count() < 2 {
            continue;
        }
        let (Ok(p), Ok(q)) = (FiniteDistribution::new(s, pw), FiniteDistribution::new(s, qw)) else {
            continue;
        };
        let alpha = Ratio::new(rng.gen_range(1..1000), 1000);
        return (p, q, alpha);
    }
}

pub fn run_support_trials(trials: u64, max_s: u32, seed: u64) -> LemmaReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = LemmaReport::new("entropy_support");
    for _ in 0..trials {
        let (p, event, alpha) = random_support_case(&mut rng, max_s);
        let c = check_entropy_support(&p, &event, alpha).expect("generator draws admissible cases");
        rep.trials += 1;
        rep.min_margin = rep.min_margin.min(c.margin.lo);
        match c.verdict {
            Verdict::Holds => {}
            Verdict::Tight => rep.tight += 1,
            Verdict::Violated => {
                rep.violations += 1;
                rep.first_violation.get_or_insert_with(|| format!("{c:?}"));
            }
        }
    }
    rep
}

pub fn run_kl_trials(trials: u64, max_s: u32, seed: u64) -> LemmaReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = LemmaReport::new("kl_markov");
    for _ in 0..trials {
        let (p, q, alpha) = random_kl_case(&mut rng, max_s);
        let c = check_kl_markov(&p, &q, alpha).expect("generator draws admissible cases");
        rep.trials += 1;
        let slack = alpha.num as f64 / alpha.den as f64 - c.tail_possible.num as f64 / c.tail_possible.den as f64;
        rep.min_margin = rep.min_margin.min(slack);
        match c.verdict {
            Verdict::Holds => {}
            Verdict::Tight => rep.tight += 1,
            Verdict::Violated => {
                rep.violations += 1;
                rep.first_violation.get_or_insert_with(|| format!("{c:?}"));
            }
        }
    }
    rep
}
