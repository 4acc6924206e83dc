//! Single trials and Monte Carlo campaigns. Trial i of a campaign with seed s
//! uses derive_seed(s, i) for everything, so results do not depend on
//! scheduling; outcomes are merged in trial order.

use std::collections::{BTreeMap, BTreeSet};

use ccproto::coins::derive_seed;
use ccproto::instance::make_instance;
use ccproto::protocols::dimreduce::{dimension_reduce, DimMode, DimOutcome};
use ccproto::protocols::engine::false_positives;
use ccproto::protocols::fault::FaultPlan;
use ccproto::protocols::{
    adaptive_equality_testing, exists_equal, rewind_equality_testing, simple_equality_testing, Answer, Link,
    PhaseRecord, RewindOutcome,
};
use ccproto::reductions::setint_via_eq;
use ccproto::transcript::Transcript;
use ccproto::{Instance, SharedCoins};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, InstanceKind, ProtocolId};
use crate::error::Result;
use crate::stats::ErrorEstimate;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub failure: bool,
    /// An equal coordinate refuted, a planted equality answered No, or a
    /// common element missed.
    pub one_sided_violation: bool,
    pub bits_total: u64,
    pub rounds_merged: usize,
    pub rounds_raw: usize,
    pub test_volume: u64,
    pub phases: usize,
}

/// Everything one trial produced, for golden files and debugging.
#[derive(Clone, Debug)]
pub struct TrialDetail {
    pub outcome: TrialOutcome,
    pub transcript: Transcript,
}

pub fn trial_seed(seed: u64, index: u64) -> u64 {
    derive_seed(seed, index)
}

pub fn make_trial_instance(cfg: &ExperimentConfig, seed: u64) -> Result<Instance> {
    let k = cfg.k;
    let equal: Vec<usize> = match cfg.instance {
        InstanceKind::Unequal => Vec::new(),
        InstanceKind::Equal => (0..k).collect(),
        InstanceKind::Planted => vec![(derive_seed(seed, 7) % k as u64) as usize],
        InstanceKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 8));
            (0..k).filter(|_| rng.gen_bool(0.5)).collect()
        }
    };
    Ok(make_instance(k, cfg.coord_bits, &equal, derive_seed(seed, 0))?)
}

/// Two k-sets over [2^coord_bits] sharing exactly `overlap` elements.
pub fn make_trial_sets(k: usize, coord_bits: u32, overlap: usize, seed: u64) -> (Vec<u64>, Vec<u64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0));
    let mask = if coord_bits >= 64 { u64::MAX } else { (1u64 << coord_bits) - 1 };
    let mut used = BTreeSet::new();
    let mut fresh = |rng: &mut ChaCha8Rng| loop {
        let v = rng.gen::<u64>() & mask;
        if used.insert(v) {
            return v;
        }
    };
    let common: Vec<u64> = (0..overlap).map(|_| fresh(&mut rng)).collect();
    let mut a = common.clone();
    let mut b = common;
    a.extend((overlap..k).map(|_| fresh(&mut rng)));
    b.extend((overlap..k).map(|_| fresh(&mut rng)));
    (a, b)
}

fn volume(trace: &[PhaseRecord]) -> u64 {
    trace.iter().map(|p| p.test_volume).sum()
}

fn refutes_equal(inst: &Instance, verdicts: &[bool]) -> bool {
    (0..inst.k()).any(|i| inst.is_equal(i) && !verdicts[i])
}

pub fn run_trial_detail(cfg: &ExperimentConfig, plan: &FaultPlan, index: u64) -> Result<TrialDetail> {
    let seed = trial_seed(cfg.seed, index);
    let mut link = Link::new(derive_seed(seed, 1));
    let policy = cfg.policy.into();
    let mut o = TrialOutcome::default();
    match cfg.protocol {
        ProtocolId::Dimreduce => {
            let inst = make_trial_instance(cfg, seed)?;
            let all: Vec<usize> = (0..inst.k()).collect();
            let run = dimension_reduce(&inst, &all, cfg.e, DimMode::Testing, &mut link);
            if let DimOutcome::Reduced(active) = &run.outcome {
                let kept: BTreeSet<usize> = active.iter().copied().collect();
                o.one_sided_violation = (0..inst.k()).any(|i| inst.is_equal(i) && !kept.contains(&i));
                o.failure = false_positives(&inst, active) as u64 > cfg.e || o.one_sided_violation;
            }
            o.test_volume = volume(&run.trace);
            o.phases = run.trace.len();
        }
        ProtocolId::SimpleEt | ProtocolId::AdaptiveEt => {
            let inst = make_trial_instance(cfg, seed)?;
            let run = if cfg.protocol == ProtocolId::SimpleEt {
                simple_equality_testing(&inst, cfg.r, cfg.e, policy, &mut link)?
            } else {
                adaptive_equality_testing(&inst, cfg.r, cfg.e, policy, &mut link)?
            };
            o.failure = run.is_error(&inst);
            o.one_sided_violation = !run.aborted && refutes_equal(&inst, &run.verdicts);
            o.test_volume = volume(&run.trace);
            o.phases = run.trace.len();
        }
        ProtocolId::ExistsEq => {
            let inst = make_trial_instance(cfg, seed)?;
            let run = exists_equal(&inst, cfg.r, cfg.e, policy, &mut link)?;
            o.failure = run.is_error(&inst);
            o.one_sided_violation = !inst.equal_set().is_empty() && run.answer == Answer::No;
            o.test_volume = volume(&run.trace);
            o.phases = run.trace.len();
        }
        ProtocolId::RewindEt => {
            let inst = make_trial_instance(cfg, seed)?;
            let run = rewind_equality_testing(&inst, cfg.r, cfg.e, cfg.c, policy, plan, &mut link)?;
            o.failure = run.is_error(&inst);
            o.one_sided_violation = run.outcome == RewindOutcome::Completed
                && (refutes_equal(&inst, &run.verdicts_alice) || refutes_equal(&inst, &run.verdicts_bob));
            o.test_volume = volume(&run.trace);
            o.phases = run.phases;
        }
        ProtocolId::Setint => {
            let (a, b) = make_trial_sets(cfg.k, cfg.coord_bits, cfg.overlap, seed);
            let truth: BTreeSet<u64> = a.iter().copied().filter(|v| b.contains(v)).collect();
            let (r, e) = (cfg.r, cfg.e);
            let mut private = SharedCoins::new(derive_seed(seed, 2));
            let mut volume_acc = 0;
            let run = setint_via_eq(
                &a,
                &b,
                cfg.coord_bits,
                |inst, link| {
                    let run = simple_equality_testing(inst, r, e, policy, link)?;
                    volume_acc = volume(&run.trace);
                    Ok(run.verdicts)
                },
                &mut private,
                &mut link,
            )?;
            let got: BTreeSet<u64> = run.intersection.iter().copied().collect();
            o.failure = got != truth;
            o.one_sided_violation = !truth.is_subset(&got);
            o.test_volume = volume_acc;
        }
    }
    o.bits_total = link.transcript.total_bits;
    o.rounds_merged = link.transcript.merged_round_count();
    o.rounds_raw = link.transcript.rounds_raw();
    Ok(TrialDetail {
        outcome: o,
        transcript: link.transcript,
    })
}

pub fn run_trial(cfg: &ExperimentConfig, plan: &FaultPlan, index: u64) -> Result<TrialOutcome> {
    Ok(run_trial_detail(cfg, plan, index)?.outcome)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloResult {
    pub estimate: ErrorEstimate,
    pub one_sided_violations: u64,
    pub mean_bits: f64,
    pub sd_bits: f64,
    pub mean_rounds_merged: f64,
    pub mean_rounds_raw: f64,
    pub mean_test_volume: f64,
    /// Bits per message tag in trial 0.
    pub phase_bits: BTreeMap<String, u64>,
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

pub fn monte_carlo_error(cfg: &ExperimentConfig) -> Result<MonteCarloResult> {
    cfg.validate()?;
    let plan = cfg.load_fault_plan()?;
    let first = run_trial_detail(cfg, &plan, 0)?;
    let rest: Vec<TrialOutcome> = in_pool(cfg.threads, || {
        (1..cfg.trials)
            .into_par_iter()
            .map(|i| run_trial(cfg, &plan, i))
            .collect::<Result<Vec<_>>>()
    })?;
    let all: Vec<&TrialOutcome> = std::iter::once(&first.outcome).chain(rest.iter()).collect();
    let n = all.len() as f64;
    let failures = all.iter().filter(|o| o.failure).count() as u64;
    let sum = |f: &dyn Fn(&TrialOutcome) -> u64| all.iter().map(|o| f(o) as u128).sum::<u128>();
    let bits = sum(&|o| o.bits_total);
    let bits_sq: u128 = all.iter().map(|o| (o.bits_total as u128).pow(2)).sum();
    let mean_bits = bits as f64 / n;
    let var = (bits_sq as f64 / n - mean_bits * mean_bits).max(0.0);
    Ok(MonteCarloResult {
        estimate: ErrorEstimate::new(failures, cfg.trials),
        one_sided_violations: all.iter().filter(|o| o.one_sided_violation).count() as u64,
        mean_bits,
        sd_bits: var.sqrt(),
        mean_rounds_merged: sum(&|o| o.rounds_merged as u64) as f64 / n,
        mean_rounds_raw: sum(&|o| o.rounds_raw as u64) as f64 / n,
        mean_test_volume: sum(&|o| o.test_volume) as f64 / n,
        phase_bits: first.transcript.ledger().bits_by_phase,
    })
}
