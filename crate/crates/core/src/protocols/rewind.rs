//! Equality testing with history checks and rewinds.
//!
//! Refutation phase j: both parties generate l_j tests per active coordinate
//! and swap them through the Hamming-bounded exchange (d = k_(j-1)), append
//! own and received bits to their histories, then compare B_j-bit digests of
//! the history through phase j. A failed check charges the error meter and
//! rewinds one phase. After phase r each party appends E' local tests per
//! surviving coordinate, and the Verification stage compares digests of the
//! whole history, B_r, B_(r-1), ... bits at a time, until E' bits have
//! matched. A failed verification charges the meter and rewinds to the
//! Refutation phase with the same index. The run stops with
//! `BudgetExhausted` once the meter reaches E' = cE.
//!
//! Each party keeps its own active sets and histories; nothing forces them
//! to agree except the digests, which is the point.

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::Result;
use crate::instance::Instance;
use crate::primitives::checksum::{checksum_block, checksum_with};
use crate::protocols::engine::{
    agreeing, exchange, false_positives, select, test_block, test_rows, value_mask, ExchangeMode, Link, PhaseRecord,
};
use crate::protocols::fault::{apply_flips, FaultPlan, Stage, Target};
use crate::protocols::schedule::{ceil_eps, check_rewind_domain, pow, DomainPolicy, PhaseSchedule};
use crate::protocols::simple::verdicts_from;
use crate::transcript::Direction;

pub const DEFAULT_BUDGET_FACTOR: u64 = 2;

/// One party's history: per Refutation phase, its copy of Alice's and Bob's
/// test bits, then the post-stage segment. The canonical concatenation is
/// phase-major with Alice's segment first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HistoryLog {
    pub alice: Vec<BitString>,
    pub bob: Vec<BitString>,
    pub post: BitString,
}

impl HistoryLog {
    fn new(r: usize) -> Self {
        HistoryLog {
            alice: vec![BitString::new(); r],
            bob: vec![BitString::new(); r],
            post: BitString::new(),
        }
    }

    /// Clears phases j..=r and the post-stage segment.
    fn clear_from(&mut self, j: usize) {
        for p in j - 1..self.alice.len() {
            self.alice[p] = BitString::new();
            self.bob[p] = BitString::new();
        }
        self.post = BitString::new();
    }

    /// History through phase `upto`, plus the post stage if requested.
    pub fn concat(&self, upto: usize, with_post: bool) -> BitString {
        let mut out = BitString::new();
        for p in 0..upto {
            out.append(&self.alice[p]);
            out.append(&self.bob[p]);
        }
        if with_post {
            out.append(&self.post);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RewindOutcome {
    Completed,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeterIncrement {
    pub stage: Stage,
    pub phase: usize,
    pub amount: u64,
    pub meter_after: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RewindRun {
    pub outcome: RewindOutcome,
    pub verdicts_alice: Vec<bool>,
    pub verdicts_bob: Vec<bool>,
    pub schedule: PhaseSchedule,
    pub e_prime: u64,
    pub meter: u64,
    pub increments: Vec<MeterIncrement>,
    /// Refutation and Verification phases executed, rewinds included.
    pub phases: usize,
    pub trace: Vec<PhaseRecord>,
}

impl RewindRun {
    pub fn is_error(&self, inst: &Instance) -> bool {
        let truth = inst.truth();
        self.outcome == RewindOutcome::BudgetExhausted || self.verdicts_alice != truth || self.verdicts_bob != truth
    }
}

/// Meter charge for a failed Refutation phase j (j = 1 uses B_1).
pub fn refute_increment(schedule: &PhaseSchedule, k0: u64, r: u32, j: usize) -> u64 {
    let b = schedule.b[j.max(2) - 2];
    ceil_eps(b as f64 / (2.0 * pow(k0, 1.0 / r as f64)))
}

/// Meter charge for a failed Verification phase j.
pub fn verify_increment(schedule: &PhaseSchedule, k0: u64, r: u32, j: usize) -> u64 {
    let br = schedule.b[r as usize - 1];
    ceil_eps(br as f64 / (2.0 * pow(k0, 1.0 / r as f64))) + schedule.b[j..].iter().sum::<u64>()
}

/// Number of Verification phases a fault-free run needs: the shortest
/// suffix B_r, B_(r-1), ... whose sum reaches E' (all r if none does).
pub fn verify_phases_needed(schedule: &PhaseSchedule, e_prime: u64) -> usize {
    let mut acc = 0;
    for (n, &b) in schedule.b.iter().rev().enumerate() {
        acc += b;
        if acc >= e_prime {
            return n + 1;
        }
    }
    schedule.b.len()
}

enum Step {
    Refute(usize),
    Verify(usize),
}

fn speak(link: &mut Link, dir: Direction, tag: String, payload: BitString) {
    link.next_sender = dir;
    link.send(tag, payload);
}

#[allow(clippy::too_many_arguments)]
pub fn rewind_et_on(
    inst: &Instance,
    active: &[usize],
    r: u32,
    e: u64,
    c: u64,
    policy: DomainPolicy,
    plan: &FaultPlan,
    link: &mut Link,
) -> Result<RewindRun> {
    let k = inst.k();
    let k0 = (active.len() as u64).min(e);
    let e_prime = c * e;
    let mut run = RewindRun {
        outcome: RewindOutcome::Completed,
        verdicts_alice: vec![false; k],
        verdicts_bob: vec![false; k],
        schedule: PhaseSchedule::rewind(k0.max(1), e, r.max(1)),
        e_prime,
        meter: 0,
        increments: Vec::new(),
        phases: 0,
        trace: Vec::new(),
    };
    if active.is_empty() {
        return Ok(run);
    }
    check_rewind_domain(k0, r, policy)?;
    let schedule = PhaseSchedule::rewind(k0, e, r);
    run.schedule = schedule.clone();
    let ru = r as usize;
    let mask = value_mask(inst.coord_bits);

    // ia[j], ib[j]: each party's I_j
    let mut ia: Vec<Vec<usize>> = vec![Vec::new(); ru + 1];
    let mut ib: Vec<Vec<usize>> = vec![Vec::new(); ru + 1];
    ia[0] = active.to_vec();
    ib[0] = active.to_vec();
    let mut ha = HistoryLog::new(ru);
    let mut hb = HistoryLog::new(ru);
    let mut seen = std::collections::HashMap::<(Stage, usize), usize>::new();

    let mut step = Step::Refute(1);
    loop {
        match step {
            Step::Refute(j) => {
                let occ = bump(&mut seen, Stage::Refute, j);
                let faults: Vec<_> = plan.matching(Stage::Refute, j, occ).cloned().collect();
                ha.clear_from(j);
                hb.clear_from(j);
                let bits0 = link.transcript.total_bits;
                let l = schedule.l[j - 1];
                let d = schedule.k[j - 1] as usize;
                let block = test_block(&mut link.coins, k, l);
                let rows_a = test_rows(&block, &inst.x, &ia[j - 1], l as usize, mask);
                let rows_b = test_rows(&block, &inst.y, &ib[j - 1], l as usize, mask);
                link.next_sender = Direction::AtoB;
                let mut ab = exchange(link, &format!("ref{j}.a"), &rows_a, &rows_b, ExchangeMode::Hamming { d });
                link.next_sender = Direction::BtoA;
                let mut ba = exchange(link, &format!("ref{j}.b"), &rows_b, &rows_a, ExchangeMode::Hamming { d });
                for f in &faults {
                    match f.target {
                        Target::AliceView => apply_flips(&mut ba.view.bits, &f.flips),
                        Target::BobView => apply_flips(&mut ab.view.bits, &f.flips),
                        Target::Digest => {}
                    }
                }
                ha.alice[j - 1] = rows_a.bits.clone();
                ha.bob[j - 1] = ba.view.bits.clone();
                hb.alice[j - 1] = ab.view.bits.clone();
                hb.bob[j - 1] = rows_b.bits.clone();
                let bj = schedule.b[j - 1];
                let dblock = checksum_block(bj as usize, &mut link.coins);
                let mut da = checksum_with(&dblock, &ha.concat(j, false));
                let db = checksum_with(&dblock, &hb.concat(j, false));
                for f in faults.iter().filter(|f| f.target == Target::Digest) {
                    apply_flips(&mut da, &f.flips);
                }
                speak(link, Direction::BtoA, format!("ref{j}.hb"), db.clone());
                speak(link, Direction::AtoB, format!("ref{j}.ha"), da.clone());
                let passed = da == db;
                run.phases += 1;
                let kept_a = select(&ia[j - 1], &agreeing(&ba.view, &rows_a));
                let mut rec = PhaseRecord {
                    stage: "refute".into(),
                    phase: j,
                    l,
                    d: d as u64,
                    tested: ia[j - 1].len(),
                    survivors: kept_a.len(),
                    false_positives: false_positives(inst, &kept_a),
                    test_volume: l * ia[j - 1].len() as u64,
                    meter_before: run.meter,
                    checked_bits: bj,
                    passed,
                    k_bound: Some(schedule.k[j]),
                    ..Default::default()
                };
                if passed {
                    ia[j] = kept_a;
                    ib[j] = select(&ib[j - 1], &agreeing(&ab.view, &rows_b));
                    rec.meter_after = run.meter;
                    rec.bits_phase = link.transcript.total_bits - bits0;
                    run.trace.push(rec);
                    if j < ru {
                        step = Step::Refute(j + 1);
                    } else {
                        let pblock = test_block(&mut link.coins, k, e_prime);
                        ha.post = test_rows(&pblock, &inst.x, &ia[ru], e_prime as usize, mask).bits;
                        hb.post = test_rows(&pblock, &inst.y, &ib[ru], e_prime as usize, mask).bits;
                        step = Step::Verify(ru);
                    }
                    continue;
                }
                let amount = refute_increment(&schedule, k0, r, j);
                let back = j.max(2) - 1;
                let exhausted = charge(&mut run, Stage::Refute, j, amount);
                rec.meter_after = run.meter;
                rec.rewound_to = (!exhausted).then_some(back);
                rec.bits_phase = link.transcript.total_bits - bits0;
                run.trace.push(rec);
                if exhausted {
                    break;
                }
                step = Step::Refute(back);
            }
            Step::Verify(j) => {
                let occ = bump(&mut seen, Stage::Verify, j);
                let faults: Vec<_> = plan.matching(Stage::Verify, j, occ).cloned().collect();
                for f in &faults {
                    match f.target {
                        Target::AliceView => apply_flips(&mut ha.post, &f.flips),
                        Target::BobView => apply_flips(&mut hb.post, &f.flips),
                        Target::Digest => {}
                    }
                }
                let bits0 = link.transcript.total_bits;
                let bj = schedule.b[j - 1];
                let dblock = checksum_block(bj as usize, &mut link.coins);
                let mut da = checksum_with(&dblock, &ha.concat(ru, true));
                let db = checksum_with(&dblock, &hb.concat(ru, true));
                for f in faults.iter().filter(|f| f.target == Target::Digest) {
                    apply_flips(&mut da, &f.flips);
                }
                speak(link, Direction::AtoB, format!("ver{j}.a"), da.clone());
                speak(link, Direction::BtoA, format!("ver{j}.b"), db.clone());
                let passed = da == db;
                run.phases += 1;
                let mut rec = PhaseRecord {
                    stage: "verify".into(),
                    phase: j,
                    tested: ia[ru].len(),
                    survivors: ia[ru].len(),
                    false_positives: false_positives(inst, &ia[ru]),
                    meter_before: run.meter,
                    checked_bits: bj,
                    passed,
                    ..Default::default()
                };
                if passed {
                    rec.meter_after = run.meter;
                    rec.bits_phase = link.transcript.total_bits - bits0;
                    run.trace.push(rec);
                    let checked: u64 = schedule.b[j - 1..].iter().sum();
                    if checked >= e_prime || j == 1 {
                        break;
                    }
                    step = Step::Verify(j - 1);
                    continue;
                }
                let amount = verify_increment(&schedule, k0, r, j);
                let exhausted = charge(&mut run, Stage::Verify, j, amount);
                rec.meter_after = run.meter;
                rec.rewound_to = (!exhausted).then_some(j);
                rec.bits_phase = link.transcript.total_bits - bits0;
                run.trace.push(rec);
                if exhausted {
                    break;
                }
                step = Step::Refute(j);
            }
        }
    }
    if run.outcome == RewindOutcome::Completed {
        run.verdicts_alice = verdicts_from(k, &ia[ru]);
        run.verdicts_bob = verdicts_from(k, &ib[ru]);
    }
    Ok(run)
}

fn bump(seen: &mut std::collections::HashMap<(Stage, usize), usize>, stage: Stage, j: usize) -> usize {
    let c = seen.entry((stage, j)).or_insert(0);
    let occ = *c;
    *c += 1;
    occ
}

/// Charges the meter; true when the budget is exhausted.
fn charge(run: &mut RewindRun, stage: Stage, phase: usize, amount: u64) -> bool {
    run.meter += amount;
    run.increments.push(MeterIncrement {
        stage,
        phase,
        amount,
        meter_after: run.meter,
    });
    if run.meter >= run.e_prime {
        run.outcome = RewindOutcome::BudgetExhausted;
        true
    } else {
        false
    }
}
