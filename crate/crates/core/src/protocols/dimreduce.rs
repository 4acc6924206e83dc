//! log*-phase dimension reduction from k coordinates down to about E.

use serde::{Deserialize, Serialize};

use crate::instance::Instance;
use crate::protocols::engine::{
    agreeing, exchange, false_positives, read_notice, select, send_notice, test_block, test_rows_pair, value_mask,
    values_of, ExchangeMode, Link, PhaseRecord, Status,
};
use crate::protocols::schedule::PhaseSchedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimMode {
    /// Explicit exchange; a phase keeping more than k_j coordinates means an
    /// equal coordinate almost surely exists, and the run answers yes.
    Exists,
    /// Coded exchange with d = k_(j-1); k_j bounds false positives.
    Testing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DimOutcome {
    Reduced(Vec<usize>),
    EarlyYes,
}

#[derive(Clone, Debug)]
pub struct DimRun {
    pub outcome: DimOutcome,
    pub schedule: PhaseSchedule,
    pub trace: Vec<PhaseRecord>,
    /// An armored exchange detected a decoding failure.
    pub aborted: bool,
}

pub fn dimension_reduce(inst: &Instance, active: &[usize], e: u64, mode: DimMode, link: &mut Link) -> DimRun {
    let schedule = PhaseSchedule::dimension_reduction(active.len() as u64, e);
    let mut run = DimRun {
        outcome: DimOutcome::Reduced(active.to_vec()),
        schedule: schedule.clone(),
        trace: Vec::new(),
        aborted: false,
    };
    let mask = value_mask(inst.coord_bits);
    let mut cur = active.to_vec();
    for j in 1..=schedule.phases() {
        if cur.is_empty() {
            break;
        }
        let l = schedule.l[j - 1];
        let kj = schedule.k[j];
        let xmode = match mode {
            DimMode::Exists => ExchangeMode::Explicit,
            DimMode::Testing => ExchangeMode::Hamming {
                d: schedule.k[j - 1] as usize,
            },
        };
        let sender = link.next_sender;
        let block = test_block(&mut link.coins, inst.k(), l);
        let (srows, rrows) =
            test_rows_pair(&block, values_of(inst, sender), values_of(inst, sender.flip()), &cur, l as usize, mask);
        let tag = format!("dim{j}");
        let ex = exchange(link, &format!("{tag}.tests"), &srows, &rrows, xmode);
        let kept = agreeing(&ex.view, &rrows);
        let survivors = select(&cur, &kept);
        let mut rec = PhaseRecord {
            stage: "dimreduce".into(),
            phase: j,
            l,
            d: match xmode {
                ExchangeMode::Explicit => cur.len() as u64,
                ExchangeMode::Hamming { d } => d as u64,
            },
            tested: cur.len(),
            survivors: survivors.len(),
            false_positives: false_positives(inst, &survivors),
            bits_phase: ex.bits as u64,
            k_bound: Some(kj),
            passed: !ex.failed,
            ..Default::default()
        };
        rec.test_volume = rec.d * l;
        if ex.failed && link.armor_bits > 0 {
            rec.bits_phase += send_notice(link, &format!("{tag}.notice"), cur.len(), &[], Status::Halt) as u64;
            run.trace.push(rec);
            run.aborted = true;
            return run;
        }
        if mode == DimMode::Exists && survivors.len() as u64 > kj {
            rec.bits_phase += send_notice(link, &format!("{tag}.notice"), cur.len(), &[], Status::Halt) as u64;
            run.trace.push(rec);
            run.outcome = DimOutcome::EarlyYes;
            return run;
        }
        rec.bits_phase += send_notice(link, &format!("{tag}.notice"), cur.len(), &kept, Status::Continue) as u64;
        let (_, seen) = read_notice(link, cur.len());
        debug_assert_eq!(seen, kept);
        cur = select(&cur, &seen);
        run.trace.push(rec);
    }
    run.outcome = DimOutcome::Reduced(cur);
    run
}
