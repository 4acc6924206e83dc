//! r-phase equality testing with the fixed schedule
//! k_j = k0^(1-j/r), l_j = 4 E k0^(j/r-1), coded exchanges with d = k_(j-1).

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::instance::Instance;
use crate::protocols::engine::{
    agreeing, exchange, false_positives, read_notice, select, send_notice, test_block, test_rows_pair, value_mask,
    values_of, ExchangeMode, Link, PhaseRecord, Status,
};
use crate::protocols::schedule::{check_simple_domain, DomainPolicy, PhaseSchedule};
use crate::transcript::Direction;

/// Result of an equality-testing run as seen by the party holding the answer.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EtRun {
    /// Indexed by original coordinate; false outside the active set.
    pub verdicts: Vec<bool>,
    pub holder: Direction,
    /// A failure was detected (armored decode failure or protocol-level
    /// failure); verdicts are then meaningless.
    pub aborted: bool,
    pub trace: Vec<PhaseRecord>,
}

impl EtRun {
    pub fn equal_coords(&self) -> Vec<usize> {
        (0..self.verdicts.len()).filter(|&i| self.verdicts[i]).collect()
    }

    /// Wrong verdict anywhere, or aborted.
    pub fn is_error(&self, inst: &Instance) -> bool {
        self.aborted || self.verdicts != inst.truth()
    }
}

pub(crate) fn verdicts_from(k: usize, equal: &[usize]) -> Vec<bool> {
    let mut v = vec![false; k];
    for &i in equal {
        v[i] = true;
    }
    v
}

/// If `armored` and the last receiver must tell the sender about an abort,
/// a one-bit status closes the run.
pub(crate) fn close_status(link: &mut Link, tag: &str, aborted: bool) -> u64 {
    if link.armor_bits == 0 {
        return 0;
    }
    let mut p = crate::bits::BitString::new();
    p.push(aborted);
    link.reply(tag, p);
    1
}

/// Runs on `active` directly; the caller guarantees at most min(|active|, E)
/// unequal coordinates there.
pub fn simple_et_on(
    inst: &Instance,
    active: &[usize],
    r: u32,
    e: u64,
    policy: DomainPolicy,
    link: &mut Link,
) -> Result<EtRun> {
    let k0 = (active.len() as u64).min(e);
    check_simple_domain(k0, r, policy)?;
    let schedule = PhaseSchedule::simple(k0, e, r);
    let mask = value_mask(inst.coord_bits);
    let mut run = EtRun {
        verdicts: vec![false; inst.k()],
        holder: link.next_sender.flip(),
        aborted: false,
        trace: Vec::new(),
    };
    if active.is_empty() {
        return Ok(run);
    }
    let mut cur = active.to_vec();
    for j in 1..=r as usize {
        if cur.is_empty() {
            break;
        }
        let l = schedule.l[j - 1];
        let d = schedule.k[j - 1];
        let sender = link.next_sender;
        let block = test_block(&mut link.coins, inst.k(), l);
        let (srows, rrows) =
            test_rows_pair(&block, values_of(inst, sender), values_of(inst, sender.flip()), &cur, l as usize, mask);
        let tag = format!("et{j}");
        let ex = exchange(link, &format!("{tag}.tests"), &srows, &rrows, ExchangeMode::Hamming { d: d as usize });
        let kept = agreeing(&ex.view, &rrows);
        let survivors = select(&cur, &kept);
        let mut rec = PhaseRecord {
            stage: "simple".into(),
            phase: j,
            l,
            d,
            tested: cur.len(),
            survivors: survivors.len(),
            false_positives: false_positives(inst, &survivors),
            bits_phase: ex.bits as u64,
            test_volume: d * l,
            k_bound: Some(schedule.k[j]),
            passed: !ex.failed,
            ..Default::default()
        };
        run.holder = sender.flip();
        if ex.failed && link.armor_bits > 0 {
            rec.bits_phase += close_status(link, &format!("{tag}.status"), true);
            run.trace.push(rec);
            run.aborted = true;
            return Ok(run);
        }
        if j < r as usize {
            rec.bits_phase += send_notice(link, &format!("{tag}.notice"), cur.len(), &kept, Status::Continue) as u64;
            let (_, seen) = read_notice(link, cur.len());
            cur = select(&cur, &seen);
        } else {
            cur = survivors;
            rec.bits_phase += close_status(link, &format!("{tag}.status"), false);
        }
        run.trace.push(rec);
    }
    if link.armor_bits == 0 {
        // the final receiver speaks next in any composed protocol
        link.next_sender = run.holder;
    }
    run.verdicts = verdicts_from(inst.k(), &cur);
    Ok(run)
}
