//! ExistsEqual with an error budget: explicit test-bit exchange, and a Yes
//! as soon as the accumulated l_j * |I_j| reaches E'.

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::Result;
use crate::instance::Instance;
use crate::protocols::budget::{error_budget_threshold, BudgetState};
use crate::protocols::engine::{
    agreeing, exchange, false_positives, read_notice, select, send_notice, test_block, test_rows_pair, value_mask,
    values_of, ExchangeMode, Link, PhaseRecord, Status,
};
use crate::protocols::schedule::{check_exists_domain, DomainPolicy, PhaseSchedule};
use crate::transcript::Direction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Answer {
    Yes,
    No,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExistsRun {
    pub answer: Answer,
    pub holder: Direction,
    pub budget: BudgetState,
    /// Answered Yes in the dimension-reduction prefix.
    pub early_yes: bool,
    pub trace: Vec<PhaseRecord>,
}

impl ExistsRun {
    pub fn is_error(&self, inst: &Instance) -> bool {
        let truth = if inst.equal_set().is_empty() { Answer::No } else { Answer::Yes };
        self.answer != truth
    }
}

fn send_halt(link: &mut Link, tag: &str, answer: Answer) -> u64 {
    let mut p = BitString::new();
    p.push(true);
    p.push(answer == Answer::Yes);
    link.reply(tag, p);
    2
}

/// The r-phase protocol on `active` (|active| <= E expected). E' is derived
/// from E and |active|.
pub fn exists_equal_on(
    inst: &Instance,
    active: &[usize],
    r: u32,
    e: u64,
    policy: DomainPolicy,
    link: &mut Link,
) -> Result<ExistsRun> {
    let k = active.len() as u64;
    let mut run = ExistsRun {
        answer: Answer::No,
        holder: link.next_sender.flip(),
        budget: BudgetState::new(error_budget_threshold(e, k.max(1))),
        early_yes: false,
        trace: Vec::new(),
    };
    if k == 0 {
        return Ok(run);
    }
    check_exists_domain(k, e, r, policy)?;
    let schedule = PhaseSchedule::exists_equal(k, e, r);
    let mask = value_mask(inst.coord_bits);
    let mut cur = active.to_vec();
    for j in 1..=r as usize {
        let l = schedule.l[j - 1];
        let sender = link.next_sender;
        let block = test_block(&mut link.coins, inst.k(), l);
        let (srows, rrows) =
            test_rows_pair(&block, values_of(inst, sender), values_of(inst, sender.flip()), &cur, l as usize, mask);
        let tag = format!("ee{j}");
        let ex = exchange(link, &format!("{tag}.tests"), &srows, &rrows, ExchangeMode::Explicit);
        let kept = agreeing(&ex.view, &rrows);
        let survivors = select(&cur, &kept);
        let exhausted = run.budget.charge(l * survivors.len() as u64);
        run.holder = sender.flip();
        let mut rec = PhaseRecord {
            stage: "exists".into(),
            phase: j,
            l,
            d: cur.len() as u64,
            tested: cur.len(),
            survivors: survivors.len(),
            false_positives: false_positives(inst, &survivors),
            bits_phase: ex.bits as u64,
            test_volume: l * cur.len() as u64,
            budget_spent: run.budget.spent,
            passed: true,
            ..Default::default()
        };
        let last = j == r as usize;
        if exhausted || survivors.is_empty() {
            run.answer = if exhausted { Answer::Yes } else { Answer::No };
            if !last {
                rec.bits_phase += send_halt(link, &format!("{tag}.halt"), run.answer);
            }
            run.trace.push(rec);
            return Ok(run);
        }
        if last {
            run.answer = Answer::Yes;
            run.trace.push(rec);
            return Ok(run);
        }
        rec.bits_phase += send_notice(link, &format!("{tag}.notice"), cur.len(), &kept, Status::Continue) as u64;
        let (_, seen) = read_notice(link, cur.len());
        cur = select(&cur, &seen);
        run.trace.push(rec);
    }
    Ok(run)
}
