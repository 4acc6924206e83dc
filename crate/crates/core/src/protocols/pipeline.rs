//! Full protocols on a whole instance. When k > E a dimension-reduction
//! prefix brings the instance down to about E coordinates first; the inner
//! protocol then runs on the survivors with k0 = min(|I|, E).

use crate::error::Result;
use crate::instance::Instance;
use crate::protocols::dimreduce::{dimension_reduce, DimMode, DimOutcome};
use crate::protocols::engine::{Link, PhaseRecord};
use crate::protocols::exists::{exists_equal_on, Answer, ExistsRun};
use crate::protocols::fault::FaultPlan;
use crate::protocols::rewind::{rewind_et_on, RewindRun};
use crate::protocols::schedule::{
    check_adaptive_domain, check_exists_domain, check_rewind_domain, check_simple_domain, DomainPolicy,
};
use crate::protocols::simple::{simple_et_on, EtRun};
use crate::protocols::{adaptive::adaptive_et_on, budget::BudgetState};

/// Testing-mode prefix; returns the active set and its trace, or an aborted
/// flag from an armored link.
fn testing_prefix(inst: &Instance, e: u64, link: &mut Link) -> (Vec<usize>, Vec<PhaseRecord>, bool) {
    let all: Vec<usize> = (0..inst.k()).collect();
    if inst.k() as u64 <= e {
        return (all, Vec::new(), false);
    }
    let dim = dimension_reduce(inst, &all, e, DimMode::Testing, link);
    match dim.outcome {
        DimOutcome::Reduced(active) => (active, dim.trace, dim.aborted),
        DimOutcome::EarlyYes => unreachable!("testing mode never answers early"),
    }
}

fn k0_of(inst: &Instance, e: u64) -> u64 {
    (inst.k() as u64).min(e)
}

pub fn simple_equality_testing(
    inst: &Instance,
    r: u32,
    e: u64,
    policy: DomainPolicy,
    link: &mut Link,
) -> Result<EtRun> {
    check_simple_domain(k0_of(inst, e), r, policy)?;
    let (active, mut trace, aborted) = testing_prefix(inst, e, link);
    if aborted {
        return Ok(EtRun {
            verdicts: vec![false; inst.k()],
            holder: link.next_sender,
            aborted,
            trace,
        });
    }
    let mut run = simple_et_on(inst, &active, r, e, DomainPolicy::Relaxed, link)?;
    trace.append(&mut run.trace);
    run.trace = trace;
    Ok(run)
}

pub fn adaptive_equality_testing(
    inst: &Instance,
    r: u32,
    e: u64,
    policy: DomainPolicy,
    link: &mut Link,
) -> Result<EtRun> {
    check_adaptive_domain(k0_of(inst, e), r, policy)?;
    let (active, mut trace, _) = testing_prefix(inst, e, link);
    let mut run = adaptive_et_on(inst, &active, r, e, DomainPolicy::Relaxed, link)?;
    trace.append(&mut run.trace);
    run.trace = trace;
    Ok(run)
}

#[allow(clippy::too_many_arguments)]
pub fn rewind_equality_testing(
    inst: &Instance,
    r: u32,
    e: u64,
    c: u64,
    policy: DomainPolicy,
    plan: &FaultPlan,
    link: &mut Link,
) -> Result<RewindRun> {
    check_rewind_domain(k0_of(inst, e), r, policy)?;
    let (active, mut trace, _) = testing_prefix(inst, e, link);
    let mut run = rewind_et_on(inst, &active, r, e, c, DomainPolicy::Relaxed, plan, link)?;
    trace.append(&mut run.trace);
    run.trace = trace;
    Ok(run)
}

pub fn exists_equal(inst: &Instance, r: u32, e: u64, policy: DomainPolicy, link: &mut Link) -> Result<ExistsRun> {
    let k0 = k0_of(inst, e);
    check_exists_domain(k0, e.max(k0), r, policy)?;
    let all: Vec<usize> = (0..inst.k()).collect();
    if inst.k() as u64 <= e {
        return exists_equal_on(inst, &all, r, e, DomainPolicy::Relaxed, link);
    }
    let dim = dimension_reduce(inst, &all, e, DimMode::Exists, link);
    let mut trace = dim.trace;
    match dim.outcome {
        DimOutcome::EarlyYes => Ok(ExistsRun {
            answer: Answer::Yes,
            holder: link.next_sender,
            budget: BudgetState::new(0),
            early_yes: true,
            trace,
        }),
        DimOutcome::Reduced(active) => {
            let mut run = exists_equal_on(inst, &active, r, e, DomainPolicy::Relaxed, link)?;
            trace.append(&mut run.trace);
            run.trace = trace;
            Ok(run)
        }
    }
}
