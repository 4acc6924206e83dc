//! Adaptive equality testing with budget E' = 7E.
//!
//! Round 1 is a plain coded exchange with d = k0. From round 2 on the sender
//! runs ceil(log2 r) exchanges side by side, invocation i using
//! l_j * 2^(i-1) tests with d = ceil(k_(j-1) / 2^(i-1)), each followed by a
//! 2E-bit digest of the sender's rows (see [`row_digest`]). The receiver finds i*, the longest
//! prefix of invocations whose digests verify, keeps the survivors of
//! invocation i*, and sets k_j = ceil(2^(-i*) k0^(1-j/r)). i* = 0 is a
//! protocol failure.

use crate::bits::BitString;
use crate::error::Result;
use crate::instance::Instance;
use crate::primitives::checksum::{row_digest, row_digest_block};
use crate::protocols::engine::{
    agreeing, decode_rows, encode_rows, exchange, false_positives, read_notice_with, select, send_notice_with,
    test_block, test_rows_pair, value_mask, values_of, ExchangeMode, Link, PhaseRecord, Status,
};
use crate::protocols::schedule::{ceil_eps, check_adaptive_domain, pow, DomainPolicy, PhaseSchedule};
use crate::protocols::simple::{close_status, verdicts_from, EtRun};
use crate::primitives::syndrome::ceil_log2;

pub const BUDGET_FACTOR: u64 = 7;

/// ceil(log2 r), the number of parallel invocations per round.
pub fn invocations(r: u32) -> u32 {
    ceil_log2(r as u64)
}

/// Nominal per-invocation (l, d) pairs for round j >= 2 given k_(j-1).
pub fn invocation_params(l_j: u64, k_prev: u64, n_inv: u32) -> Vec<(u64, u64)> {
    (0..n_inv).map(|i| (l_j << i, k_prev.div_ceil(1 << i))).collect()
}

pub fn adaptive_et_on(
    inst: &Instance,
    active: &[usize],
    r: u32,
    e: u64,
    policy: DomainPolicy,
    link: &mut Link,
) -> Result<EtRun> {
    let mut run = EtRun {
        verdicts: vec![false; inst.k()],
        holder: link.next_sender.flip(),
        aborted: false,
        trace: Vec::new(),
    };
    if active.is_empty() {
        return Ok(run);
    }
    let k0 = (active.len() as u64).min(e);
    check_adaptive_domain(k0, r, policy)?;
    let schedule = PhaseSchedule::adaptive(k0, e, r);
    let n_inv = invocations(r);
    let istar_width = ceil_log2(n_inv as u64 + 1) as usize;
    let digest_bits = (2 * e) as usize;
    let mask = value_mask(inst.coord_bits);
    let rf = r as f64;
    let mut cur = active.to_vec();
    let mut k_prev = k0;
    for j in 1..=r as usize {
        let l = schedule.l[j - 1];
        let sender = link.next_sender;
        let vals_s = values_of(inst, sender);
        let vals_r = values_of(inst, sender.flip());
        let tag = format!("ad{j}");
        let bits0 = link.transcript.total_bits;
        let k_star = false_positives(inst, &cur);
        let mut rec = PhaseRecord {
            stage: "adaptive".into(),
            phase: j,
            tested: cur.len(),
            k_star: Some(k_star as u64),
            k_bound: Some(k_prev),
            passed: true,
            ..Default::default()
        };
        let (kept, i_star) = if j == 1 {
            let block = test_block(&mut link.coins, inst.k(), l);
            let (srows, rrows) = test_rows_pair(&block, vals_s, vals_r, &cur, l as usize, mask);
            let ex = exchange(link, &format!("{tag}.tests"), &srows, &rrows, ExchangeMode::Hamming { d: k0 as usize });
            rec.l = l;
            rec.d = k0;
            rec.test_volume = l * k0;
            (agreeing(&ex.view, &rrows), 0)
        } else {
            let mut best: Option<Vec<usize>> = None;
            let mut i_star = 0u32;
            let mut prefix = true;
            for (i, (li, di)) in invocation_params(l, k_prev, n_inv).into_iter().enumerate() {
                let block = test_block(&mut link.coins, inst.k(), li);
                let (srows, rrows) = test_rows_pair(&block, vals_s, vals_r, &cur, li as usize, mask);
                let mode = ExchangeMode::Hamming { d: di as usize };
                let dblock = row_digest_block(digest_bits, &mut link.coins);
                let mut payload = encode_rows(&srows, mode);
                let body_len = payload.len();
                payload.append(&row_digest(&dblock, &srows));
                link.send(format!("{tag}.inv{}", i + 1), payload.clone());
                let (view, failed) = decode_rows(&payload.slice(0, body_len), &rrows, mode);
                let ok = !failed && row_digest(&dblock, &view) == payload.slice(body_len, digest_bits);
                rec.test_volume += li * di;
                if prefix && ok {
                    i_star = i as u32 + 1;
                    best = Some(agreeing(&view, &rrows));
                    rec.l = li;
                    rec.d = di;
                } else {
                    prefix = false;
                }
            }
            match best {
                Some(kept) => (kept, i_star),
                None => {
                    rec.passed = false;
                    rec.i_star = Some(0);
                    let mut p = BitString::new();
                    p.push(true);
                    link.reply(format!("{tag}.halt"), p);
                    rec.bits_phase = link.transcript.total_bits - bits0;
                    run.trace.push(rec);
                    run.aborted = true;
                    run.holder = sender.flip();
                    return Ok(run);
                }
            }
        };
        let survivors = select(&cur, &kept);
        let beta = 0.5f64.powi(i_star as i32);
        let k_next = ceil_eps(beta * pow(k0, 1.0 - j as f64 / rf));
        rec.i_star = (j > 1).then_some(i_star);
        rec.survivors = survivors.len();
        rec.false_positives = false_positives(inst, &survivors);
        run.holder = sender.flip();
        if j < r as usize {
            // the notice carries i* so the sender can follow k_j
            let width = if j > 1 { istar_width } else { 0 };
            let extra = BitString::from_u64(i_star as u64, width);
            send_notice_with(link, &format!("{tag}.notice"), cur.len(), &kept, Status::Continue, &extra);
            let (_, _, seen) = read_notice_with(link, cur.len(), width);
            cur = select(&cur, &seen);
        } else {
            cur = survivors;
            close_status(link, &format!("{tag}.status"), false);
        }
        k_prev = k_next;
        rec.bits_phase = link.transcript.total_bits - bits0;
        run.trace.push(rec);
    }
    run.verdicts = verdicts_from(inst.k(), &cur);
    Ok(run)
}
