//! Lockstep CONGEST rounds with a per-edge, per-direction cap of B bits, and
//! replay of two-party transcripts as chunked edge traffic.

use std::collections::HashSet;

use ccproto::transcript::Transcript;
use ccproto::{BitString, Direction};
use serde::{Deserialize, Serialize};

use crate::error::{CongestError, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Envelope {
    pub from: usize,
    pub to: usize,
    pub payload: BitString,
}

#[derive(Clone, Debug)]
pub struct CongestNetwork {
    pub graph: Graph,
    pub cap_bits: usize,
    pub round: u64,
    pub bits_delivered: u64,
    pub max_message_bits: usize,
}

/// B = ceil(log2 n) * c_msg, at least 1.
pub fn message_cap(n: usize, c_msg: u32) -> usize {
    (ceil_log2(n as u64) as usize).max(1) * c_msg.max(1) as usize
}

pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

impl CongestNetwork {
    pub fn new(graph: Graph, c_msg: u32) -> Self {
        let cap_bits = message_cap(graph.n, c_msg);
        CongestNetwork {
            graph,
            cap_bits,
            round: 0,
            bits_delivered: 0,
            max_message_bits: 0,
        }
    }

    pub fn delta(&self) -> usize {
        self.graph.max_degree()
    }

    /// Delivers every envelope to its destination's inbox. Oversize
    /// messages, non-edges and two messages on one directed edge are errors.
    pub fn run_round(&mut self, outboxes: Vec<Envelope>) -> Result<Vec<Vec<Envelope>>> {
        let mut seen = HashSet::with_capacity(outboxes.len());
        for e in &outboxes {
            if e.payload.len() > self.cap_bits {
                return Err(CongestError::Oversize {
                    from: e.from,
                    to: e.to,
                    bits: e.payload.len(),
                    cap: self.cap_bits,
                });
            }
            if e.from >= self.graph.n || e.to >= self.graph.n || !self.graph.has_edge(e.from, e.to) {
                return Err(CongestError::NoEdge(e.from, e.to));
            }
            if !seen.insert((e.from, e.to)) {
                return Err(CongestError::Duplicate(e.from, e.to));
            }
        }
        let mut inboxes = vec![Vec::new(); self.graph.n];
        for e in outboxes {
            self.bits_delivered += e.payload.len() as u64;
            self.max_message_bits = self.max_message_bits.max(e.payload.len());
            inboxes[e.to].push(e);
        }
        self.round += 1;
        Ok(inboxes)
    }
}

/// A finished two-party run on edge (alice, bob), as same-direction runs of
/// bits in protocol order.
#[derive(Clone, Debug)]
pub struct Session {
    pub alice: usize,
    pub bob: usize,
    pub runs: Vec<(Direction, BitString)>,
}

impl Session {
    pub fn from_transcript(alice: usize, bob: usize, t: &Transcript) -> Self {
        let runs = t
            .runs()
            .into_iter()
            .map(|(d, _, range)| {
                let mut bits = BitString::new();
                for m in &t.messages[range] {
                    bits.append(&m.payload);
                }
                (d, bits)
            })
            .collect();
        Session { alice, bob, runs }
    }

    pub fn bits(&self) -> u64 {
        self.runs.iter().map(|(_, b)| b.len() as u64).sum()
    }

    /// Rounds this session needs on its own: each run takes
    /// max(1, ceil(bits / B)) rounds and runs go strictly one after another.
    pub fn rounds_needed(&self, cap: usize) -> u64 {
        self.runs.iter().map(|(_, b)| b.len().div_ceil(cap).max(1) as u64).sum()
    }

    fn endpoints(&self, d: Direction) -> (usize, usize) {
        match d {
            Direction::AtoB => (self.alice, self.bob),
            Direction::BtoA => (self.bob, self.alice),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayStats {
    pub rounds: u64,
    pub bits: u64,
    pub messages: u64,
}

/// Plays all sessions in parallel on the network's shared clock. Each
/// session sends one chunk of at most B bits per round, starting its next
/// run the round after the previous one is fully delivered. The received
/// bits are checked against the transcripts.
pub fn replay_sessions(net: &mut CongestNetwork, sessions: &[Session]) -> Result<ReplayStats> {
    let start_round = net.round;
    let cap = net.cap_bits;
    // (run index, bit offset within the run)
    let mut cursor = vec![(0usize, 0usize); sessions.len()];
    let mut received: Vec<Vec<BitString>> = sessions.iter().map(|s| vec![BitString::new(); s.runs.len()]).collect();
    let mut stats = ReplayStats::default();
    loop {
        let mut out = Vec::new();
        let mut owner = Vec::new();
        for (si, s) in sessions.iter().enumerate() {
            let (ri, off) = cursor[si];
            if ri >= s.runs.len() {
                continue;
            }
            let (d, bits) = &s.runs[ri];
            let len = cap.min(bits.len() - off);
            let (from, to) = s.endpoints(*d);
            out.push(Envelope {
                from,
                to,
                payload: bits.slice(off, len),
            });
            owner.push(si);
        }
        if out.is_empty() {
            break;
        }
        stats.messages += out.len() as u64;
        let inboxes = net.run_round(out)?;
        // match deliveries back to sessions by (from, to); one session per edge
        let mut by_edge = std::collections::HashMap::with_capacity(owner.len());
        for &si in &owner {
            let s = &sessions[si];
            let (from, to) = s.endpoints(s.runs[cursor[si].0].0);
            by_edge.insert((from, to), si);
        }
        for inbox in inboxes {
            for e in inbox {
                let si = by_edge[&(e.from, e.to)];
                let (ri, off) = cursor[si];
                stats.bits += e.payload.len() as u64;
                received[si][ri].append(&e.payload);
                let run_len = sessions[si].runs[ri].1.len();
                let next = off + e.payload.len();
                cursor[si] = if next >= run_len { (ri + 1, 0) } else { (ri, next) };
            }
        }
    }
    for (s, got) in sessions.iter().zip(&received) {
        for ((_, sent), got) in s.runs.iter().zip(got) {
            assert_eq!(sent, got, "replayed bits differ from the transcript");
        }
    }
    stats.rounds = net.round - start_round;
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> CongestNetwork {
        CongestNetwork::new(Graph::from_edges(8, &[(0, 1), (1, 2)]).unwrap(), 1)
    }

    #[test]
    fn empty_round_advances_clock() {
        let mut net = path3();
        let inbox = net.run_round(Vec::new()).unwrap();
        assert_eq!(net.round, 1);
        assert!(inbox.iter().all(Vec::is_empty));
    }

    #[test]
    fn cap_enforced() {
        let mut net = path3();
        assert_eq!(net.cap_bits, 3);
        let ok = Envelope { from: 0, to: 1, payload: BitString::zeros(3) };
        let back = Envelope { from: 1, to: 0, payload: BitString::zeros(3) };
        assert!(net.run_round(vec![ok.clone(), back]).is_ok());
        let big = Envelope { from: 0, to: 1, payload: BitString::zeros(4) };
        assert!(matches!(net.run_round(vec![big]), Err(CongestError::Oversize { .. })));
        assert!(matches!(net.run_round(vec![ok.clone(), ok]), Err(CongestError::Duplicate(0, 1))));
        let stray = Envelope { from: 0, to: 2, payload: BitString::new() };
        assert!(net.run_round(vec![stray]).is_err());
    }
}
