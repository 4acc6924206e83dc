//! Message log and cost accounting.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::bits::BitString;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    AtoB,
    BtoA,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::AtoB => Direction::BtoA,
            Direction::BtoA => Direction::AtoB,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub direction: Direction,
    pub bit_length: usize,
    pub phase_tag: String,
    pub payload: BitString,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub messages: Vec<Message>,
    pub total_bits: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostLedger {
    pub bits_total: u64,
    pub bits_by_phase: BTreeMap<String, u64>,
    pub rounds_merged: usize,
    pub rounds_raw: usize,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, direction: Direction, phase_tag: impl Into<String>, payload: BitString) {
        self.total_bits += payload.len() as u64;
        self.messages.push(Message {
            direction,
            bit_length: payload.len(),
            phase_tag: phase_tag.into(),
            payload,
        });
    }

    pub fn rounds_raw(&self) -> usize {
        self.messages.len()
    }

    /// Number of maximal same-direction runs.
    pub fn merged_round_count(&self) -> usize {
        let mut runs = 0;
        let mut last = None;
        for m in &self.messages {
            if last != Some(m.direction) {
                runs += 1;
                last = Some(m.direction);
            }
        }
        runs
    }

    /// Groups messages into same-direction runs: (direction, total bits, message range).
    pub fn runs(&self) -> Vec<(Direction, u64, std::ops::Range<usize>)> {
        let mut out: Vec<(Direction, u64, std::ops::Range<usize>)> = Vec::new();
        for (i, m) in self.messages.iter().enumerate() {
            match out.last_mut() {
                Some((d, bits, range)) if *d == m.direction => {
                    *bits += m.bit_length as u64;
                    range.end = i + 1;
                }
                _ => out.push((m.direction, m.bit_length as u64, i..i + 1)),
            }
        }
        out
    }

    pub fn bits_with_prefix(&self, prefix: &str) -> u64 {
        self.messages
            .iter()
            .filter(|m| m.phase_tag.starts_with(prefix))
            .map(|m| m.bit_length as u64)
            .sum()
    }

    pub fn ledger(&self) -> CostLedger {
        let mut by = BTreeMap::new();
        for m in &self.messages {
            *by.entry(m.phase_tag.clone()).or_insert(0) += m.bit_length as u64;
        }
        CostLedger {
            bits_total: self.total_bits,
            bits_by_phase: by,
            rounds_merged: self.merged_round_count(),
            rounds_raw: self.rounds_raw(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }
}
