//! The generic phase: both parties run l_j keyed inner-product tests on every
//! coordinate still active, the current sender ships its test rows, and the
//! receiver keeps the coordinates whose rows agree with its own.
//!
//! Phases alternate senders. The receiver of phase j tells the other party
//! which coordinates it refuted in the same merged round as its own phase
//! j+1 test bits, so an r-phase run costs r merged rounds.

use serde::{Deserialize, Serialize};

use crate::bits::{BitString, Rows};
use crate::codes::{push_subset, read_subset, BitReader};
use crate::coins::{CoinBlock, SharedCoins};
use crate::instance::Instance;
use crate::primitives::checksum::{checksum_block, checksum_with};
use crate::primitives::inner_product::keyed_test_row;
use crate::primitives::syndrome::SyndromeCodec;
use crate::transcript::{Direction, Transcript};

/// Shared state of one two-party execution: the message log, the public
/// coins and whose turn it is.
#[derive(Clone, Debug)]
pub struct Link {
    pub transcript: Transcript,
    pub coins: SharedCoins,
    pub next_sender: Direction,
    /// Digest bits attached to every coded exchange (0 = unarmored).
    pub armor_bits: usize,
}

impl Link {
    pub fn new(seed: u64) -> Self {
        Link {
            transcript: Transcript::new(),
            coins: SharedCoins::new(seed),
            next_sender: Direction::AtoB,
            armor_bits: 0,
        }
    }

    pub fn armored(seed: u64, armor_bits: usize) -> Self {
        Link {
            armor_bits,
            ..Link::new(seed)
        }
    }

    pub fn send(&mut self, tag: impl Into<String>, payload: BitString) {
        self.transcript.record(self.next_sender, tag, payload);
    }

    /// Records a message from the current receiver and hands it the turn.
    pub fn reply(&mut self, tag: impl Into<String>, payload: BitString) {
        self.next_sender = self.next_sender.flip();
        self.transcript.record(self.next_sender, tag, payload);
    }

    pub fn pass_turn(&mut self) {
        self.next_sender = self.next_sender.flip();
    }
}

/// Which vector a party holds.
pub fn values_of(inst: &Instance, party: Direction) -> &[u64] {
    match party {
        Direction::AtoB => &inst.x,
        Direction::BtoA => &inst.y,
    }
}

pub fn value_mask(coord_bits: u32) -> u64 {
    if coord_bits >= 64 {
        u64::MAX
    } else {
        (1u64 << coord_bits) - 1
    }
}

/// Coins for `l` keyed tests on each of the instance's coordinates.
pub fn test_block(coins: &mut SharedCoins, k: usize, l: u64) -> CoinBlock {
    coins.reserve(k as u64 * l)
}

pub fn test_rows(block: &CoinBlock, vals: &[u64], coords: &[usize], l: usize, mask: u64) -> Rows {
    let mut bits = BitString::with_capacity(coords.len() * l);
    for &i in coords {
        bits.append(&keyed_test_row(block, i, l, vals[i], mask));
    }
    Rows::from_bits(l, coords.len(), bits)
}

/// Both parties' rows over the same coordinates. Where the values agree the
/// rows are identical, so they are computed once.
pub fn test_rows_pair(block: &CoinBlock, sv: &[u64], rv: &[u64], coords: &[usize], l: usize, mask: u64) -> (Rows, Rows) {
    let mut sb = BitString::with_capacity(coords.len() * l);
    let mut rb = BitString::with_capacity(coords.len() * l);
    for &i in coords {
        let row = keyed_test_row(block, i, l, sv[i], mask);
        if (sv[i] ^ rv[i]) & mask == 0 {
            rb.append(&row);
        } else {
            rb.append(&keyed_test_row(block, i, l, rv[i], mask));
        }
        sb.append(&row);
    }
    (Rows::from_bits(l, coords.len(), sb), Rows::from_bits(l, coords.len(), rb))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExchangeMode {
    /// Send every test bit.
    Explicit,
    /// Syndrome coding assuming at most `d` rows differ. Falls back to
    /// sending the rows verbatim when that is no longer than the syndrome.
    Hamming { d: usize },
}

#[derive(Clone, Debug)]
pub struct Exchange {
    /// The receiver's reconstruction of the sender's rows.
    pub view: Rows,
    /// Decoder inconsistency or digest mismatch seen by the receiver.
    pub failed: bool,
    pub bits: usize,
}

/// Encodes `rows` for the wire.
pub fn encode_rows(rows: &Rows, mode: ExchangeMode) -> BitString {
    let k = rows.count();
    match mode {
        ExchangeMode::Explicit => rows.bits.clone(),
        ExchangeMode::Hamming { d } => {
            if k == 0 {
                return BitString::new();
            }
            let codec = SyndromeCodec::new(k, rows.width, d.min(k)).expect("codec parameters");
            if k * rows.width <= codec.syndrome_bits {
                rows.bits.clone()
            } else {
                codec.encode(rows)
            }
        }
    }
}

/// Receiver side of [`encode_rows`], given its own rows as side information.
/// A payload whose length does not fit the receiver's own row count is a
/// failure and yields all-zero rows.
pub fn decode_rows(payload: &BitString, own: &Rows, mode: ExchangeMode) -> (Rows, bool) {
    let k = own.count();
    let raw_len = k * own.width;
    let zero = || Rows::zeros(own.width, k);
    match mode {
        ExchangeMode::Explicit => {
            if payload.len() != raw_len {
                return (zero(), true);
            }
            (Rows::from_bits(own.width, k, payload.clone()), false)
        }
        ExchangeMode::Hamming { d } => {
            if k == 0 {
                return (zero(), !payload.is_empty());
            }
            let codec = SyndromeCodec::new(k, own.width, d.min(k)).expect("codec parameters");
            if raw_len <= codec.syndrome_bits {
                if payload.len() != raw_len {
                    return (zero(), true);
                }
                return (Rows::from_bits(own.width, k, payload.clone()), false);
            }
            if payload.len() != codec.syndrome_bits {
                return (zero(), true);
            }
            codec.decode(own, payload)
        }
    }
}

/// One coded transfer from `link.next_sender`; the turn does not change.
pub fn exchange(link: &mut Link, tag: &str, sender_rows: &Rows, receiver_rows: &Rows, mode: ExchangeMode) -> Exchange {
    let mut payload = encode_rows(sender_rows, mode);
    let digest_block = (link.armor_bits > 0).then(|| checksum_block(link.armor_bits, &mut link.coins));
    if let Some(block) = &digest_block {
        payload.append(&checksum_with(block, &sender_rows.bits));
    }
    let bits = payload.len();
    link.send(tag, payload.clone());
    let body_len = bits - link.armor_bits.min(bits);
    let body = payload.slice(0, body_len);
    let (view, mut failed) = decode_rows(&body, receiver_rows, mode);
    if let Some(block) = &digest_block {
        let sent = payload.slice(body_len, bits - body_len);
        if failed || checksum_with(block, &view.bits) != sent {
            failed = true;
        }
    }
    Exchange { view, failed, bits }
}

/// Positions (into `active`) whose view row matches the receiver's row.
pub fn agreeing(view: &Rows, own: &Rows) -> Vec<usize> {
    (0..own.count()).filter(|&p| view.row_eq(p, own, p)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Continue,
    Halt,
}

/// Receiver's reply after a phase: a status bit and, when continuing, the
/// refuted positions of the tested list.
pub fn send_notice(link: &mut Link, tag: &str, tested: usize, kept_positions: &[usize], status: Status) -> usize {
    send_notice_with(link, tag, tested, kept_positions, status, &BitString::new())
}

/// [`send_notice`] with protocol-specific fields between the status bit and
/// the subset.
pub fn send_notice_with(
    link: &mut Link,
    tag: &str,
    tested: usize,
    kept_positions: &[usize],
    status: Status,
    extra: &BitString,
) -> usize {
    let mut payload = BitString::new();
    payload.push(status == Status::Halt);
    payload.append(extra);
    if status == Status::Continue {
        let refuted = complement(tested, kept_positions);
        push_subset(&mut payload, tested, &refuted);
    }
    let n = payload.len();
    link.reply(tag, payload);
    n
}

/// The other party's reading of the last notice.
pub fn read_notice(link: &Link, tested: usize) -> (Status, Vec<usize>) {
    let (st, _, kept) = read_notice_with(link, tested, 0);
    (st, kept)
}

pub fn read_notice_with(link: &Link, tested: usize, extra_len: usize) -> (Status, BitString, Vec<usize>) {
    let msg = link.transcript.messages.last().expect("notice recorded");
    let mut r = BitReader::new(&msg.payload);
    let halt = r.bit().expect("status bit");
    let extra = r.take(extra_len).expect("notice fields");
    if halt {
        return (Status::Halt, extra, Vec::new());
    }
    let refuted = read_subset(&mut r, tested).expect("well-formed notice");
    (Status::Continue, extra, complement(tested, &refuted))
}

fn complement(n: usize, sorted: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(n - sorted.len().min(n));
    let mut it = sorted.iter().peekable();
    for i in 0..n {
        if it.peek() == Some(&&i) {
            it.next();
        } else {
            out.push(i);
        }
    }
    out
}

/// One row of a phase trace; protocol-specific columns are optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub stage: String,
    pub phase: usize,
    pub l: u64,
    pub d: u64,
    pub tested: usize,
    pub survivors: usize,
    /// Unequal coordinates among the survivors (ground truth, diagnostic only).
    pub false_positives: usize,
    pub bits_phase: u64,
    pub test_volume: u64,
    pub budget_spent: u64,
    pub meter_before: u64,
    pub meter_after: u64,
    pub checked_bits: u64,
    pub rewound_to: Option<usize>,
    pub passed: bool,
    pub i_star: Option<u32>,
    pub k_star: Option<u64>,
    pub k_bound: Option<u64>,
}

pub fn false_positives(inst: &Instance, coords: &[usize]) -> usize {
    coords.iter().filter(|&&i| !inst.is_equal(i)).count()
}

pub fn select(active: &[usize], positions: &[usize]) -> Vec<usize> {
    positions.iter().map(|&p| active[p]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::make_instance;

    #[test]
    fn notice_round_trip() {
        let mut link = Link::new(1);
        send_notice(&mut link, "n", 10, &[0, 2, 3, 9], Status::Continue);
        let (st, kept) = read_notice(&link, 10);
        assert_eq!(st, Status::Continue);
        assert_eq!(kept, vec![0, 2, 3, 9]);
        assert_eq!(link.next_sender, Direction::BtoA);
    }

    #[test]
    fn zero_tests_keep_everything() {
        let inst = make_instance(8, 8, &[], 3).unwrap();
        let mut link = Link::new(2);
        let all: Vec<usize> = (0..8).collect();
        let block = test_block(&mut link.coins, 8, 0);
        let a = test_rows(&block, &inst.x, &all, 0, 0xff);
        let b = test_rows(&block, &inst.y, &all, 0, 0xff);
        let ex = exchange(&mut link, "p", &a, &b, ExchangeMode::Explicit);
        assert_eq!(ex.bits, 0);
        assert_eq!(agreeing(&ex.view, &b).len(), 8);
    }

    #[test]
    fn armored_exchange_flags_bad_decode() {
        // 6 differing rows but d = 1: decoding cannot be right, and the
        // digest catches it whatever the decoder returns.
        let inst = make_instance(6, 16, &[], 5).unwrap();
        let all: Vec<usize> = (0..6).collect();
        let mut link = Link::armored(9, 32);
        let block = test_block(&mut link.coins, 6, 40);
        let a = test_rows(&block, &inst.x, &all, 40, 0xffff);
        let b = test_rows(&block, &inst.y, &all, 40, 0xffff);
        let ex = exchange(&mut link, "p", &a, &b, ExchangeMode::Hamming { d: 1 });
        assert!(ex.failed);
    }
}
