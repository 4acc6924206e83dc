//! Local triangle enumeration by per-edge set intersection.
//!
//! Every edge {u, v} (u < v, u as Alice) intersects N(u) \ {v} with
//! N(v) \ {u} through the perfect-hash reduction and an equality-testing
//! protocol; each common neighbour w closes the triangle {u, v, w}.
//!
//! The degree-based algorithm runs a first phase with k = max(Delta,
//! ceil(log2 n)), r = log* n and E = ceil(k^(1-1/r) / r), skipped when
//! Delta < sqrt(log2 n). Exchanges carry a 2 ceil(log2 n)-bit digest, and the
//! edges whose sessions detect a failure form the next graph. Later phases
//! use r = 2 and E = ceil(C (log2 n)^(1 - gamma/2)) where the current maximum
//! degree is (log2 n)^gamma, until no failed edge is left.
//!
//! The oriented algorithm intersects out-neighbourhoods under an acyclic
//! orientation, so each triangle is seen by exactly one edge, and uses the
//! rewind protocol with E = 2 ceil(log2 n) and r = max(1, ceil(log2 lambda)).

use std::cell::Cell;
use std::collections::BTreeSet;

use ccproto::coins::derive_seed;
use ccproto::protocols::fault::FaultPlan;
use ccproto::protocols::rewind::DEFAULT_BUDGET_FACTOR;
use ccproto::protocols::schedule::log_star;
use ccproto::protocols::{rewind_equality_testing, simple_equality_testing, DomainPolicy, Link, RewindOutcome};
use ccproto::reductions::setint_via_eq;
use ccproto::transcript::Transcript;
use ccproto::SharedCoins;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{triangle, Graph, Triangle};
use crate::network::{ceil_log2, replay_sessions, CongestNetwork, Session};
use crate::orientation::{peel_orientation, Orientation};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CongestConfig {
    /// C in the later-phase E = C (log2 n)^(1 - gamma/2).
    pub c_phase: f64,
    /// B = ceil(log2 n) * c_msg.
    pub c_msg: u32,
    pub max_phases: usize,
}

impl Default for CongestConfig {
    fn default() -> Self {
        CongestConfig {
            c_phase: 4.0,
            c_msg: 1,
            max_phases: 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseStats {
    pub phase: usize,
    pub kind: String,
    pub k: u64,
    pub r: u32,
    pub e: u64,
    pub edges: usize,
    pub failures: usize,
    /// Maximum degree of the failure graph left for the next phase.
    pub residual_max_degree: usize,
    pub rounds: u64,
    pub bits: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleRun {
    pub n: usize,
    pub delta: usize,
    pub triangles: BTreeSet<Triangle>,
    pub rounds: u64,
    pub bits_total: u64,
    pub cap_bits: usize,
    pub max_message_bits: usize,
    pub phases: Vec<PhaseStats>,
    /// No failed edge was left unresolved.
    pub complete: bool,
}

impl TriangleRun {
    pub fn stats_json(&self) -> String {
        #[derive(Serialize)]
        struct Stats<'a> {
            n: usize,
            delta: usize,
            triangles: usize,
            rounds: u64,
            bits_total: u64,
            cap_bits: usize,
            max_message_bits: usize,
            complete: bool,
            phases: &'a [PhaseStats],
        }
        serde_json::to_string_pretty(&Stats {
            n: self.n,
            delta: self.delta,
            triangles: self.triangles.len(),
            rounds: self.rounds,
            bits_total: self.bits_total,
            cap_bits: self.cap_bits,
            max_message_bits: self.max_message_bits,
            complete: self.complete,
            phases: &self.phases,
        })
        .expect("serializable")
    }

    pub fn triangles_csv(&self) -> String {
        let mut s = String::from("a,b,c\n");
        for t in &self.triangles {
            s.push_str(&format!("{},{},{}\n", t[0], t[1], t[2]));
        }
        s
    }
}

#[derive(Clone, Copy, Debug)]
enum Inner {
    Simple { r: u32, e: u64, armor: usize },
    Rewind { r: u32, e: u64 },
}

struct EdgeOutcome {
    common: Vec<u64>,
    failed: bool,
    transcript: Transcript,
}

fn edge_session(a: Vec<u64>, b: Vec<u64>, universe_bits: u32, inner: Inner, seed: u64) -> Result<EdgeOutcome> {
    let failed = Cell::new(false);
    let mut link = match inner {
        Inner::Simple { armor, .. } => Link::armored(derive_seed(seed, 0), armor),
        Inner::Rewind { .. } => Link::new(derive_seed(seed, 0)),
    };
    let mut private = SharedCoins::new(derive_seed(seed, 1));
    let run = setint_via_eq(
        &a,
        &b,
        universe_bits,
        |inst, link| match inner {
            Inner::Simple { r, e, .. } => {
                let run = simple_equality_testing(inst, r, e, DomainPolicy::Relaxed, link)?;
                failed.set(run.aborted);
                Ok(run.verdicts)
            }
            Inner::Rewind { r, e } => {
                let run = rewind_equality_testing(
                    inst,
                    r,
                    e,
                    DEFAULT_BUDGET_FACTOR,
                    DomainPolicy::Relaxed,
                    &FaultPlan::none(),
                    link,
                )?;
                failed.set(run.outcome == RewindOutcome::BudgetExhausted);
                Ok(run.verdicts_bob)
            }
        },
        &mut private,
        &mut link,
    )?;
    Ok(EdgeOutcome {
        common: run.intersection,
        failed: failed.get(),
        transcript: link.transcript,
    })
}

fn without(list: &[usize], x: usize) -> Vec<u64> {
    list.iter().filter(|&&w| w != x).map(|&w| w as u64).collect()
}

struct PhaseResult {
    failed: Vec<(usize, usize)>,
    stats: PhaseStats,
}

/// One round of sessions on `edges`, with per-edge sets from `sets`.
#[allow(clippy::too_many_arguments)]
fn run_phase(
    net: &mut CongestNetwork,
    edges: &[(usize, usize)],
    sets: &[Vec<usize>],
    inner: Inner,
    seed: u64,
    phase: usize,
    found: &mut BTreeSet<Triangle>,
) -> Result<PhaseResult> {
    let ub = ceil_log2(net.graph.n as u64).max(1);
    let mut sessions = Vec::with_capacity(edges.len());
    let mut failed = Vec::new();
    for (idx, &(u, v)) in edges.iter().enumerate() {
        let s = derive_seed(seed, ((phase as u64) << 40) | idx as u64);
        let out = edge_session(without(&sets[u], v), without(&sets[v], u), ub, inner, s)?;
        if out.failed {
            failed.push((u, v));
        } else {
            for w in out.common {
                found.insert(triangle(u, v, w as usize));
            }
        }
        sessions.push(Session::from_transcript(u, v, &out.transcript));
    }
    let replay = replay_sessions(net, &sessions)?;
    let (k, r, e) = match inner {
        Inner::Simple { r, e, .. } => (0, r, e),
        Inner::Rewind { r, e } => (0, r, e),
    };
    Ok(PhaseResult {
        stats: PhaseStats {
            phase,
            kind: String::new(),
            k,
            r,
            e,
            edges: edges.len(),
            failures: failed.len(),
            residual_max_degree: 0,
            rounds: replay.rounds,
            bits: replay.bits,
        },
        failed,
    })
}

/// Phase-one parameters (k, r, E), or None when Delta < sqrt(log2 n).
pub fn phase_one_params(n: usize, delta: usize) -> Option<(u64, u32, u64)> {
    let log_n = (n.max(2) as f64).log2();
    if delta == 0 || (delta as f64) < log_n.sqrt() {
        return None;
    }
    let k = (delta as u64).max(ceil_log2(n as u64) as u64);
    let r = log_star(n as f64).max(1);
    let e = ((k as f64).powf(1.0 - 1.0 / r as f64) / r as f64).ceil().max(1.0) as u64;
    Some((k, r, e))
}

/// Later-phase E for current maximum degree `delta` = (log2 n)^gamma.
pub fn squeeze_e(n: usize, delta: usize, c: f64) -> u64 {
    let log_n = (n.max(4) as f64).log2();
    let gamma = if delta <= 1 { 0.0 } else { (delta as f64).log2() / log_n.log2() };
    (c * log_n.powf(1.0 - gamma / 2.0)).ceil().max(1.0) as u64
}

pub fn enumerate_triangles(g: &Graph, config: &CongestConfig, seed: u64) -> Result<TriangleRun> {
    let mut net = CongestNetwork::new(g.clone(), config.c_msg);
    let armor = 2 * ceil_log2(g.n as u64).max(1) as usize;
    let mut found = BTreeSet::new();
    let mut phases = Vec::new();
    let mut current = g.clone();
    if let Some((k, r, e)) = phase_one_params(g.n, g.max_degree()) {
        let res = run_phase(&mut net, &current.edges(), &current.adj, Inner::Simple { r, e, armor }, seed, 1, &mut found)?;
        current = g.with_edges(&res.failed);
        let mut st = res.stats;
        st.kind = "one".into();
        st.k = k;
        st.residual_max_degree = current.max_degree();
        phases.push(st);
    }
    while current.edge_count() > 0 && phases.len() < config.max_phases {
        let delta = current.max_degree();
        let e = squeeze_e(g.n, delta, config.c_phase);
        let phase = phases.len() + 1;
        let res = run_phase(&mut net, &current.edges(), &current.adj, Inner::Simple { r: 2, e, armor }, seed, phase, &mut found)?;
        current = g.with_edges(&res.failed);
        let mut st = res.stats;
        st.kind = "squeeze".into();
        st.k = delta as u64;
        st.residual_max_degree = current.max_degree();
        phases.push(st);
    }
    Ok(TriangleRun {
        n: g.n,
        delta: g.max_degree(),
        triangles: found,
        rounds: net.round,
        bits_total: net.bits_delivered,
        cap_bits: net.cap_bits,
        max_message_bits: net.max_message_bits,
        phases,
        complete: current.edge_count() == 0,
    })
}

/// Default oriented parameters: E = 2 ceil(log2 n), r = max(1, ceil(log2 lambda')).
pub fn oriented_params(n: usize, max_out: usize) -> (u64, u32) {
    let e = 2 * ceil_log2(n as u64).max(1) as u64;
    (e, ceil_log2(max_out as u64).max(1))
}

pub fn enumerate_triangles_oriented(
    g: &Graph,
    orientation: &Orientation,
    e: Option<u64>,
    r: Option<u32>,
    config: &CongestConfig,
    seed: u64,
) -> Result<TriangleRun> {
    let (e0, r0) = oriented_params(g.n, orientation.max_out_degree());
    let (e, r) = (e.unwrap_or(e0), r.unwrap_or(r0));
    let mut net = CongestNetwork::new(g.clone(), config.c_msg);
    let mut found = BTreeSet::new();
    let res = run_phase(&mut net, &g.edges(), &orientation.out, Inner::Rewind { r, e }, seed, 1, &mut found)?;
    let mut st = res.stats;
    st.kind = "oriented".into();
    st.k = orientation.max_out_degree() as u64;
    st.residual_max_degree = g.with_edges(&res.failed).max_degree();
    Ok(TriangleRun {
        n: g.n,
        delta: g.max_degree(),
        triangles: found,
        rounds: net.round,
        bits_total: net.bits_delivered,
        cap_bits: net.cap_bits,
        max_message_bits: net.max_message_bits,
        complete: res.failed.is_empty(),
        phases: vec![st],
    })
}

/// Peeling with threshold C*lambda, then the oriented algorithm. The peel
/// iterations are added to the round count.
pub fn enumerate_triangles_arboricity(
    g: &Graph,
    lambda: usize,
    c: usize,
    config: &CongestConfig,
    seed: u64,
) -> Result<(Orientation, TriangleRun)> {
    let o = peel_orientation(g, lambda, c)?;
    let mut run = enumerate_triangles_oriented(g, &o, None, None, config, seed)?;
    run.rounds += o.iterations as u64;
    Ok((o, run))
}
