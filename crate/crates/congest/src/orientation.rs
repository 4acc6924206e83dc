//! Peeling orientation: every round, all nodes of residual degree <= C*lambda
//! leave and point their remaining edges outward. Ties inside a round are
//! broken by id, so the orientation is acyclic.

use serde::{Deserialize, Serialize};

use crate::error::{CongestError, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    /// Sorted out-neighbors.
    pub out: Vec<Vec<usize>>,
    pub bound: usize,
    /// Peel round in which each node left (1-based).
    pub level: Vec<usize>,
    pub iterations: usize,
}

impl Orientation {
    pub fn max_out_degree(&self) -> usize {
        self.out.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn points(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    /// Kahn's algorithm over the arcs.
    pub fn is_acyclic(&self) -> bool {
        let n = self.out.len();
        let mut indeg = vec![0usize; n];
        for o in &self.out {
            for &v in o {
                indeg[v] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(u) = stack.pop() {
            seen += 1;
            for &v in &self.out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
        seen == n
    }

    /// Orientation from an explicit arc list (u -> v).
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Self {
        let mut out = vec![Vec::new(); n];
        for &(u, v) in arcs {
            out[u].push(v);
        }
        for o in &mut out {
            o.sort_unstable();
        }
        let bound = out.iter().map(Vec::len).max().unwrap_or(0);
        Orientation {
            out,
            bound,
            level: vec![0; n],
            iterations: 0,
        }
    }
}

/// Peels with threshold C*lambda. One CONGEST round per iteration (nodes
/// announce that they left). A round that removes nobody means the
/// arboricity claim was wrong.
pub fn peel_orientation(g: &Graph, lambda: usize, c: usize) -> Result<Orientation> {
    if c < 3 {
        return Err(CongestError::Input(format!("peeling constant C = {c} must be at least 3")));
    }
    let bound = c * lambda.max(1);
    let mut deg: Vec<usize> = g.adj.iter().map(Vec::len).collect();
    let mut level = vec![0usize; g.n];
    let mut left = g.n;
    let mut it = 0;
    while left > 0 {
        it += 1;
        let peel: Vec<usize> = (0..g.n).filter(|&v| level[v] == 0 && deg[v] <= bound).collect();
        if peel.is_empty() {
            return Err(CongestError::Input(format!(
                "peeling stalled with {left} nodes left; arboricity exceeds {lambda}"
            )));
        }
        for &v in &peel {
            level[v] = it;
        }
        for &v in &peel {
            for &w in &g.adj[v] {
                if level[w] == 0 {
                    deg[w] -= 1;
                }
            }
        }
        left -= peel.len();
    }
    let mut out = vec![Vec::new(); g.n];
    for (u, v) in g.edges() {
        // earlier level points to later; same level points to larger id
        if (level[u], u) < (level[v], v) {
            out[u].push(v);
        } else {
            out[v].push(u);
        }
    }
    for o in &mut out {
        o.sort_unstable();
    }
    Ok(Orientation {
        out,
        bound,
        level,
        iterations: it,
    })
}
