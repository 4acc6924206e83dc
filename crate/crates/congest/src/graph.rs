//! Undirected simple graphs, the G(n, p) generator, the edge-list loader and
//! a brute-force triangle oracle.

use std::collections::BTreeSet;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CongestError, Result};

pub type Triangle = [usize; 3];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub n: usize,
    /// Sorted neighbor lists.
    pub adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, adj: vec![Vec::new(); n] }
    }

    /// Builds from an edge list; self-loops are rejected, duplicates merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(CongestError::Input(format!("edge ({u}, {v}) outside 0..{n}")));
            }
            if u == v {
                return Err(CongestError::Input(format!("self-loop at {u}")));
            }
            g.adj[u].push(v);
            g.adj[v].push(u);
        }
        for a in &mut g.adj {
            a.sort_unstable();
            a.dedup();
        }
        Ok(g)
    }

    pub fn gnp(n: usize, p: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges).expect("generated edges are valid")
    }

    /// "u v" per line, 0-indexed; blank lines and lines starting with '#'
    /// are skipped. n is one more than the largest id unless given.
    pub fn parse_edge_list(text: &str, n: Option<usize>) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace().map(|t| t.parse::<usize>());
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
                _ => return Err(CongestError::Input(format!("line {}: expected \"u v\"", lineno + 1))),
            }
        }
        let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
        Graph::from_edges(n, &edges)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CongestError::Input(format!("{}: {e}", path.display())))?;
        Graph::parse_edge_list(&text, None)
    }

    pub fn to_edge_list(&self) -> String {
        self.edges().iter().map(|(u, v)| format!("{u} {v}\n")).collect()
    }

    /// Edges with u < v, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Subgraph on the same vertices keeping only `edges`.
    pub fn with_edges(&self, edges: &[(usize, usize)]) -> Self {
        Graph::from_edges(self.n, edges).expect("edges of a valid graph")
    }
}

/// Every triple u < v < w with all three edges, by direct adjacency checks.
pub fn brute_force_triangles(g: &Graph) -> BTreeSet<Triangle> {
    let mut m = vec![false; g.n * g.n];
    for (u, v) in g.edges() {
        m[u * g.n + v] = true;
        m[v * g.n + u] = true;
    }
    let mut out = BTreeSet::new();
    for u in 0..g.n {
        for v in u + 1..g.n {
            if !m[u * g.n + v] {
                continue;
            }
            for w in v + 1..g.n {
                if m[u * g.n + w] && m[v * g.n + w] {
                    out.insert([u, v, w]);
                }
            }
        }
    }
    out
}

pub fn triangle(a: usize, b: usize, c: usize) -> Triangle {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}
