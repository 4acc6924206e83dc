use std::collections::BTreeSet;

use ccproto::{BitString, Direction, Transcript};
use ccproto_congest::{
    enumerate_triangles, enumerate_triangles_arboricity, enumerate_triangles_oriented, message_cap, peel_orientation,
    replay_sessions, CongestConfig, CongestError, CongestNetwork, Envelope, Graph, Orientation, Session,
};
use proptest::prelude::*;

/// Independent oracle: neighbor-set intersection over each edge.
fn oracle(g: &Graph) -> BTreeSet<[usize; 3]> {
    let sets: Vec<BTreeSet<usize>> = g.adj.iter().map(|a| a.iter().copied().collect()).collect();
    let mut out = BTreeSet::new();
    for (u, v) in g.edges() {
        for &w in sets[u].intersection(&sets[v]) {
            let mut t = [u, v, w];
            t.sort_unstable();
            out.insert(t);
        }
    }
    out
}

fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect();
    Graph::from_edges(a + b, &edges).unwrap()
}

fn cycle(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

fn complete(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::from_edges(n, &edges).unwrap()
}

#[test]
fn k3_has_one_triangle() {
    let run = enumerate_triangles(&complete(3), &CongestConfig::default(), 1).unwrap();
    assert_eq!(run.triangles, BTreeSet::from([[0, 1, 2]]));
    assert!(run.complete);
}

#[test]
fn k6_has_twenty() {
    let run = enumerate_triangles(&complete(6), &CongestConfig::default(), 2).unwrap();
    assert_eq!(run.triangles.len(), 20);
}

#[test]
fn bipartite_graphs_have_none() {
    let run = enumerate_triangles(&complete_bipartite(6, 7), &CongestConfig::default(), 3).unwrap();
    assert!(run.triangles.is_empty());
    assert!(run.max_message_bits <= run.cap_bits);
}

#[test]
fn forest_oriented_has_none() {
    let edges: Vec<(usize, usize)> = (1..60).map(|v| ((v - 1) / 3, v)).collect();
    let g = Graph::from_edges(60, &edges).unwrap();
    let (o, run) = enumerate_triangles_arboricity(&g, 1, 3, &CongestConfig::default(), 4).unwrap();
    assert!(o.is_acyclic());
    assert!(run.triangles.is_empty());
}

#[test]
fn single_directed_triangle() {
    let g = complete(3);
    let o = Orientation::from_arcs(3, &[(0, 1), (1, 2), (0, 2)]);
    let run = enumerate_triangles_oriented(&g, &o, None, None, &CongestConfig::default(), 5).unwrap();
    assert_eq!(run.triangles, BTreeSet::from([[0, 1, 2]]));
}

#[test]
fn peeling_trees_and_cycles() {
    let edges: Vec<(usize, usize)> = (1..100).map(|v| (v / 2, v)).collect();
    let tree = Graph::from_edges(100, &edges).unwrap();
    let o = peel_orientation(&tree, 1, 3).unwrap();
    assert!(o.is_acyclic());
    assert!(o.max_out_degree() <= 3);
    assert_eq!(o.out.iter().map(Vec::len).sum::<usize>(), 99);
    // a cycle has arboricity 2; every node has degree 2 <= 3, so one round
    let o = peel_orientation(&cycle(50), 1, 3).unwrap();
    assert_eq!(o.iterations, 1);
    assert!(o.is_acyclic());
    assert!(peel_orientation(&cycle(5), 1, 2).is_err());
}

#[test]
fn wrong_arboricity_claim_is_an_error() {
    assert!(peel_orientation(&complete(12), 1, 3).is_err());
}

#[test]
fn rounds_grow_with_degree() {
    let cfg = CongestConfig::default();
    let sparse = enumerate_triangles(&Graph::gnp(256, 0.02, 7), &cfg, 7).unwrap();
    let dense = enumerate_triangles(&Graph::gnp(256, 0.2, 7), &cfg, 7).unwrap();
    assert!(dense.rounds > sparse.rounds, "{} vs {}", dense.rounds, sparse.rounds);
}

#[test]
fn network_enforces_cap_edges_and_duplicates() {
    let g = complete(4);
    let mut net = CongestNetwork::new(g, 1);
    assert_eq!(net.cap_bits, message_cap(4, 1));
    assert_eq!(net.cap_bits, 2);
    let env = |from, to, n| Envelope {
        from,
        to,
        payload: BitString::zeros(n),
    };
    assert!(matches!(net.run_round(vec![env(0, 1, 3)]), Err(CongestError::Oversize { .. })));
    assert!(matches!(net.run_round(vec![env(0, 1, 1), env(0, 1, 1)]), Err(CongestError::Duplicate(0, 1))));
    let mut path = CongestNetwork::new(Graph::from_edges(3, &[(0, 1)]).unwrap(), 1);
    assert!(matches!(path.run_round(vec![env(0, 2, 1)]), Err(CongestError::NoEdge(0, 2))));
    let inbox = net.run_round(vec![env(0, 1, 2), env(1, 0, 1)]).unwrap();
    assert_eq!(inbox[1].len(), 1);
    assert_eq!(net.round, 1);
}

#[test]
fn replay_takes_one_chunk_per_round() {
    let mut t = Transcript::new();
    t.record(Direction::AtoB, "a", BitString::zeros(10));
    t.record(Direction::BtoA, "b", BitString::zeros(3));
    t.record(Direction::BtoA, "c", BitString::zeros(2));
    let s = Session::from_transcript(0, 1, &t);
    let mut net = CongestNetwork::new(complete(4), 2);
    // cap 4: 10 bits take 3 rounds, the merged 5-bit reply 2 more
    assert_eq!(net.cap_bits, 4);
    assert_eq!(s.rounds_needed(4), 5);
    let stats = replay_sessions(&mut net, &[s]).unwrap();
    assert_eq!(stats.rounds, 5);
    assert_eq!(stats.bits, 15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_graphs_match_the_oracle(n in 3usize..70, p in 0.0f64..0.4, seed in any::<u64>()) {
        let g = Graph::gnp(n, p, seed);
        let run = enumerate_triangles(&g, &CongestConfig::default(), seed).unwrap();
        prop_assert_eq!(&run.triangles, &oracle(&g));
        prop_assert!(run.max_message_bits <= run.cap_bits);
        let (o, run) = enumerate_triangles_arboricity(&g, g.max_degree().max(1), 3, &CongestConfig::default(), seed)
            .unwrap();
        prop_assert!(o.is_acyclic());
        prop_assert_eq!(run.triangles, oracle(&g));
    }

    #[test]
    fn edge_list_round_trip(n in 2usize..40, p in 0.0f64..0.5, seed in any::<u64>()) {
        let g = Graph::gnp(n, p, seed);
        let back = Graph::parse_edge_list(&g.to_edge_list(), Some(n)).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
    }
}
