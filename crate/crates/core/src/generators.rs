//! Seeded random digraphs and planted-motif fixtures.

use std::collections::HashSet;

use crate::graph::{GraphBuilder, PropertyDigraph};
use crate::rng::MotifRng;

/// G(n, p) digraph on vertices `0..n`: every ordered pair is an edge with
/// probability `p`, pairs visited in row-major order.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> PropertyDigraph {
    let mut b = GraphBuilder::new();
    add_erdos_renyi(&mut b, "", n, p, &mut MotifRng::new(seed));
    b.build().expect("generated graph is valid")
}

fn add_erdos_renyi(b: &mut GraphBuilder, prefix: &str, n: usize, p: f64, rng: &mut MotifRng) {
    for i in 0..n {
        b.add_vertex(&format!("{prefix}{i}")).expect("non-empty id");
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.unit() < p {
                b.add_edge(&format!("{prefix}{i}"), &format!("{prefix}{j}"))
                    .expect("distinct endpoints");
            }
        }
    }
}

/// Uniform digraph with exactly `m` edges on vertices `0..n`.
pub fn random_digraph(n: usize, m: usize, seed: u64) -> PropertyDigraph {
    assert!(n >= 2 && m <= n * (n - 1), "too many edges for {n} vertices");
    let mut rng = MotifRng::new(seed);
    let mut seen = HashSet::with_capacity(m);
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.add_vertex(&i.to_string()).expect("non-empty id");
    }
    while seen.len() < m {
        let s = rng.below(n as u64);
        let d = rng.below(n as u64);
        if s != d && seen.insert((s, d)) {
            b.add_edge(&s.to_string(), &d.to_string()).expect("distinct endpoints");
        }
    }
    b.build().expect("generated graph is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlantedMotif {
    /// a→b, b→c, a→c
    FeedForwardTriangle,
    /// a→b, b→c, c→a
    DirectedCycle,
}

/// An Erdős–Rényi background on vertices `bg0..` plus `copies` disjoint
/// copies of a three-vertex motif on fresh vertices `m{k}_{0,1,2}`.
pub fn planted_fixture(
    motif: PlantedMotif,
    copies: usize,
    background_n: usize,
    background_p: f64,
    seed: u64,
) -> PropertyDigraph {
    let mut rng = MotifRng::new(seed);
    let mut b = GraphBuilder::new();
    add_erdos_renyi(&mut b, "bg", background_n, background_p, &mut rng);
    for k in 0..copies {
        let v = |j: usize| format!("m{k}_{j}");
        let edges: [(usize, usize); 3] = match motif {
            PlantedMotif::FeedForwardTriangle => [(0, 1), (1, 2), (0, 2)],
            PlantedMotif::DirectedCycle => [(0, 1), (1, 2), (2, 0)],
        };
        for (s, d) in edges {
            b.add_edge(&v(s), &v(d)).expect("distinct endpoints");
        }
    }
    b.build().expect("generated graph is valid")
}
