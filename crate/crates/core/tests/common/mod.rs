//! Random fixtures and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use motifkit::dsl::{vertex_name, AttributePredicate, CmpOp, EdgeConstraint, EdgeKind};
use motifkit::graph::GraphBuilder;
use motifkit::rng::MotifRng;
use motifkit::{AttributeValue, MotifQuery, PropertyDigraph, VertexIndex};

/// Host on `2..=max_n` vertices with up to `max_m` edges. Vertices carry an
/// integer `w` (sometimes missing) and a string `kind`.
pub fn random_host(rng: &mut MotifRng, max_n: usize, max_m: usize) -> PropertyDigraph {
    let n = 2 + rng.below(max_n as u64 - 1) as usize;
    let mut b = GraphBuilder::new();
    for i in 0..n {
        let id = format!("v{i}");
        b.add_vertex(&id).unwrap();
        if rng.unit() < 0.9 {
            b.set_vertex_attr(&id, "w", AttributeValue::Int(rng.below(4) as i64)).unwrap();
        }
        let kind = if rng.below(2) == 0 { "a" } else { "b" };
        b.set_vertex_attr(&id, "kind", AttributeValue::Str(kind.into())).unwrap();
    }
    let m = rng.below(max_m.min(n * (n - 1)) as u64 + 1) as usize;
    for _ in 0..m {
        let s = rng.below(n as u64);
        let d = rng.below(n as u64);
        if s != d {
            b.add_edge(&format!("v{s}"), &format!("v{d}")).unwrap();
        }
    }
    b.build().unwrap()
}

fn random_predicate(rng: &mut MotifRng, n: usize) -> AttributePredicate {
    let vertex = rng.below(n as u64) as usize;
    if rng.below(2) == 0 {
        let ops = [CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge];
        AttributePredicate {
            vertex,
            key: "w".into(),
            op: ops[rng.below(6) as usize],
            value: AttributeValue::Int(rng.below(4) as i64),
        }
    } else {
        AttributePredicate {
            vertex,
            key: "kind".into(),
            op: if rng.below(2) == 0 { CmpOp::Eq } else { CmpOp::Ne },
            value: AttributeValue::Str(if rng.below(2) == 0 { "a" } else { "b" }.into()),
        }
    }
}

/// Connected motif on `2..=max_n` vertices mixing every constraint kind.
/// `predicates` and `induced` enable those variants.
pub fn random_motif(rng: &mut MotifRng, max_n: usize, predicates: bool, induced: bool) -> MotifQuery {
    loop {
        let n = 2 + rng.below(max_n as u64 - 1) as usize;
        let mut edges = Vec::new();
        for v in 1..n {
            let u = rng.below(v as u64) as usize;
            let (s, d) = if rng.below(2) == 0 { (u, v) } else { (v, u) };
            let kind = if rng.unit() < 0.3 { EdgeKind::Undirected } else { EdgeKind::Directed };
            edges.push(EdgeConstraint::new(s, d, kind));
        }
        for _ in 0..rng.below(3) {
            let s = rng.below(n as u64) as usize;
            let d = rng.below(n as u64) as usize;
            let kind = [EdgeKind::Directed, EdgeKind::Undirected, EdgeKind::Forbidden][rng.below(3) as usize];
            edges.push(EdgeConstraint::new(s, d, kind));
        }
        let mut preds = Vec::new();
        if predicates {
            for _ in 0..rng.below(3) {
                preds.push(random_predicate(rng, n));
            }
        }
        let induced = induced && rng.unit() < 0.3;
        let vertices = (0..n).map(vertex_name).collect();
        if let Ok(q) = MotifQuery::new(vertices, edges, preds, induced) {
            return q;
        }
    }
}

fn pair_ok(q: &MotifQuery, g: &PropertyDigraph, m: &[VertexIndex], a: usize, b: usize) -> bool {
    let (ha, hb) = (m[a], m[b]);
    let mut required_ab = false;
    let mut undirected = false;
    for e in q.edges() {
        let (s, d) = (e.src, e.dst);
        let ours = (s, d) == (a, b);
        match e.kind {
            EdgeKind::Directed if ours => {
                required_ab = true;
                if !g.has_edge(ha, hb) {
                    return false;
                }
            }
            EdgeKind::Forbidden if ours && g.has_edge(ha, hb) => return false,
            EdgeKind::Undirected if ours || (d, s) == (a, b) => {
                undirected = true;
                if !g.has_edge(ha, hb) && !g.has_edge(hb, ha) {
                    return false;
                }
            }
            _ => {}
        }
    }
    // Induced: every host edge between matched vertices must be demanded by a
    // constraint, and an undirected constraint accepts either direction.
    !(q.induced() && !undirected && !required_ab && g.has_edge(ha, hb))
}

fn predicates_ok(q: &MotifQuery, g: &PropertyDigraph, m: &[VertexIndex]) -> bool {
    q.predicates().iter().all(|p| {
        g.vertex_attr(m[p.vertex], &p.key)
            .is_some_and(|host| p.op.eval(host, &p.value))
    })
}

/// Every injective map from template vertices to host vertices that
/// satisfies the motif, by exhaustive enumeration.
pub fn oracle_mappings(q: &MotifQuery, g: &PropertyDigraph) -> Vec<Vec<VertexIndex>> {
    let n = q.size();
    let hosts = g.vertex_count() as VertexIndex;
    let mut out = Vec::new();
    let mut m: Vec<VertexIndex> = Vec::with_capacity(n);
    fn rec(
        q: &MotifQuery,
        g: &PropertyDigraph,
        hosts: VertexIndex,
        m: &mut Vec<VertexIndex>,
        out: &mut Vec<Vec<VertexIndex>>,
    ) {
        if m.len() == q.size() {
            let n = q.size();
            let edges_ok = (0..n).all(|a| (0..n).all(|b| a == b || pair_ok(q, g, m, a, b)));
            if edges_ok && predicates_ok(q, g, m) {
                out.push(m.clone());
            }
            return;
        }
        for h in 0..hosts {
            if !m.contains(&h) {
                m.push(h);
                rec(q, g, hosts, m, out);
                m.pop();
            }
        }
    }
    rec(q, g, hosts, &mut m, &mut out);
    out.sort();
    out
}

pub fn oracle_count(q: &MotifQuery, g: &PropertyDigraph) -> u64 {
    oracle_mappings(q, g).len() as u64
}

/// The motif with template vertex `i` renamed to position `perm[i]`.
pub fn relabel(q: &MotifQuery, perm: &[usize]) -> MotifQuery {
    let n = q.size();
    let mut vertices = vec![String::new(); n];
    for (i, &p) in perm.iter().enumerate() {
        vertices[p] = q.vertices()[i].clone();
    }
    let edges = q
        .edges()
        .iter()
        .map(|e| EdgeConstraint::new(perm[e.src], perm[e.dst], e.kind))
        .collect();
    let preds = q
        .predicates()
        .iter()
        .map(|p| AttributePredicate {
            vertex: perm[p.vertex],
            ..p.clone()
        })
        .collect();
    MotifQuery::new(vertices, edges, preds, q.induced()).unwrap()
}

type ConstraintSet = (BTreeSet<(usize, usize, u8)>, BTreeSet<(usize, String, String, String)>);

fn constraint_set(q: &MotifQuery, perm: &[usize]) -> ConstraintSet {
    let edges = q
        .edges()
        .iter()
        .map(|e| {
            let (s, d) = (perm[e.src], perm[e.dst]);
            match e.kind {
                EdgeKind::Directed => (s, d, 0),
                EdgeKind::Forbidden => (s, d, 1),
                EdgeKind::Undirected => (s.min(d), s.max(d), 2),
            }
        })
        .collect();
    let preds = q
        .predicates()
        .iter()
        .map(|p| (perm[p.vertex], p.key.clone(), p.op.symbol().to_string(), p.value.to_csv_field() + p.value.attr_type_name()))
        .collect();
    (edges, preds)
}

trait TypeName {
    fn attr_type_name(&self) -> &'static str;
}

impl TypeName for AttributeValue {
    fn attr_type_name(&self) -> &'static str {
        match self {
            AttributeValue::Bool(_) => ":b",
            AttributeValue::Int(_) => ":i",
            AttributeValue::Float(_) => ":f",
            AttributeValue::Str(_) => ":s",
        }
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Whether some renaming of `a`'s vertices gives exactly `b`'s constraints.
pub fn oracle_isomorphic(a: &MotifQuery, b: &MotifQuery) -> bool {
    if a.size() != b.size() || a.induced() != b.induced() {
        return false;
    }
    let identity: Vec<usize> = (0..b.size()).collect();
    let target = constraint_set(b, &identity);
    permutations(a.size()).iter().any(|p| constraint_set(a, p) == target)
}

/// Permutations preserving the constraint set; predicates optional.
pub fn oracle_automorphisms(q: &MotifQuery, with_predicates: bool) -> u64 {
    let identity: Vec<usize> = (0..q.size()).collect();
    let base = constraint_set(q, &identity);
    permutations(q.size())
        .iter()
        .filter(|p| {
            let c = constraint_set(q, p);
            c.0 == base.0 && (!with_predicates || c.1 == base.1)
        })
        .count() as u64
}
