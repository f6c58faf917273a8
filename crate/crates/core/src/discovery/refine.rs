use std::collections::{BTreeMap, HashSet};

use crate::attr::AttributeValue;
use crate::dsl::{
    canonical_form, vertex_name, AttributePredicate, CanonicalLabel, CmpOp, EdgeConstraint, EdgeKind,
    MotifQuery, MAX_MOTIF_SIZE,
};
use crate::engine::{enumerate_monomorphisms, SearchOptions};
use crate::graph::PropertyDigraph;

use super::{CandidateMotif, DiscoveryConfig, RefinementKind};

fn candidate(query: MotifQuery, parent: Option<&CandidateMotif>, kind: RefinementKind) -> CandidateMotif {
    CandidateMotif {
        label: canonical_form(&query),
        query,
        stats: None,
        parent: parent.map(|p| p.label.clone()),
        round: parent.map_or(0, |p| p.round + 1),
        refinement_kind: kind,
    }
}

/// All connected undirected motifs on `size` vertices, one per isomorphism
/// class. Built by attaching a new vertex to every non-empty subset of the
/// vertices of each smaller class: every connected graph has a vertex whose
/// removal leaves it connected, so this reaches every class.
pub fn seed_candidates(size: usize) -> Vec<CandidateMotif> {
    assert!((2..=MAX_MOTIF_SIZE).contains(&size), "seed size out of range");
    let edge = EdgeConstraint::new(0, 1, EdgeKind::Undirected);
    let mut level = vec![MotifQuery::new(vec![vertex_name(0), vertex_name(1)], vec![edge], vec![], false)
        .expect("single edge is valid")];
    for n in 2..size {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for q in &level {
            for subset in 1u32..(1 << n) {
                let mut edges = q.edges().to_vec();
                edges.extend(
                    (0..n)
                        .filter(|v| subset & (1 << v) != 0)
                        .map(|v| EdgeConstraint::new(v, n, EdgeKind::Undirected)),
                );
                let vertices = (0..=n).map(vertex_name).collect();
                let child = MotifQuery::new(vertices, edges, vec![], false).expect("connected by construction");
                if seen.insert(canonical_form(&child)) {
                    next.push(child);
                }
            }
        }
        level = next;
    }
    let mut out: Vec<CandidateMotif> = level
        .into_iter()
        .map(|q| candidate(q, None, RefinementKind::Seed))
        .collect();
    out.sort_by(|a, b| {
        a.query
            .structural_edge_count()
            .cmp(&b.query.structural_edge_count())
            .then_with(|| a.label.cmp(&b.label))
    });
    out
}

fn rebuild(q: &MotifQuery, vertices: Vec<String>, edges: Vec<EdgeConstraint>, predicates: Vec<AttributePredicate>) -> Option<MotifQuery> {
    MotifQuery::new(vertices, edges, predicates, q.induced()).ok()
}

fn fresh_name(q: &MotifQuery) -> String {
    (0..26)
        .map(vertex_name)
        .find(|n| q.vertex_index(n).is_none())
        .expect("motifs have at most 8 vertices")
}

/// Children of `c`, each one refinement step away: orienting one undirected
/// constraint, adding one edge constraint (between an unlinked pair, as the
/// reverse of a lone directed edge, or to a new vertex), or adding one
/// `V.key = value` predicate for a value seen at V's matched host vertices.
/// Children are deduplicated by canonical label among themselves and against
/// the parent.
pub fn refine(c: &CandidateMotif, cfg: &DiscoveryConfig, g: &PropertyDigraph) -> Vec<CandidateMotif> {
    let q = &c.query;
    let n = q.size();
    let vertices = q.vertices().to_vec();
    let preds = q.predicates().to_vec();
    let mut out = Vec::new();
    let mut seen: HashSet<CanonicalLabel> = HashSet::from([c.label.clone()]);
    let mut push = |child: Option<MotifQuery>, kind: RefinementKind, out: &mut Vec<CandidateMotif>| {
        if let Some(child) = child {
            let cand = candidate(child, Some(c), kind);
            if seen.insert(cand.label.clone()) {
                out.push(cand);
            }
        }
    };

    for (i, e) in q.edges().iter().enumerate() {
        if e.kind != EdgeKind::Undirected {
            continue;
        }
        for (s, d) in [(e.src, e.dst), (e.dst, e.src)] {
            let mut edges = q.edges().to_vec();
            edges[i] = EdgeConstraint::new(s, d, EdgeKind::Directed);
            push(rebuild(q, vertices.clone(), edges, preds.clone()), RefinementKind::OrientEdge, &mut out);
        }
    }

    let directed_only = !q.has_undirected();
    let with_edge = |extra: EdgeConstraint| {
        let mut edges = q.edges().to_vec();
        edges.push(extra);
        rebuild(q, vertices.clone(), edges, preds.clone())
    };
    for a in 0..n {
        for b in a + 1..n {
            let ab = q.has_constraint(a, b, EdgeKind::Directed);
            let ba = q.has_constraint(b, a, EdgeKind::Directed);
            if !q.linked(a, b) {
                if directed_only {
                    push(with_edge(EdgeConstraint::new(a, b, EdgeKind::Directed)), RefinementKind::AddEdge, &mut out);
                    push(with_edge(EdgeConstraint::new(b, a, EdgeKind::Directed)), RefinementKind::AddEdge, &mut out);
                } else {
                    push(with_edge(EdgeConstraint::new(a, b, EdgeKind::Undirected)), RefinementKind::AddEdge, &mut out);
                }
            } else if directed_only && ab != ba {
                let (s, d) = if ab { (b, a) } else { (a, b) };
                push(with_edge(EdgeConstraint::new(s, d, EdgeKind::Directed)), RefinementKind::AddEdge, &mut out);
            }
        }
    }
    if n < cfg.size_max {
        let mut grown = vertices.clone();
        grown.push(fresh_name(q));
        let attach = |s: usize, d: usize, kind: EdgeKind| {
            let mut edges = q.edges().to_vec();
            edges.push(EdgeConstraint::new(s, d, kind));
            rebuild(q, grown.clone(), edges, preds.clone())
        };
        for v in 0..n {
            if directed_only {
                push(attach(v, n, EdgeKind::Directed), RefinementKind::AddEdge, &mut out);
                push(attach(n, v, EdgeKind::Directed), RefinementKind::AddEdge, &mut out);
            } else {
                push(attach(v, n, EdgeKind::Undirected), RefinementKind::AddEdge, &mut out);
            }
        }
    }

    if !cfg.attribute_keys.is_empty() {
        let opts = SearchOptions {
            workers: 1,
            timeout: cfg.motif_timeout,
        };
        if let Ok(found) = enumerate_monomorphisms(q, g, Some(cfg.attribute_sample_limit), &opts) {
            for v in 0..n {
                for key in &cfg.attribute_keys {
                    if preds.iter().any(|p| p.vertex == v && &p.key == key) {
                        continue;
                    }
                    for value in top_values(g, &found.mappings, v, key, cfg.attribute_values_per_key) {
                        let mut p = preds.clone();
                        p.push(AttributePredicate {
                            vertex: v,
                            key: key.clone(),
                            op: CmpOp::Eq,
                            value,
                        });
                        push(rebuild(q, vertices.clone(), q.edges().to_vec(), p), RefinementKind::AddAttribute, &mut out);
                    }
                }
            }
        }
    }
    out
}

/// The `limit` most frequent values of `key` at position `v` of the
/// mappings, ties broken by the value's text.
fn top_values(
    g: &PropertyDigraph,
    mappings: &[Vec<crate::graph::VertexIndex>],
    v: usize,
    key: &str,
    limit: usize,
) -> Vec<AttributeValue> {
    let mut freq: BTreeMap<String, (usize, AttributeValue)> = BTreeMap::new();
    for m in mappings {
        if let Some(val) = g.vertex_attr(m[v], key) {
            freq.entry(val.to_csv_field())
                .or_insert_with(|| (0, val.clone()))
                .0 += 1;
        }
    }
    let mut ranked: Vec<(String, usize, AttributeValue)> =
        freq.into_iter().map(|(k, (c, val))| (k, c, val)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.into_iter().take(limit).map(|(_, _, val)| val).collect()
}
