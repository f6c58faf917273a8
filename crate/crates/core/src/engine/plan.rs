use crate::attr::AttributeValue;
use crate::dsl::{CmpOp, EdgeKind, MotifQuery};
use crate::graph::{AttrColumn, PropertyDigraph, VertexIndex};

use super::EngineError;

/// Search order for template vertices: highest constraint degree first (ties
/// by name), then repeatedly the highest-degree vertex linked to one already
/// placed (ties by name).
pub fn plan_order(q: &MotifQuery, _g: &PropertyDigraph) -> Vec<usize> {
    let n = q.size();
    let degree: Vec<usize> = (0..n).map(|v| q.constraint_degree(v)).collect();
    let better = |a: usize, b: usize| {
        degree[a] > degree[b] || (degree[a] == degree[b] && q.vertices()[a] < q.vertices()[b])
    };
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let mut pick: Option<usize> = None;
        for v in (0..n).filter(|&v| !placed[v]) {
            let eligible = order.is_empty() || order.iter().any(|&u| q.linked(u, v));
            if eligible && pick.is_none_or(|p| better(v, p)) {
                pick = Some(v);
            }
        }
        let v = pick.expect("valid motifs are connected");
        placed[v] = true;
        order.push(v);
    }
    order
}

/// Where candidates for a new vertex come from, relative to a bound one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Anchor {
    /// New vertex has an edge into the bound vertex.
    Into(usize),
    /// Bound vertex has an edge into the new vertex.
    From(usize),
    /// Either direction.
    Either(usize),
}

/// Edge requirements between the vertex bound at some depth and an earlier
/// one. `out` means new → earlier.
#[derive(Debug, Clone, Default)]
struct PairCheck {
    depth: usize,
    need_out: bool,
    need_in: bool,
    need_either: bool,
    forbid_out: bool,
    forbid_in: bool,
}

struct Predicate<'g> {
    column: Option<&'g AttrColumn>,
    op: CmpOp,
    value: AttributeValue,
}

struct Step<'g> {
    pairs: Vec<PairCheck>,
    anchors: Vec<Anchor>,
    min_out: usize,
    min_in: usize,
    min_neighbors: usize,
    predicates: Vec<Predicate<'g>>,
}

/// A motif compiled against a host graph: the vertex order plus, for each
/// depth, the checks a new binding must pass.
pub struct SearchPlan<'g> {
    pub(crate) g: &'g PropertyDigraph,
    order: Vec<usize>,
    steps: Vec<Step<'g>>,
}

impl<'g> SearchPlan<'g> {
    pub fn new(q: &MotifQuery, g: &'g PropertyDigraph) -> Result<Self, EngineError> {
        let order = plan_order(q, g);
        let n = q.size();
        let mut depth_of = vec![0; n];
        for (d, &v) in order.iter().enumerate() {
            depth_of[v] = d;
        }
        for p in q.predicates() {
            if let Some(col) = g.vertex_attrs().get(&p.key) {
                if p.op.is_ordering() && !col.ty.is_numeric() {
                    return Err(EngineError::PredicateType {
                        vertex: q.vertices()[p.vertex].clone(),
                        key: p.key.clone(),
                        column: col.ty,
                    });
                }
            }
        }

        let steps = order
            .iter()
            .enumerate()
            .map(|(depth, &v)| {
                let mut pairs = Vec::new();
                let mut anchors = Vec::new();
                for (earlier, &u) in order[..depth].iter().enumerate() {
                    let directed_out = q.has_constraint(v, u, EdgeKind::Directed);
                    let directed_in = q.has_constraint(u, v, EdgeKind::Directed);
                    let undirected = q.has_constraint(v, u, EdgeKind::Undirected);
                    let mut check = PairCheck {
                        depth: earlier,
                        need_out: directed_out,
                        need_in: directed_in,
                        need_either: undirected,
                        forbid_out: q.has_constraint(v, u, EdgeKind::Forbidden),
                        forbid_in: q.has_constraint(u, v, EdgeKind::Forbidden),
                    };
                    if q.induced() && !undirected {
                        check.forbid_out |= !directed_out;
                        check.forbid_in |= !directed_in;
                    }
                    if directed_out {
                        anchors.push(Anchor::Into(earlier));
                    }
                    if directed_in {
                        anchors.push(Anchor::From(earlier));
                    }
                    if undirected {
                        anchors.push(Anchor::Either(earlier));
                    }
                    let c = &check;
                    if c.need_out || c.need_in || c.need_either || c.forbid_out || c.forbid_in {
                        pairs.push(check);
                    }
                }
                let min_out = q
                    .edges()
                    .iter()
                    .filter(|e| e.kind == EdgeKind::Directed && e.src == v)
                    .count();
                let min_in = q
                    .edges()
                    .iter()
                    .filter(|e| e.kind == EdgeKind::Directed && e.dst == v)
                    .count();
                let min_neighbors = (0..n).filter(|&u| q.linked(u, v)).count();
                let predicates = q
                    .predicates()
                    .iter()
                    .filter(|p| p.vertex == v)
                    .map(|p| Predicate {
                        column: g.vertex_attrs().get(&p.key),
                        op: p.op,
                        value: p.value.clone(),
                    })
                    .collect();
                Step {
                    pairs,
                    anchors,
                    min_out,
                    min_in,
                    min_neighbors,
                    predicates,
                }
            })
            .collect();
        Ok(SearchPlan { g, order, steps })
    }

    /// Template vertex bound at each depth.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn depth(&self) -> usize {
        self.order.len()
    }

    /// Degree prefilter and attribute predicates for the vertex at `depth`.
    fn vertex_ok(&self, step: &Step<'_>, h: VertexIndex) -> bool {
        let g = self.g;
        if g.out_degree(h) < step.min_out || g.in_degree(h) < step.min_in {
            return false;
        }
        if step.min_neighbors > 1 && g.out_degree(h) + g.in_degree(h) < step.min_neighbors {
            return false;
        }
        // A vertex without the attribute fails every predicate on it.
        step.predicates.iter().all(|p| {
            p.column
                .and_then(|c| c.get(h as usize))
                .is_some_and(|hv| p.op.eval(hv, &p.value))
        })
    }

    fn pairs_ok(&self, step: &Step<'_>, bound: &[VertexIndex], h: VertexIndex) -> bool {
        let g = self.g;
        step.pairs.iter().all(|c| {
            let other = bound[c.depth];
            let out = g.has_edge(h, other);
            let inc = g.has_edge(other, h);
            !(c.need_out && !out
                || c.need_in && !inc
                || c.need_either && !(out || inc)
                || c.forbid_out && out
                || c.forbid_in && inc)
        })
    }

    /// Calls `f` for every host vertex that can extend `bound` at the next
    /// depth. After the first depth, candidates come from the smallest
    /// adjacency list of a bound constraint-neighbour.
    pub(crate) fn for_each_candidate(&self, bound: &[VertexIndex], mut f: impl FnMut(VertexIndex) -> bool) {
        let depth = bound.len();
        let step = &self.steps[depth];
        let g = self.g;
        let mut accept = |h: VertexIndex| -> bool {
            if bound.contains(&h) || !self.vertex_ok(step, h) || !self.pairs_ok(step, bound, h) {
                return true;
            }
            f(h)
        };
        if depth == 0 {
            for h in g.vertices() {
                if !accept(h) {
                    return;
                }
            }
            return;
        }
        let size = |a: &Anchor| match *a {
            Anchor::Into(d) => g.in_degree(bound[d]),
            Anchor::From(d) => g.out_degree(bound[d]),
            Anchor::Either(d) => g.in_degree(bound[d]) + g.out_degree(bound[d]),
        };
        let anchor = *step
            .anchors
            .iter()
            .min_by_key(|a| size(a))
            .expect("every vertex after the first is linked to an earlier one");
        match anchor {
            Anchor::Into(d) => {
                for &h in g.in_neighbors(bound[d]) {
                    if !accept(h) {
                        return;
                    }
                }
            }
            Anchor::From(d) => {
                for &h in g.out_neighbors(bound[d]) {
                    if !accept(h) {
                        return;
                    }
                }
            }
            Anchor::Either(d) => {
                let outs = g.out_neighbors(bound[d]);
                for &h in outs {
                    if !accept(h) {
                        return;
                    }
                }
                for &h in g.in_neighbors(bound[d]) {
                    if outs.binary_search(&h).is_err() && !accept(h) {
                        return;
                    }
                }
            }
        }
    }

    /// Reorders a depth-ordered assignment into template-vertex order.
    pub fn to_template_order(&self, bound: &[VertexIndex]) -> Vec<VertexIndex> {
        let mut out = vec![0; bound.len()];
        for (d, &h) in bound.iter().enumerate() {
            out[self.order[d]] = h;
        }
        out
    }
}
