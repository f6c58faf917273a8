//! Parallel subgraph-monomorphism search over a pool of partial mappings.
//!
//! A [`SearchTask`] is a partial injective assignment of template vertices
//! (in [`plan_order`]) to host vertices in which every constraint among the
//! bound vertices already holds. Expanding a task binds the next template
//! vertex in every valid way. The roots (first binding) and their children
//! form the shared pool; from depth two on, a worker finishes its task
//! depth-first so the pool never grows beyond roughly one task per host edge.
//! Counts are accumulated per worker and summed at the end, so the result
//! does not depend on the number of workers or on scheduling.

mod plan;

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::attr::AttrType;
use crate::dsl::MotifQuery;
use crate::graph::{PropertyDigraph, VertexIndex};

pub use plan::{plan_order, SearchPlan};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("search exceeded its {budget:?} budget after {partial_count} matches")]
    Timeout { budget: Duration, partial_count: u64 },
    #[error("ordering predicate on {vertex}.{key}, but host column is {column}")]
    PredicateType {
        vertex: String,
        key: String,
        column: AttrType,
    },
    #[error("worker count must be positive")]
    NoWorkers,
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub workers: usize,
    pub timeout: Option<Duration>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            workers: 1,
            timeout: None,
        }
    }
}

impl SearchOptions {
    pub fn with_workers(workers: usize) -> Self {
        SearchOptions {
            workers,
            ..Self::default()
        }
    }
}

/// Outcome of a search. `mappings` is empty for counting calls; for
/// enumeration each mapping lists host vertices in template-vertex order and
/// the list is sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct MatchResult {
    pub count: u64,
    pub truncated: bool,
    #[serde(skip)]
    pub mappings: Vec<Vec<VertexIndex>>,
}

/// A partial assignment, listed in search order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchTask {
    pub assignment: Vec<VertexIndex>,
}

impl SearchTask {
    pub fn root() -> Self {
        SearchTask {
            assignment: Vec::new(),
        }
    }

    /// Position in the search order of the next template vertex to bind.
    pub fn next_index(&self) -> usize {
        self.assignment.len()
    }

    /// `(template vertex, host vertex)` pairs bound so far.
    pub fn bindings(&self, plan: &SearchPlan<'_>) -> Vec<(usize, VertexIndex)> {
        plan.order()
            .iter()
            .copied()
            .zip(self.assignment.iter().copied())
            .collect()
    }
}

/// All valid one-step extensions of an incomplete task.
pub fn expand_task(task: &SearchTask, plan: &SearchPlan<'_>) -> Vec<SearchTask> {
    assert!(task.next_index() < plan.depth(), "task is already complete");
    let mut children = Vec::new();
    plan.for_each_candidate(&task.assignment, |h| {
        let mut assignment = task.assignment.clone();
        assignment.push(h);
        children.push(SearchTask { assignment });
        true
    });
    children
}

struct Control {
    stop: AtomicBool,
    deadline: Option<Instant>,
}

impl Control {
    fn new(opts: &SearchOptions) -> Self {
        Control {
            stop: AtomicBool::new(false),
            deadline: opts.timeout.map(|t| Instant::now() + t),
        }
    }

    fn stopped(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }

    fn poll(&self, ticks: &mut u32) -> bool {
        *ticks = ticks.wrapping_add(1);
        if *ticks % 1024 == 1 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.stop.store(true, Ordering::Relaxed);
                }
            }
        }
        self.stopped()
    }
}

/// Depth-first completion of `bound`. `emit` returns false to stop.
fn complete(
    plan: &SearchPlan<'_>,
    bound: &mut Vec<VertexIndex>,
    ctl: &Control,
    ticks: &mut u32,
    emit: &mut dyn FnMut(&[VertexIndex]) -> bool,
) -> bool {
    if bound.len() == plan.depth() {
        return emit(bound);
    }
    if ctl.poll(ticks) {
        return false;
    }
    let mut keep_going = true;
    let mut next = Vec::new();
    plan.for_each_candidate(bound, |h| {
        next.push(h);
        true
    });
    for h in next {
        bound.push(h);
        keep_going = complete(plan, bound, ctl, ticks, emit);
        bound.pop();
        if !keep_going {
            break;
        }
    }
    keep_going
}

fn roots(plan: &SearchPlan<'_>) -> Vec<VertexIndex> {
    expand_task(&SearchTask::root(), plan)
        .into_iter()
        .map(|t| t.assignment[0])
        .collect()
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, EngineError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| EngineError::Pool(e.to_string()))
}

fn count_root(plan: &SearchPlan<'_>, root: VertexIndex, ctl: &Control) -> u64 {
    let mut count = 0u64;
    let mut ticks = 0;
    let mut bound = vec![root];
    complete(plan, &mut bound, ctl, &mut ticks, &mut |_| {
        count += 1;
        true
    });
    count
}

fn count_task(plan: &SearchPlan<'_>, task: SearchTask, ctl: &Control) -> u64 {
    let mut count = 0u64;
    let mut ticks = 0;
    let mut bound = task.assignment;
    complete(plan, &mut bound, ctl, &mut ticks, &mut |_| {
        count += 1;
        true
    });
    count
}

/// Counts injective mappings of `q` into `g` that satisfy every constraint.
/// Automorphic images are counted separately.
pub fn count_monomorphisms(
    q: &MotifQuery,
    g: &PropertyDigraph,
    opts: &SearchOptions,
) -> Result<MatchResult, EngineError> {
    if opts.workers == 0 {
        return Err(EngineError::NoWorkers);
    }
    let plan = SearchPlan::new(q, g)?;
    let ctl = Control::new(opts);
    let roots = roots(&plan);
    let count = if opts.workers == 1 {
        roots.iter().map(|&r| count_root(&plan, r, &ctl)).sum()
    } else {
        pool(opts.workers)?.install(|| {
            roots
                .par_iter()
                .flat_map_iter(|&r| expand_task(&SearchTask { assignment: vec![r] }, &plan))
                .map(|task| count_task(&plan, task, &ctl))
                .sum()
        })
    };
    finish(opts, &ctl, count)
}

fn finish(opts: &SearchOptions, ctl: &Control, count: u64) -> Result<MatchResult, EngineError> {
    if ctl.stopped() {
        return Err(EngineError::Timeout {
            budget: opts.timeout.unwrap_or_default(),
            partial_count: count,
        });
    }
    Ok(MatchResult {
        count,
        truncated: false,
        mappings: Vec::new(),
    })
}

fn collect_root(
    plan: &SearchPlan<'_>,
    root: VertexIndex,
    ctl: &Control,
    cap: usize,
) -> Vec<Vec<VertexIndex>> {
    let mut out = Vec::new();
    let mut ticks = 0;
    let mut bound = vec![root];
    complete(plan, &mut bound, ctl, &mut ticks, &mut |m| {
        out.push(plan.to_template_order(m));
        out.len() < cap
    });
    out
}

/// Lists the mappings counted by [`count_monomorphisms`], sorted by host
/// vertex tuple in template order.
///
/// With a `limit`, roots are searched in index order in fixed-size batches
/// and the first `limit` mappings in (root, depth-first) order are kept, so
/// the selected subset does not depend on the worker count either.
/// `truncated` is set when more mappings exist.
pub fn enumerate_monomorphisms(
    q: &MotifQuery,
    g: &PropertyDigraph,
    limit: Option<usize>,
    opts: &SearchOptions,
) -> Result<MatchResult, EngineError> {
    if opts.workers == 0 {
        return Err(EngineError::NoWorkers);
    }
    let plan = SearchPlan::new(q, g)?;
    let ctl = Control::new(opts);
    let roots = roots(&plan);
    let cap = limit.map_or(usize::MAX, |l| l.saturating_add(1));
    let pool = if opts.workers > 1 {
        Some(pool(opts.workers)?)
    } else {
        None
    };

    let batch = if limit.is_some() { 64 * opts.workers } else { roots.len().max(1) };
    let mut mappings: Vec<Vec<VertexIndex>> = Vec::new();
    for chunk in roots.chunks(batch) {
        let per_root: Vec<Vec<Vec<VertexIndex>>> = match &pool {
            None => chunk.iter().map(|&r| collect_root(&plan, r, &ctl, cap)).collect(),
            Some(p) => p.install(|| {
                chunk
                    .par_iter()
                    .map(|&r| collect_root(&plan, r, &ctl, cap))
                    .collect()
            }),
        };
        for ms in per_root {
            mappings.extend(ms);
            if mappings.len() >= cap {
                break;
            }
        }
        if mappings.len() >= cap || ctl.stopped() {
            break;
        }
    }
    if ctl.stopped() {
        return Err(EngineError::Timeout {
            budget: opts.timeout.unwrap_or_default(),
            partial_count: mappings.len() as u64,
        });
    }
    let truncated = limit.is_some_and(|l| mappings.len() > l);
    if let Some(l) = limit {
        mappings.truncate(l);
    }
    mappings.sort_unstable();
    Ok(MatchResult {
        count: mappings.len() as u64,
        truncated,
        mappings,
    })
}

/// Formats one mapping as an NDJSON object, keys in template order.
pub fn mapping_json(q: &MotifQuery, g: &PropertyDigraph, mapping: &[VertexIndex]) -> String {
    let mut s = String::from("{");
    for (i, (name, &h)) in q.vertices().iter().zip(mapping).enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&serde_json::to_string(name).expect("string"));
        s.push_str(": ");
        s.push_str(&serde_json::to_string(g.id(h)).expect("string"));
    }
    s.push('}');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_motif;
    use crate::graph::graph_from_edges;

    fn count(motif: &str, edges: &[(&str, &str)]) -> u64 {
        let g = graph_from_edges(edges).unwrap();
        count_monomorphisms(&parse_motif(motif).unwrap(), &g, &SearchOptions::default())
            .unwrap()
            .count
    }

    fn bidirected_k4() -> Vec<(String, String)> {
        let mut e = Vec::new();
        for a in 1..=4 {
            for b in 1..=4 {
                if a != b {
                    e.push((a.to_string(), b.to_string()));
                }
            }
        }
        e
    }

    #[test]
    fn plan_order_examples() {
        let g = PropertyDigraph::empty();
        let order = |s: &str| {
            let q = parse_motif(s).unwrap();
            plan_order(&q, &g)
                .into_iter()
                .map(|i| q.vertices()[i].clone())
                .collect::<Vec<_>>()
        };
        assert_eq!(order("A -> B; B -> C; C -> A"), ["A", "B", "C"]);
        assert_eq!(order("A -> B; A -> C")[0], "A");
        assert_eq!(order("A -> B; B -> C"), ["B", "A", "C"]);
        assert_eq!(order("A -> B; C -> D; B - C"), ["B", "C", "A", "D"]);
    }

    #[test]
    fn expand_examples() {
        let g = graph_from_edges(&[("1", "2"), ("2", "3")]).unwrap();
        let q = parse_motif("A -> B").unwrap();
        let plan = SearchPlan::new(&q, &g).unwrap();
        let first: Vec<_> = expand_task(&SearchTask::root(), &plan)
            .into_iter()
            .map(|t| g.id(t.assignment[0]).to_string())
            .collect();
        assert_eq!(first, ["1", "2"]);

        let a1 = SearchTask {
            assignment: vec![g.index_of("1").unwrap()],
        };
        let kids = expand_task(&a1, &plan);
        assert_eq!(kids.len(), 1);
        assert_eq!(
            kids[0].bindings(&plan),
            [(0, g.index_of("1").unwrap()), (1, g.index_of("2").unwrap())]
        );

        let g2 = graph_from_edges(&[("1", "2"), ("2", "1")]).unwrap();
        let q2 = parse_motif("A -> B; B !> A").unwrap();
        let plan2 = SearchPlan::new(&q2, &g2).unwrap();
        let t = SearchTask {
            assignment: vec![g2.index_of("1").unwrap()],
        };
        assert!(expand_task(&t, &plan2).is_empty());
    }

    #[test]
    fn count_examples() {
        assert_eq!(count("A -> B", &[("1", "2"), ("2", "3")]), 2);
        assert_eq!(
            count("A -> B; B -> C; C -> A", &[("1", "2"), ("2", "3"), ("3", "1")]),
            3
        );
        let k4 = bidirected_k4();
        let k4: Vec<(&str, &str)> = k4.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        assert_eq!(count("A -> B; B -> C; C -> A", &k4), 24);
        assert_eq!(
            count("A -> B; B -> C; A -> C", &[("1", "2"), ("2", "3"), ("1", "3")]),
            1
        );
    }

    #[test]
    fn undirected_and_induced() {
        // Undirected matches either direction; a 2-cycle matches both ways.
        assert_eq!(count("A - B", &[("1", "2"), ("3", "2")]), 4);
        assert_eq!(count("A - B", &[("1", "2"), ("2", "1")]), 2);
        let g = graph_from_edges(&[("1", "2"), ("2", "3"), ("1", "3")]).unwrap();
        let path = parse_motif("A -> B; B -> C").unwrap();
        let opts = SearchOptions::default();
        assert_eq!(count_monomorphisms(&path, &g, &opts).unwrap().count, 1);
        let induced = path.with_induced(true);
        assert_eq!(count_monomorphisms(&induced, &g, &opts).unwrap().count, 0);
    }

    #[test]
    fn enumerate_examples() {
        let g = graph_from_edges(&[("1", "2"), ("2", "3")]).unwrap();
        let q = parse_motif("A -> B").unwrap();
        let opts = SearchOptions::default();
        let r = enumerate_monomorphisms(&q, &g, Some(1), &opts).unwrap();
        assert_eq!((r.mappings.len(), r.truncated), (1, true));
        let r = enumerate_monomorphisms(&q, &g, Some(2), &opts).unwrap();
        assert_eq!((r.mappings.len(), r.truncated), (2, false));

        let r = enumerate_monomorphisms(&q, &PropertyDigraph::empty(), None, &opts).unwrap();
        assert_eq!((r.count, r.mappings.len()), (0, 0));

        let g = graph_from_edges(&[("1", "2"), ("2", "3"), ("3", "1")]).unwrap();
        let q = parse_motif("A -> B; B -> C; C -> A").unwrap();
        let r = enumerate_monomorphisms(&q, &g, None, &opts).unwrap();
        let ids: Vec<Vec<&str>> = r
            .mappings
            .iter()
            .map(|m| m.iter().map(|&h| g.id(h)).collect())
            .collect();
        assert_eq!(ids, [["1", "2", "3"], ["2", "3", "1"], ["3", "1", "2"]]);
        assert_eq!(
            mapping_json(&q, &g, &r.mappings[0]),
            r#"{"A": "1", "B": "2", "C": "3"}"#
        );
    }

    #[test]
    fn ordering_predicate_on_string_column_is_rejected() {
        let mut b = crate::graph::GraphBuilder::new();
        b.add_edge("1", "2").unwrap();
        b.set_vertex_attr("1", "type", "KC".into()).unwrap();
        let g = b.build().unwrap();
        let q = parse_motif("A -> B; A.type > 3").unwrap();
        assert!(matches!(
            count_monomorphisms(&q, &g, &SearchOptions::default()),
            Err(EngineError::PredicateType { .. })
        ));
    }

    #[test]
    fn timeout_reports_partial_count() {
        let edges = bidirected_k4();
        let g = graph_from_edges(&edges).unwrap();
        let q = parse_motif("A - B; B - C; C - D").unwrap();
        let opts = SearchOptions {
            workers: 1,
            timeout: Some(Duration::ZERO),
        };
        assert!(matches!(
            count_monomorphisms(&q, &g, &opts),
            Err(EngineError::Timeout { .. })
        ));
        assert!(matches!(
            enumerate_monomorphisms(&q, &g, None, &opts),
            Err(EngineError::Timeout { .. })
        ));
    }
}
