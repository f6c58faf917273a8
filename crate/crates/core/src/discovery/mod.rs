//! Greedy progressive motif discovery.
//!
//! Starting from every connected undirected motif of `size_min` vertices,
//! each round scores the frontier against one shared null ensemble, keeps the
//! significant candidates that pass the topology filter, and refines them by
//! one step each. A candidate is *isolated* when it is significant, fully
//! directed, and none of its children is significant with a strictly larger
//! z-score. The run stops once `target_count` candidates are isolated, the
//! frontier is exhausted, or `max_rounds` rounds have been scored.

mod refine;

use std::collections::HashMap;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::{CanonicalLabel, MotifQuery, MAX_MOTIF_SIZE};
use crate::engine::{EngineError, SearchOptions};
use crate::graph::PropertyDigraph;
use crate::nullmodel::{build_ensemble, NullModelError, SwapConfig, DEFAULT_SWAP_FACTOR};
use crate::stats::{score_motif, topology_class, MotifStatistics, SignificanceCriteria, Topology};

pub use refine::{refine, seed_candidates};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefinementKind {
    Seed,
    OrientEdge,
    AddEdge,
    AddAttribute,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscoveryConfig {
    pub size_min: usize,
    pub size_max: usize,
    pub target_count: usize,
    pub criteria: SignificanceCriteria,
    pub attribute_keys: Vec<String>,
    pub steer: Option<Topology>,
    pub seed: u64,
    pub n_samples: usize,
    pub swap_factor: f64,
    pub max_rounds: usize,
    pub workers: usize,
    /// Budget for scoring one candidate (host plus every null sample).
    pub motif_timeout: Option<Duration>,
    pub frontier_cap: usize,
    pub attribute_values_per_key: usize,
    /// Mappings sampled when collecting attribute values for refinement.
    pub attribute_sample_limit: usize,
}

impl Default for DiscoveryConfig {
    fn default() -> Self {
        DiscoveryConfig {
            size_min: 3,
            size_max: 5,
            target_count: 10,
            criteria: SignificanceCriteria::default(),
            attribute_keys: Vec::new(),
            steer: None,
            seed: 0,
            n_samples: 100,
            swap_factor: DEFAULT_SWAP_FACTOR,
            max_rounds: 12,
            workers: 1,
            motif_timeout: Some(Duration::from_secs(60)),
            frontier_cap: 1000,
            attribute_values_per_key: 5,
            attribute_sample_limit: 10_000,
        }
    }
}

impl DiscoveryConfig {
    pub fn validate(&self) -> Result<(), DiscoveryError> {
        let bad = |m: String| Err(DiscoveryError::InvalidConfig(m));
        if self.size_min < 2 {
            return bad(format!("size_min must be at least 2, got {}", self.size_min));
        }
        if self.size_max > MAX_MOTIF_SIZE {
            return bad(format!("size_max must be at most {MAX_MOTIF_SIZE}, got {}", self.size_max));
        }
        if self.size_min > self.size_max {
            return bad(format!("size_min {} exceeds size_max {}", self.size_min, self.size_max));
        }
        if self.target_count == 0 {
            return bad("target_count must be at least 1".into());
        }
        if self.n_samples == 0 {
            return bad("at least one null sample is required".into());
        }
        if self.max_rounds == 0 || self.frontier_cap == 0 || self.workers == 0 {
            return bad("max_rounds, frontier_cap and workers must be positive".into());
        }
        SwapConfig::new(self.swap_factor, self.seed).map_err(DiscoveryError::EnsembleFailure)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscoveryError {
    #[error("invalid discovery configuration: {0}")]
    InvalidConfig(String),
    #[error("could not build null ensemble: {0}")]
    EnsembleFailure(#[source] NullModelError),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CandidateMotif {
    #[serde(skip_serializing, skip_deserializing, default = "placeholder_query")]
    pub query: MotifQuery,
    pub label: CanonicalLabel,
    pub stats: Option<MotifStatistics>,
    pub parent: Option<CanonicalLabel>,
    pub round: usize,
    pub refinement_kind: RefinementKind,
}

fn placeholder_query() -> MotifQuery {
    crate::dsl::parse_motif("A - B").expect("valid")
}

/// Candidate that could not be scored within its budget.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnscoredMotif {
    pub label: CanonicalLabel,
    pub motif: String,
    pub round: usize,
    pub reason: String,
}

/// One isolated motif in the final ranking.
#[derive(Debug, Clone)]
pub struct RankedMotif {
    pub rank: usize,
    pub candidate: CandidateMotif,
    pub topology: Topology,
    /// Labels from the seed candidate down to this motif.
    pub lineage: Vec<CanonicalLabel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    TargetReached,
    FrontierExhausted,
    MaxRounds,
}

#[derive(Debug, Clone)]
pub struct DiscoveryOutcome {
    pub ranked: Vec<RankedMotif>,
    /// Every scored candidate, in scoring order.
    pub scored: Vec<CandidateMotif>,
    pub unscored: Vec<UnscoredMotif>,
    pub ensemble_digest: String,
    pub ensemble_seeds: Vec<u64>,
    pub acceptance_rates: Vec<f64>,
    pub rounds: usize,
    pub stop_reason: StopReason,
    pub diagnostics: Vec<String>,
}

impl DiscoveryOutcome {
    /// True when no motif was isolated.
    pub fn no_significant_motifs(&self) -> bool {
        self.ranked.is_empty()
    }
}

/// Criteria for one round: `p_max` is divided by the number of candidates
/// tested, but never pushed below the smallest p-value the ensemble can
/// produce, `1 / (n_samples + 1)`.
pub fn round_criteria(base: &SignificanceCriteria, tested: usize, n_samples: usize) -> SignificanceCriteria {
    let floor = 1.0 / (n_samples as f64 + 1.0);
    let corrected = base.p_max / tested.max(1) as f64;
    SignificanceCriteria {
        p_max: base.p_max.min(corrected.max(floor)),
        ..*base
    }
}

fn passes_steer(q: &MotifQuery, steer: Option<Topology>) -> bool {
    match (steer, topology_class(q)) {
        (None, _) | (_, Err(_)) => true,
        (Some(want), Ok(t)) => t == want,
    }
}

fn is_significant(c: &CandidateMotif) -> bool {
    c.stats.as_ref().is_some_and(|s| s.significant)
}

/// Moves each pending parent to `isolated` unless one of its children is
/// significant, passes the steer filter and has a strictly larger z-score.
fn resolve_pending(
    all: &[CandidateMotif],
    index: &HashMap<CanonicalLabel, usize>,
    pending: &mut Vec<(usize, Vec<CanonicalLabel>)>,
    steer: Option<Topology>,
    isolated: &mut Vec<usize>,
) {
    for (p, children) in pending.drain(..) {
        let pz = all[p].stats.as_ref().expect("pending parents are scored").z;
        let beaten = children.iter().any(|l| {
            let child = &all[index[l]];
            is_significant(child)
                && passes_steer(&child.query, steer)
                && child.stats.as_ref().is_some_and(|s| s.z.total_cmp(&pz).is_gt())
        });
        if !beaten {
            isolated.push(p);
        }
    }
}

/// Runs the greedy discovery loop on `g`.
pub fn discover(g: &PropertyDigraph, cfg: &DiscoveryConfig) -> Result<DiscoveryOutcome, DiscoveryError> {
    cfg.validate()?;
    let swap = SwapConfig::new(cfg.swap_factor, cfg.seed).map_err(DiscoveryError::EnsembleFailure)?;
    let ensemble =
        build_ensemble(g, &swap, cfg.n_samples, cfg.workers).map_err(DiscoveryError::EnsembleFailure)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| DiscoveryError::Pool(e.to_string()))?;
    let score_opts = SearchOptions {
        workers: 1,
        timeout: cfg.motif_timeout,
    };

    let mut all: Vec<CandidateMotif> = Vec::new();
    let mut index: HashMap<CanonicalLabel, usize> = HashMap::new();
    let mut scored: Vec<usize> = Vec::new();
    let mut unscored = Vec::new();
    let mut diagnostics = Vec::new();
    let mut isolated: Vec<usize> = Vec::new();
    // Significant parents whose children are scored next round.
    let mut pending: Vec<(usize, Vec<CanonicalLabel>)> = Vec::new();

    let mut frontier: Vec<usize> = Vec::new();
    for c in seed_candidates(cfg.size_min) {
        index.insert(c.label.clone(), all.len());
        frontier.push(all.len());
        all.push(c);
    }

    let mut rounds = 0;
    let stop_reason = loop {
        if frontier.len() > cfg.frontier_cap {
            let parent_z = |i: usize| {
                all[i]
                    .parent
                    .as_ref()
                    .and_then(|p| all[index[p]].stats.as_ref())
                    .map_or(0.0, |s| s.z.value().abs())
            };
            frontier.sort_by(|&a, &b| parent_z(b).total_cmp(&parent_z(a)));
            let dropped = frontier.len() - cfg.frontier_cap;
            frontier.truncate(cfg.frontier_cap);
            diagnostics.push(format!("round {rounds}: frontier capped, {dropped} candidates dropped"));
        }

        let criteria = round_criteria(&cfg.criteria, frontier.len(), cfg.n_samples);
        let results: Vec<Result<MotifStatistics, EngineError>> = pool.install(|| {
            frontier
                .par_iter()
                .map(|&i| score_motif(&all[i].query, g, &ensemble, &criteria, &score_opts))
                .collect()
        });
        for (&i, r) in frontier.iter().zip(results) {
            match r {
                Ok(stats) => {
                    all[i].stats = Some(stats);
                    scored.push(i);
                }
                Err(e) => unscored.push(UnscoredMotif {
                    label: all[i].label.clone(),
                    motif: all[i].query.to_source(),
                    round: rounds,
                    reason: e.to_string(),
                }),
            }
        }
        rounds += 1;

        resolve_pending(&all, &index, &mut pending, cfg.steer, &mut isolated);

        let survivors: Vec<usize> = frontier
            .iter()
            .copied()
            .filter(|&i| is_significant(&all[i]) && passes_steer(&all[i].query, cfg.steer))
            .collect();
        if isolated.len() >= cfg.target_count {
            break StopReason::TargetReached;
        }
        if rounds >= cfg.max_rounds {
            // Unrefined survivors are local maxima within the round budget.
            isolated.extend(survivors.iter().filter(|&&i| !all[i].query.has_undirected()));
            break StopReason::MaxRounds;
        }

        let mut next = Vec::new();
        for &s in &survivors {
            let children = refine(&all[s], cfg, g);
            let mut labels = Vec::with_capacity(children.len());
            for child in children {
                labels.push(child.label.clone());
                if !index.contains_key(&child.label) {
                    index.insert(child.label.clone(), all.len());
                    next.push(all.len());
                    all.push(child);
                }
            }
            if !all[s].query.has_undirected() {
                pending.push((s, labels));
            }
        }
        if next.is_empty() {
            // Every child was scored earlier, so the verdicts are final now.
            resolve_pending(&all, &index, &mut pending, cfg.steer, &mut isolated);
            break if isolated.len() >= cfg.target_count {
                StopReason::TargetReached
            } else {
                StopReason::FrontierExhausted
            };
        }
        frontier = next;
    };

    isolated.sort_unstable();
    isolated.dedup();
    isolated.sort_by(|&a, &b| {
        let (ca, cb) = (&all[a], &all[b]);
        let za = ca.stats.as_ref().expect("scored").z;
        let zb = cb.stats.as_ref().expect("scored").z;
        zb.total_cmp(&za)
            .then_with(|| motif_size(&ca.query).cmp(&motif_size(&cb.query)))
            .then_with(|| ca.label.cmp(&cb.label))
    });
    isolated.truncate(cfg.target_count);

    let lineage = |i: usize| {
        let mut chain = vec![all[i].label.clone()];
        let mut cur = &all[i];
        while let Some(p) = &cur.parent {
            cur = &all[index[p]];
            chain.push(cur.label.clone());
        }
        chain.reverse();
        chain
    };
    let ranked = isolated
        .iter()
        .enumerate()
        .map(|(r, &i)| RankedMotif {
            rank: r + 1,
            candidate: all[i].clone(),
            topology: topology_class(&all[i].query).expect("isolated motifs are fully directed"),
            lineage: lineage(i),
        })
        .collect::<Vec<_>>();
    if ranked.is_empty() {
        diagnostics.push("no significant motifs were isolated".into());
    }

    Ok(DiscoveryOutcome {
        ranked,
        scored: scored.iter().map(|&i| all[i].clone()).collect(),
        unscored,
        ensemble_digest: ensemble.digest(),
        ensemble_seeds: ensemble.seeds.clone(),
        acceptance_rates: ensemble.acceptance_rates.clone(),
        rounds,
        stop_reason,
        diagnostics,
    })
}

/// Vertices, then structural edges, then all constraints.
fn motif_size(q: &MotifQuery) -> (usize, usize, usize) {
    (
        q.size(),
        q.structural_edge_count(),
        q.edges().len() + q.predicates().len(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{canonical_form, parse_motif};

    #[test]
    fn seed_counts() {
        assert_eq!(seed_candidates(2).len(), 1);
        assert_eq!(seed_candidates(3).len(), 2);
        assert_eq!(seed_candidates(4).len(), 6);
        assert_eq!(seed_candidates(5).len(), 21);
        assert!(seed_candidates(4).iter().all(|c| c.refinement_kind == RefinementKind::Seed
            && c.parent.is_none()
            && c.query.edges().iter().all(|e| e.kind == crate::dsl::EdgeKind::Undirected)));
    }

    fn cand(src: &str) -> CandidateMotif {
        let query = parse_motif(src).unwrap();
        CandidateMotif {
            label: canonical_form(&query),
            query,
            stats: None,
            parent: None,
            round: 0,
            refinement_kind: RefinementKind::Seed,
        }
    }

    #[test]
    fn single_edge_orients_once() {
        let cfg = DiscoveryConfig {
            size_max: 2,
            ..Default::default()
        };
        let kids = refine(&cand("A - B"), &cfg, &PropertyDigraph::empty());
        assert_eq!(kids.len(), 1);
        assert_eq!(kids[0].label, canonical_form(&parse_motif("A -> B").unwrap()));
        assert_eq!(kids[0].refinement_kind, RefinementKind::OrientEdge);
        assert_eq!(kids[0].round, 1);
    }

    #[test]
    fn round_criteria_respects_resolution_floor() {
        let base = SignificanceCriteria::default();
        assert_eq!(round_criteria(&base, 1, 100).p_max, 0.05);
        assert_eq!(round_criteria(&base, 2, 100).p_max, 0.025);
        assert_eq!(round_criteria(&base, 50, 100).p_max, 1.0 / 101.0);
        assert_eq!(round_criteria(&base, 50, 10).p_max, 0.05);
    }

    #[test]
    fn config_validation() {
        let ok = DiscoveryConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            DiscoveryConfig { size_min: 1, ..ok.clone() },
            DiscoveryConfig { size_min: 9, size_max: 9, ..ok.clone() },
            DiscoveryConfig { size_min: 5, size_max: 4, ..ok.clone() },
            DiscoveryConfig { target_count: 0, ..ok.clone() },
            DiscoveryConfig { swap_factor: 0.0, ..ok.clone() },
        ] {
            assert!(bad.validate().is_err());
        }
    }
}
