//! Degree-preserving randomisation by directed edge swaps.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{AttrColumn, PropertyDigraph, VertexIndex};
use crate::io::{graph_digest, hex};
use crate::rng::{split_seed, MotifRng};

pub const DEFAULT_SWAP_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NullModelError {
    #[error("graph has no edges to randomise")]
    TooFewEdges,
    #[error("swap factor must be positive and finite, got {0}")]
    InvalidSwapFactor(f64),
    #[error("ensemble needs at least one sample")]
    NoSamples,
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwapConfig {
    /// Attempted swaps per edge.
    pub swap_factor: f64,
    pub seed: u64,
}

impl SwapConfig {
    pub fn new(swap_factor: f64, seed: u64) -> Result<Self, NullModelError> {
        if !(swap_factor > 0.0 && swap_factor.is_finite()) {
            return Err(NullModelError::InvalidSwapFactor(swap_factor));
        }
        Ok(SwapConfig { swap_factor, seed })
    }

    pub fn attempts(&self, edges: usize) -> u64 {
        (self.swap_factor * edges as f64).ceil() as u64
    }
}

#[derive(Debug, Clone)]
pub struct SwapOutcome {
    pub graph: PropertyDigraph,
    pub attempts: u64,
    pub accepted: u64,
}

impl SwapOutcome {
    pub fn acceptance_rate(&self) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            self.accepted as f64 / self.attempts as f64
        }
    }
}

fn key(s: VertexIndex, d: VertexIndex) -> u64 {
    (u64::from(s) << 32) | u64::from(d)
}

/// Randomises `g` with `ceil(swap_factor * |E|)` attempted swaps. Each
/// attempt picks two distinct edges (a,b), (c,d) uniformly and replaces them
/// with (a,d), (c,b) unless that would create a self-loop or an existing edge.
/// In- and out-degrees are preserved exactly; the attributes of (a,b) move to
/// (a,d) and those of (c,d) to (c,b). A graph with a single edge cannot be
/// swapped and comes back unchanged with zero accepted swaps.
pub fn xswap(g: &PropertyDigraph, cfg: &SwapConfig) -> Result<SwapOutcome, NullModelError> {
    let m = g.edge_count();
    if m == 0 {
        return Err(NullModelError::TooFewEdges);
    }
    let attempts = cfg.attempts(m);
    if m < 2 {
        return Ok(SwapOutcome {
            graph: g.clone(),
            attempts,
            accepted: 0,
        });
    }
    let mut edges: Vec<(VertexIndex, VertexIndex)> = g.edges().to_vec();
    let mut present: HashSet<u64> = edges.iter().map(|&(s, d)| key(s, d)).collect();
    let mut rng = MotifRng::new(cfg.seed);
    let mut accepted = 0;
    for _ in 0..attempts {
        let i = rng.below(m as u64) as usize;
        let mut j = rng.below(m as u64 - 1) as usize;
        if j >= i {
            j += 1;
        }
        let (a, b) = edges[i];
        let (c, d) = edges[j];
        if a == d || c == b || present.contains(&key(a, d)) || present.contains(&key(c, b)) {
            continue;
        }
        present.remove(&key(a, b));
        present.remove(&key(c, d));
        present.insert(key(a, d));
        present.insert(key(c, b));
        edges[i] = (a, d);
        edges[j] = (c, b);
        accepted += 1;
    }
    let attrs: std::collections::BTreeMap<String, AttrColumn> = g.edge_attrs().clone();
    let graph = g
        .with_edges(edges, attrs)
        .expect("swaps keep the graph simple");
    Ok(SwapOutcome {
        graph,
        attempts,
        accepted,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleProvenance {
    pub config: SwapConfig,
    pub source_digest: String,
}

#[derive(Debug, Clone)]
pub struct NullEnsemble {
    pub samples: Vec<PropertyDigraph>,
    pub seeds: Vec<u64>,
    pub acceptance_rates: Vec<f64>,
    pub provenance: EnsembleProvenance,
}

impl NullEnsemble {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Digest over the sample digests, in order.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.provenance.source_digest.as_bytes());
        for s in &self.samples {
            h.update(graph_digest(s).as_bytes());
        }
        hex(&h.finalize())
    }
}

/// Generates `n_samples` independent swap randomisations. Sample `i` uses
/// seed [`split_seed`]`(cfg.seed, i)`, so output does not depend on `workers`.
pub fn build_ensemble(
    g: &PropertyDigraph,
    cfg: &SwapConfig,
    n_samples: usize,
    workers: usize,
) -> Result<NullEnsemble, NullModelError> {
    if n_samples == 0 {
        return Err(NullModelError::NoSamples);
    }
    if g.edge_count() == 0 {
        return Err(NullModelError::TooFewEdges);
    }
    let seeds: Vec<u64> = (0..n_samples as u64).map(|i| split_seed(cfg.seed, i)).collect();
    let run = |&seed: &u64| {
        xswap(
            g,
            &SwapConfig {
                swap_factor: cfg.swap_factor,
                seed,
            },
        )
    };
    let outcomes: Vec<SwapOutcome> = if workers <= 1 {
        seeds.iter().map(run).collect::<Result<_, _>>()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| NullModelError::Pool(e.to_string()))?
            .install(|| seeds.par_iter().map(run).collect::<Result<_, _>>())?
    };
    let acceptance_rates = outcomes.iter().map(SwapOutcome::acceptance_rate).collect();
    Ok(NullEnsemble {
        samples: outcomes.into_iter().map(|o| o.graph).collect(),
        seeds,
        acceptance_rates,
        provenance: EnsembleProvenance {
            config: *cfg,
            source_digest: graph_digest(g),
        },
    })
}
