//! Significance of observed motif counts against a null ensemble.

use std::cmp::Ordering;
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::dsl::{canonical_form, symmetry_count, CanonicalLabel, EdgeKind, MotifQuery};
use crate::engine::{count_monomorphisms, EngineError, SearchOptions};
use crate::graph::PropertyDigraph;
use crate::nullmodel::NullEnsemble;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignificanceCriteria {
    pub z_min: f64,
    pub p_max: f64,
    pub min_count: u64,
}

impl Default for SignificanceCriteria {
    fn default() -> Self {
        SignificanceCriteria {
            z_min: 2.0,
            p_max: 0.05,
            min_count: 5,
        }
    }
}

/// A z-score; a zero-variance null gives an infinite score whenever the
/// observed count differs from the null mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZScore {
    Finite(f64),
    PosInf,
    NegInf,
}

impl ZScore {
    pub fn value(self) -> f64 {
        match self {
            ZScore::Finite(z) => z,
            ZScore::PosInf => f64::INFINITY,
            ZScore::NegInf => f64::NEG_INFINITY,
        }
    }

    pub fn total_cmp(&self, other: &ZScore) -> Ordering {
        self.value().total_cmp(&other.value())
    }
}

impl fmt::Display for ZScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZScore::Finite(z) => write!(f, "{z:.3}"),
            ZScore::PosInf => f.write_str("+inf"),
            ZScore::NegInf => f.write_str("-inf"),
        }
    }
}

impl Serialize for ZScore {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ZScore::Finite(z) => s.serialize_f64(*z),
            ZScore::PosInf => s.serialize_str("+inf"),
            ZScore::NegInf => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ZScore {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(z) => Ok(ZScore::Finite(z)),
            Raw::Text(t) if t == "+inf" => Ok(ZScore::PosInf),
            Raw::Text(t) if t == "-inf" => Ok(ZScore::NegInf),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad z-score {t:?}"))),
        }
    }
}

/// The statistic part of [`MotifStatistics`], computed from counts alone.
#[derive(Debug, Clone, PartialEq)]
pub struct CountSummary {
    pub null_mean: f64,
    pub null_std: f64,
    pub z: ZScore,
    pub p_empirical: f64,
    pub significant: bool,
}

/// Mean, sample standard deviation (n−1 denominator), z-score and add-one
/// empirical p-value `(1 + #{null ≥ observed}) / (n + 1)`.
pub fn summarize(observed: u64, null_counts: &[u64], criteria: &SignificanceCriteria) -> CountSummary {
    assert!(!null_counts.is_empty(), "empty null distribution");
    let n = null_counts.len() as f64;
    let mean = null_counts.iter().map(|&c| c as f64).sum::<f64>() / n;
    let std = if null_counts.len() < 2 {
        0.0
    } else {
        let ss: f64 = null_counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum();
        (ss / (n - 1.0)).sqrt()
    };
    let obs = observed as f64;
    let z = if std > 0.0 {
        ZScore::Finite((obs - mean) / std)
    } else if obs > mean {
        ZScore::PosInf
    } else if obs < mean {
        ZScore::NegInf
    } else {
        ZScore::Finite(0.0)
    };
    let at_least = null_counts.iter().filter(|&&c| c >= observed).count() as f64;
    let p = (1.0 + at_least) / (n + 1.0);
    let significant = z.value() >= criteria.z_min && p <= criteria.p_max && observed >= criteria.min_count;
    CountSummary {
        null_mean: mean,
        null_std: std,
        z,
        p_empirical: p,
        significant,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifStatistics {
    pub label: CanonicalLabel,
    pub motif: String,
    /// Distinct occurrences: raw mappings divided by `symmetry`.
    pub observed: u64,
    pub raw_observed: u64,
    pub symmetry: u64,
    pub null_counts: Vec<u64>,
    pub null_mean: f64,
    pub null_std: f64,
    pub z: ZScore,
    pub p_empirical: f64,
    pub significant: bool,
}

/// Counts `q` in the host and in every ensemble sample, then summarises.
/// Counts are occurrence counts (raw mappings over the motif's symmetry), so
/// mappings that differ only by an automorphism are counted once.
///
/// `opts.timeout`, when set, bounds the whole call.
pub fn score_motif(
    q: &MotifQuery,
    g: &PropertyDigraph,
    ensemble: &NullEnsemble,
    criteria: &SignificanceCriteria,
    opts: &SearchOptions,
) -> Result<MotifStatistics, EngineError> {
    assert!(!ensemble.is_empty(), "empty ensemble");
    let deadline = opts.timeout.map(|t| Instant::now() + t);
    let symmetry = symmetry_count(q);
    let count_in = |graph: &PropertyDigraph, workers: usize| -> Result<u64, EngineError> {
        let timeout = deadline.map(|d| d.saturating_duration_since(Instant::now()));
        if timeout == Some(Duration::ZERO) {
            return Err(EngineError::Timeout {
                budget: opts.timeout.unwrap_or_default(),
                partial_count: 0,
            });
        }
        let r = count_monomorphisms(q, graph, &SearchOptions { workers, timeout })?;
        Ok(r.count)
    };
    let raw_observed = count_in(g, opts.workers)?;
    let observed = raw_observed / symmetry;
    let null_counts: Vec<u64> = if opts.workers <= 1 {
        ensemble
            .samples
            .iter()
            .map(|s| count_in(s, 1).map(|c| c / symmetry))
            .collect::<Result<_, _>>()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| EngineError::Pool(e.to_string()))?
            .install(|| {
                ensemble
                    .samples
                    .par_iter()
                    .map(|s| count_in(s, 1).map(|c| c / symmetry))
                    .collect::<Result<_, _>>()
            })?
    };
    let s = summarize(observed, &null_counts, criteria);
    Ok(MotifStatistics {
        label: canonical_form(q),
        motif: q.to_source(),
        observed,
        raw_observed,
        symmetry,
        null_counts,
        null_mean: s.null_mean,
        null_std: s.null_std,
        z: s.z,
        p_empirical: s.p_empirical,
        significant: s.significant,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    FeedForward,
    Recurrent,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::FeedForward => "feed_forward",
            Topology::Recurrent => "recurrent",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("topology is only defined for fully directed motifs")]
    UndirectedEdgesPresent,
}

/// Recurrent when the directed constraints contain a cycle, feed-forward when
/// they admit a topological order. Forbidden constraints are ignored.
pub fn topology_class(q: &MotifQuery) -> Result<Topology, TopologyError> {
    if q.has_undirected() {
        return Err(TopologyError::UndirectedEdgesPresent);
    }
    let n = q.size();
    let directed: Vec<_> = q
        .edges()
        .iter()
        .filter(|e| e.kind == EdgeKind::Directed)
        .collect();
    let mut indegree = vec![0usize; n];
    for e in &directed {
        indegree[e.dst] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = ready.pop() {
        removed += 1;
        for e in directed.iter().filter(|e| e.src == v) {
            indegree[e.dst] -= 1;
            if indegree[e.dst] == 0 {
                ready.push(e.dst);
            }
        }
    }
    Ok(if removed == n {
        Topology::FeedForward
    } else {
        Topology::Recurrent
    })
}
