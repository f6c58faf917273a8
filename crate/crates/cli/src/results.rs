//! The `results.json` schema and its table renderings.

use motifkit::discovery::{DiscoveryOutcome, RefinementKind};
use motifkit::dsl::CanonicalLabel;
use motifkit::stats::{Topology, ZScore};
use serde::{Deserialize, Serialize};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineageStep {
    pub label: CanonicalLabel,
    pub motif: String,
    pub refinement_kind: RefinementKind,
}

/// One ranked motif with its statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedResult {
    pub rank: usize,
    pub label: CanonicalLabel,
    pub motif: String,
    pub topology: Topology,
    pub observed: u64,
    pub raw_observed: u64,
    pub symmetry: u64,
    pub null_mean: f64,
    pub null_std: f64,
    pub z: ZScore,
    pub p_empirical: f64,
    pub significant: bool,
    pub round: usize,
    pub refinement_kind: RefinementKind,
    pub parent: Option<CanonicalLabel>,
    /// From the seed motif down to this one.
    pub lineage: Vec<LineageStep>,
    pub null_counts: Vec<u64>,
}

impl RankedResult {
    pub fn lineage_depth(&self) -> usize {
        self.lineage.len().saturating_sub(1)
    }
}

pub fn from_outcome(out: &DiscoveryOutcome) -> Vec<RankedResult> {
    let motif_of = |label: &CanonicalLabel| {
        out.scored
            .iter()
            .find(|c| &c.label == label)
            .map(|c| (c.stats.as_ref().map_or_else(String::new, |s| s.motif.clone()), c.refinement_kind))
            .expect("lineage entries were scored")
    };
    out.ranked
        .iter()
        .map(|r| {
            let c = &r.candidate;
            let s = c.stats.as_ref().expect("ranked motifs are scored");
            RankedResult {
                rank: r.rank,
                label: c.label.clone(),
                motif: s.motif.clone(),
                topology: r.topology,
                observed: s.observed,
                raw_observed: s.raw_observed,
                symmetry: s.symmetry,
                null_mean: s.null_mean,
                null_std: s.null_std,
                z: s.z,
                p_empirical: s.p_empirical,
                significant: s.significant,
                round: c.round,
                refinement_kind: c.refinement_kind,
                parent: c.parent.clone(),
                lineage: r
                    .lineage
                    .iter()
                    .map(|l| {
                        let (motif, refinement_kind) = motif_of(l);
                        LineageStep {
                            label: l.clone(),
                            motif,
                            refinement_kind,
                        }
                    })
                    .collect(),
                null_counts: s.null_counts.clone(),
            }
        })
        .collect()
}

/// Motif source on one line.
fn inline(motif: &str) -> String {
    motif.lines().map(str::trim).filter(|l| !l.is_empty()).collect::<Vec<_>>().join("; ")
}

fn cells(r: &RankedResult) -> [String; 7] {
    [
        r.rank.to_string(),
        inline(&r.motif),
        r.observed.to_string(),
        r.z.to_string(),
        format!("{:.4}", r.p_empirical),
        r.topology.to_string(),
        r.lineage_depth().to_string(),
    ]
}

const HEADER: [&str; 7] = ["rank", "motif", "count", "z", "p", "topology", "depth"];

pub fn render(results: &[RankedResult], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(results).expect("plain structs");
            s.push('\n');
            s
        }
        _ if results.is_empty() => "no motifs\n".to_string(),
        Format::Markdown => {
            let mut s = format!("| {} |\n|{}\n", HEADER.join(" | "), "---|".repeat(HEADER.len()));
            for r in results {
                let row = cells(r).map(|c| c.replace('|', "\\|"));
                s.push_str(&format!("| {} |\n", row.join(" | ")));
            }
            s
        }
        Format::Table => {
            let rows: Vec<[String; 7]> = results.iter().map(cells).collect();
            let width = |i: usize| {
                rows.iter()
                    .map(|r| r[i].chars().count())
                    .chain([HEADER[i].len()])
                    .max()
                    .unwrap_or(0)
            };
            let widths: Vec<usize> = (0..7).map(width).collect();
            let line = |cols: Vec<&str>| {
                cols.iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let mut s = line(HEADER.to_vec());
            s.push('\n');
            for r in &rows {
                s.push_str(&line(r.iter().map(String::as_str).collect()));
                s.push('\n');
            }
            s
        }
    }
}
