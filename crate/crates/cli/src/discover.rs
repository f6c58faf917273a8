use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use motifkit::discovery::{discover, DiscoveryConfig, StopReason, UnscoredMotif};
use motifkit::io::graph_digest;
use motifkit::rng::RNG_NAME;
use motifkit::stats::{SignificanceCriteria, Topology};
use serde::Serialize;

use crate::args::{DiscoverArgs, Format, Steer};
use crate::error::{CliError, ExitStatus};
use crate::input::{budget, load, workers, Log};
use crate::results::{from_outcome, render};

#[derive(Serialize)]
struct GraphInfo<'a> {
    path: String,
    digest: &'a str,
    vertices: usize,
    edges: usize,
}

#[derive(Serialize)]
struct Timing {
    load_ms: u128,
    discover_ms: u128,
    write_ms: u128,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    version: &'static str,
    rng: &'static str,
    graph: GraphInfo<'a>,
    config: &'a DiscoveryConfig,
    ensemble_digest: &'a str,
    ensemble_seeds: &'a [u64],
    acceptance_rates: &'a [f64],
    rounds: usize,
    stop_reason: StopReason,
    scored: usize,
    unscored: &'a [UnscoredMotif],
    diagnostics: &'a [String],
    timing: Timing,
}

fn config(a: &DiscoverArgs) -> Result<DiscoveryConfig, CliError> {
    let attribute_keys = a
        .attr_keys
        .as_deref()
        .map(|s| {
            s.split(',')
                .map(str::trim)
                .filter(|k| !k.is_empty())
                .map(String::from)
                .collect()
        })
        .unwrap_or_default();
    let cfg = DiscoveryConfig {
        size_min: a.size_min,
        size_max: a.size_max,
        target_count: a.target,
        criteria: SignificanceCriteria {
            z_min: a.z_min,
            p_max: a.p_max,
            min_count: a.min_count,
        },
        attribute_keys,
        steer: match a.steer {
            Steer::Ff => Some(Topology::FeedForward),
            Steer::Rec => Some(Topology::Recurrent),
            Steer::None => None,
        },
        seed: a.seed,
        n_samples: a.nulls,
        swap_factor: a.swap_factor,
        max_rounds: a.max_rounds,
        workers: workers(a.workers)?,
        motif_timeout: budget(a.motif_timeout, "motif-timeout")?,
        frontier_cap: a.frontier_cap,
        ..DiscoveryConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
}

pub fn run(a: &DiscoverArgs, log: Log) -> Result<ExitStatus, CliError> {
    let cfg = config(a)?;
    let start = Instant::now();
    let g = load(&a.graph, log)?;
    let loaded = Instant::now();
    log.info(format!(
        "discovering motifs of {}..{} vertices with {} null samples",
        cfg.size_min, cfg.size_max, cfg.n_samples
    ));
    let out = discover(&g, &cfg)?;
    let discovered = Instant::now();
    log.info(format!(
        "{} rounds, {} candidates scored, stop: {:?}",
        out.rounds,
        out.scored.len(),
        out.stop_reason
    ));
    for d in &out.diagnostics {
        log.info(d);
    }
    for u in &out.unscored {
        log.warn(format!("motif not scored ({}): {}", u.reason, u.motif.trim_end().replace('\n', "; ")));
    }

    let dir = a.out.join("discovered");
    fs::create_dir_all(&dir).map_err(|e| CliError::data(format!("cannot create {}: {e}", dir.display())))?;
    // Files from an earlier run in the same directory would mix with these.
    if let Ok(entries) = fs::read_dir(&dir) {
        for e in entries.flatten() {
            if e.path().extension().is_some_and(|x| x == "motif") {
                let _ = fs::remove_file(e.path());
            }
        }
    }
    let results = from_outcome(&out);
    for r in &results {
        let text = format!(
            "# rank {}, {}, z = {}, p = {}, count = {}\n{}",
            r.rank, r.topology, r.z, r.p_empirical, r.observed, r.motif
        );
        write(&dir.join(format!("{:03}_{}.motif", r.rank, r.label.file_stem())), &text)?;
    }
    write(&a.out.join("results.json"), &render(&results, Format::Json))?;

    let digest = graph_digest(&g);
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION"),
        rng: RNG_NAME,
        graph: GraphInfo {
            path: a.graph.graph.display().to_string(),
            digest: &digest,
            vertices: g.vertex_count(),
            edges: g.edge_count(),
        },
        config: &cfg,
        ensemble_digest: &out.ensemble_digest,
        ensemble_seeds: &out.ensemble_seeds,
        acceptance_rates: &out.acceptance_rates,
        rounds: out.rounds,
        stop_reason: out.stop_reason,
        scored: out.scored.len(),
        unscored: &out.unscored,
        diagnostics: &out.diagnostics,
        timing: Timing {
            load_ms: ms(loaded - start),
            discover_ms: ms(discovered - loaded),
            write_ms: ms(discovered.elapsed()),
        },
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("plain structs");
    text.push('\n');
    write(&a.out.join("run_manifest.json"), &text)?;

    if results.is_empty() {
        log.warn("no significant motifs were isolated");
        return Ok(ExitStatus::NoResults);
    }
    print!("{}", render(&results, Format::Table));
    Ok(ExitStatus::Success)
}

fn ms(d: Duration) -> u128 {
    d.as_millis()
}
