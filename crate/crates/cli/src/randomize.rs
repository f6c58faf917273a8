use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use motifkit::io::{graph_digest, write_edge_csv};
use motifkit::nullmodel::{build_ensemble, NullModelError, SwapConfig};
use serde::Serialize;

use crate::args::GraphArgs;
use crate::error::{CliError, ExitStatus};
use crate::input::{load, workers, Log};

#[derive(Serialize)]
struct EnsembleManifest<'a> {
    source_digest: &'a str,
    swap_factor: f64,
    seed: u64,
    n_samples: usize,
    acceptance_rates: &'a [f64],
}

fn write_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::data(format!("cannot write {}: {e}", path.display()))
}

pub fn run(
    graph: &GraphArgs,
    samples: usize,
    seed: u64,
    swap_factor: f64,
    out: &Path,
    requested_workers: Option<usize>,
    log: Log,
) -> Result<ExitStatus, CliError> {
    let cfg = SwapConfig::new(swap_factor, seed)?;
    if samples == 0 {
        return Err(NullModelError::NoSamples.into());
    }
    let workers = workers(requested_workers)?;
    let g = load(graph, log)?;
    if g.edge_count() == 1 {
        log.warn("graph has a single edge and cannot be randomised; samples equal the input");
    }
    let ensemble = build_ensemble(&g, &cfg, samples, workers)?;

    fs::create_dir_all(out).map_err(write_err(out))?;
    for (i, s) in ensemble.samples.iter().enumerate() {
        let path = out.join(format!("sample_{i:04}.csv"));
        let file = File::create(&path).map_err(write_err(&path))?;
        write_edge_csv(s, BufWriter::new(file)).map_err(write_err(&path))?;
    }
    let manifest = EnsembleManifest {
        source_digest: &graph_digest(&g),
        swap_factor,
        seed,
        n_samples: samples,
        acceptance_rates: &ensemble.acceptance_rates,
    };
    let path = out.join("ensemble.json");
    let mut text = serde_json::to_string_pretty(&manifest).expect("plain struct");
    text.push('\n');
    fs::write(&path, text).map_err(write_err(&path))?;
    let mean = ensemble.acceptance_rates.iter().sum::<f64>() / samples as f64;
    log.info(format!("wrote {samples} samples to {} (mean acceptance {mean:.3})", out.display()));
    Ok(ExitStatus::Success)
}
