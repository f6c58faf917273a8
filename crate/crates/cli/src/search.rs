use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use motifkit::engine::{mapping_json, EngineError};
use motifkit::{count_monomorphisms, enumerate_monomorphisms, SearchOptions};
use serde::Serialize;

use crate::args::{GraphArgs, SearchArgs};
use crate::error::{CliError, ExitStatus};
use crate::input::{budget, load, load_motif, workers, Log};

#[derive(Serialize)]
struct CountReport {
    count: u64,
    truncated: bool,
    elapsed_ms: u128,
}

fn options(search: &SearchArgs) -> Result<SearchOptions, CliError> {
    Ok(SearchOptions {
        workers: workers(search.workers)?,
        timeout: budget(search.timeout, "timeout")?,
    })
}

pub fn count(graph: &GraphArgs, search: &SearchArgs, log: Log) -> Result<ExitStatus, CliError> {
    let q = load_motif(&search.motif, search.induced)?;
    let opts = options(search)?;
    let g = load(graph, log)?;
    let start = Instant::now();
    let result = count_monomorphisms(&q, &g, &opts);
    let elapsed_ms = start.elapsed().as_millis();
    let (report, err) = match result {
        Ok(r) => (
            CountReport {
                count: r.count,
                truncated: false,
                elapsed_ms,
            },
            None,
        ),
        // A timed-out count is still reported, as a lower bound.
        Err(EngineError::Timeout { partial_count, budget }) => (
            CountReport {
                count: partial_count,
                truncated: true,
                elapsed_ms,
            },
            Some(CliError::resource(format!(
                "search timed out after {:.1}s; count is a lower bound",
                budget.as_secs_f64()
            ))),
        ),
        Err(e) => return Err(e.into()),
    };
    println!("{}", serde_json::to_string(&report).expect("plain struct"));
    match err {
        Some(e) => Err(e),
        None => Ok(ExitStatus::Success),
    }
}

pub fn find(
    graph: &GraphArgs,
    search: &SearchArgs,
    limit: Option<usize>,
    out: Option<&Path>,
    log: Log,
) -> Result<ExitStatus, CliError> {
    let q = load_motif(&search.motif, search.induced)?;
    let opts = options(search)?;
    // Open the destination first so an unwritable path fails before a long search.
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(
            File::create(p).map_err(|e| CliError::data(format!("cannot write {}: {e}", p.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let g = load(graph, log)?;
    let start = Instant::now();
    let r = enumerate_monomorphisms(&q, &g, limit, &opts)?;
    let mut w = BufWriter::new(sink);
    let write_err = |e: io::Error| CliError::data(format!("cannot write mappings: {e}"));
    for m in &r.mappings {
        writeln!(w, "{}", mapping_json(&q, &g, m)).map_err(write_err)?;
    }
    w.flush().map_err(write_err)?;
    log.info(format!(
        "{} mappings{} in {} ms",
        r.count,
        if r.truncated { " (limit reached)" } else { "" },
        start.elapsed().as_millis()
    ));
    Ok(ExitStatus::Success)
}
