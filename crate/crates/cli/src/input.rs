use std::fs;
use std::path::Path;
use std::time::Duration;

use motifkit::io::{load_graph, LoadOptions};
use motifkit::{parse_motif, MotifQuery, PropertyDigraph};

use crate::args::GraphArgs;
use crate::error::CliError;

/// Info messages go to stderr unless `--quiet`; warnings always do.
#[derive(Debug, Clone, Copy)]
pub struct Log {
    pub quiet: bool,
}

impl Log {
    pub fn info(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    pub fn warn(&self, msg: impl AsRef<str>) {
        eprintln!("warning: {}", msg.as_ref());
    }
}

pub fn load(args: &GraphArgs, log: Log) -> Result<PropertyDigraph, CliError> {
    let loaded = load_graph(
        &args.graph,
        args.vertex_attrs.as_deref(),
        args.edge_attrs.as_deref(),
        &LoadOptions {
            min_weight: args.min_weight,
        },
    )?;
    let g = loaded.graph;
    log.info(format!(
        "loaded {}: {} vertices, {} edges",
        args.graph.display(),
        g.vertex_count(),
        g.edge_count()
    ));
    if loaded.duplicate_rows > 0 {
        log.warn(format!("{} duplicate edge rows collapsed", loaded.duplicate_rows));
    }
    if loaded.filtered_rows > 0 {
        log.info(format!("{} edges below --min-weight dropped", loaded.filtered_rows));
    }
    Ok(g)
}

pub fn load_motif(path: &Path, induced: bool) -> Result<MotifQuery, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read motif {}: {e}", path.display())))?;
    let q = parse_motif(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    Ok(q.with_induced(induced))
}

pub fn workers(requested: Option<usize>) -> Result<usize, CliError> {
    match requested {
        Some(0) => Err(CliError::usage("--workers must be at least 1")),
        Some(n) => Ok(n),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Seconds to an optional budget; zero means unlimited.
pub fn budget(secs: f64, flag: &str) -> Result<Option<Duration>, CliError> {
    if !secs.is_finite() || secs < 0.0 {
        return Err(CliError::usage(format!("--{flag} must be a non-negative number of seconds")));
    }
    Ok((secs > 0.0).then(|| Duration::from_secs_f64(secs)))
}
