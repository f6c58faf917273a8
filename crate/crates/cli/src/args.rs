use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "motif",
    about = "Find and score network motifs in directed, attributed graphs",
    args_override_self = true
)]
pub struct Cli {
    /// Suppress informational messages on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,

    /// File of `key = value` lines supplying defaults for the subcommand's
    /// flags; flags given on the command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count matches of a motif.
    Count {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// List matches of a motif as NDJSON.
    Find {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// Stop after this many mappings.
        #[arg(long, value_name = "K")]
        limit: Option<usize>,
        /// Write mappings to this file instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Write degree-preserving randomisations of a graph.
    Randomize {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_name = "N", default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Attempted swaps per edge.
        #[arg(long, value_name = "F", default_value_t = motifkit::nullmodel::DEFAULT_SWAP_FACTOR)]
        swap_factor: f64,
        /// Output directory.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[arg(long, value_name = "N")]
        workers: Option<usize>,
    },
    /// Grow significant motifs from undirected seeds.
    Discover(Box<DiscoverArgs>),
    /// Render a results.json written by `discover`.
    Report {
        #[arg(long, value_name = "FILE")]
        results: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge list CSV (`src,dst[,attr...]`).
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    /// Vertex attribute CSV (`id,attr...`).
    #[arg(long, value_name = "FILE")]
    pub vertex_attrs: Option<PathBuf>,
    /// Edge attribute CSV (`src,dst,attr...`).
    #[arg(long, value_name = "FILE")]
    pub edge_attrs: Option<PathBuf>,
    /// Drop edges whose `weight` is below this value.
    #[arg(long, value_name = "W")]
    pub min_weight: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Motif file in the motif language.
    #[arg(long, value_name = "FILE")]
    pub motif: PathBuf,
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long, value_name = "N")]
    pub workers: Option<usize>,
    /// Forbid host edges the motif does not ask for.
    #[arg(long)]
    pub induced: bool,
    /// Time budget in seconds; 0 disables it.
    #[arg(long, value_name = "SECS", default_value_t = 3600.0)]
    pub timeout: f64,
}

#[derive(Debug, Args)]
pub struct DiscoverArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 3)]
    pub size_min: usize,
    #[arg(long, default_value_t = 5)]
    pub size_max: usize,
    /// Number of motifs to isolate.
    #[arg(long, value_name = "M", default_value_t = 10)]
    pub target: usize,
    /// Null samples in the ensemble.
    #[arg(long, value_name = "N", default_value_t = 100)]
    pub nulls: usize,
    #[arg(long, default_value_t = 2.0)]
    pub z_min: f64,
    #[arg(long, default_value_t = 0.05)]
    pub p_max: f64,
    #[arg(long, default_value_t = 5)]
    pub min_count: u64,
    /// Keep only feed-forward (ff) or recurrent (rec) motifs.
    #[arg(long, value_enum, default_value_t = Steer::None)]
    pub steer: Steer,
    /// Comma-separated vertex attribute keys to refine on.
    #[arg(long, value_name = "K1,K2")]
    pub attr_keys: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long, value_name = "N")]
    pub workers: Option<usize>,
    #[arg(long, value_name = "F", default_value_t = motifkit::nullmodel::DEFAULT_SWAP_FACTOR)]
    pub swap_factor: f64,
    #[arg(long, default_value_t = 12)]
    pub max_rounds: usize,
    /// Candidates scored per round at most.
    #[arg(long, default_value_t = 1000)]
    pub frontier_cap: usize,
    /// Scoring budget per candidate in seconds; 0 disables it.
    #[arg(long, value_name = "SECS", default_value_t = 60.0)]
    pub motif_timeout: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Steer {
    #[value(alias = "feed-forward")]
    Ff,
    #[value(alias = "recurrent")]
    Rec,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Markdown,
    Json,
}
