mod args;
mod config;
mod discover;
mod error;
mod input;
mod randomize;
mod report;
mod results;
mod search;

use std::process;

use clap::error::ErrorKind;
use clap::{CommandFactory, FromArgMatches};
use motifkit::rng::{REFERENCE_SEED0, RNG_NAME};

use args::{Cli, Command};
use error::{CliError, ExitStatus};
use input::Log;

/// Version line plus the generator identity, so runs can be reproduced by
/// other implementations.
fn version_text() -> &'static str {
    let outputs: Vec<String> = REFERENCE_SEED0.iter().map(|x| format!("{x:#018x}")).collect();
    let text = format!(
        "{}\nrng: {RNG_NAME}\nrng seed 0 first outputs: {}",
        env!("CARGO_PKG_VERSION"),
        outputs.join(" ")
    );
    Box::leak(text.into_boxed_str())
}

fn dispatch(cli: Cli) -> Result<ExitStatus, CliError> {
    let log = Log { quiet: cli.quiet };
    match &cli.command {
        Command::Count { graph, search } => search::count(graph, search, log),
        Command::Find {
            graph,
            search,
            limit,
            out,
        } => search::find(graph, search, *limit, out.as_deref(), log),
        Command::Randomize {
            graph,
            samples,
            seed,
            swap_factor,
            out,
            workers,
        } => randomize::run(graph, *samples, *seed, *swap_factor, out, *workers, log),
        Command::Discover(a) => discover::run(a, log),
        Command::Report { results, format } => report::run(results, *format),
    }
}

fn run() -> ExitStatus {
    let cmd = Cli::command().version(version_text());
    let argv = match config::expand(std::env::args_os().collect(), &cmd) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.status;
        }
    };
    let matches = match cmd.try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitStatus::Success,
                _ => ExitStatus::Usage,
            };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitStatus::Usage;
        }
    };
    match dispatch(cli) {
        Ok(status) => status,
        Err(e) => {
            eprintln!("error: {e}");
            e.status
        }
    }
}

fn main() {
    process::exit(run().code());
}
