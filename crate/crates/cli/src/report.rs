use std::fs;
use std::path::Path;

use crate::args::Format;
use crate::error::{CliError, ExitStatus};
use crate::results::{render, RankedResult};

pub fn run(results: &Path, format: Format) -> Result<ExitStatus, CliError> {
    let text = fs::read_to_string(results)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", results.display())))?;
    // An empty file reads as an empty result list.
    let parsed: Vec<RankedResult> = if text.trim().is_empty() {
        Vec::new()
    } else {
        serde_json::from_str(&text)
            .map_err(|e| CliError::data(format!("{} is not a results file: {e}", results.display())))?
    };
    print!("{}", render(&parsed, format));
    Ok(ExitStatus::Success)
}
