//! `--config` files: `key = value` lines turned into flags placed before the
//! explicit ones, so the command line wins.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::Command;

use crate::error::CliError;

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(v));
        }
    }
    None
}

/// Parses `key = value` lines. Blank lines, `#` comments and `[section]`
/// headers are skipped; values may be quoted.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('[') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
        let key = k.trim().replace('_', "-");
        let mut value = v.trim();
        for q in ['"', '\''] {
            if value.len() >= 2 && value.starts_with(q) && value.ends_with(q) {
                value = &value[1..value.len() - 1];
            }
        }
        if key.is_empty() {
            return Err(format!("line {}: empty key", i + 1));
        }
        out.push((key, value.to_string()));
    }
    Ok(out)
}

/// Returns `args` with the config file's settings spliced in right after the
/// subcommand name. Without `--config`, `args` is returned unchanged.
pub fn expand(args: Vec<OsString>, root: &Command) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::data(format!("cannot read config {}: {e}", path.display())))?;
    let pairs = parse_pairs(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;

    let Some(pos) = args
        .iter()
        .position(|a| root.get_subcommands().any(|c| a.to_str() == Some(c.get_name())))
    else {
        // No subcommand: let the parser report it.
        return Ok(args);
    };
    let sub = root
        .find_subcommand(args[pos].to_str().expect("matched a subcommand name"))
        .expect("subcommand exists");

    let mut injected: Vec<OsString> = Vec::new();
    for (key, value) in pairs {
        let arg = sub
            .get_arguments()
            .chain(root.get_arguments())
            .find(|a| key != "config" && a.get_long() == Some(key.as_str()))
            .ok_or_else(|| {
                CliError::usage(format!(
                    "{}: `{key}` is not an option of `{}`",
                    path.display(),
                    sub.get_name()
                ))
            })?;
        if arg.get_action().takes_values() {
            injected.push(format!("--{key}").into());
            injected.push(value.into());
        } else {
            match value.as_str() {
                "true" | "yes" | "1" => injected.push(format!("--{key}").into()),
                "false" | "no" | "0" => {}
                other => {
                    return Err(CliError::usage(format!(
                        "{}: `{key}` takes true or false, got {other:?}",
                        path.display()
                    )))
                }
            }
        }
    }
    let mut out = args;
    out.splice(pos + 1..pos + 1, injected);
    Ok(out)
}
