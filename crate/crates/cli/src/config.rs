//! Flat `key = value` run configuration files. Keys mirror the active
//! subcommand's long flag names; explicit flags override file values
//! and unknown keys are rejected.

use std::collections::HashSet;
use std::path::Path;

use clap::CommandFactory;

use crate::{Cli, Failure};

/// Parse a config file into ordered key/value pairs.
pub fn load(path: &Path) -> Result<Vec<(String, String)>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Failure::Usage(format!(
                "{}:{}: expected `key = value`, got {line:?}",
                path.display(),
                lineno + 1
            ))
        })?;
        let key = k.trim().to_string();
        let value = v.trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(Failure::Usage(format!(
                "{}:{}: empty key or value",
                path.display(),
                lineno + 1
            )));
        }
        if pairs.iter().any(|(existing, _)| existing == &key) {
            return Err(Failure::Usage(format!(
                "{}:{}: duplicate key {key:?}",
                path.display(),
                lineno + 1
            )));
        }
        pairs.push((key, value));
    }
    Ok(pairs)
}

/// Reject keys that do not name a flag of the active subcommand.
pub fn validate_keys(subcommand: &str, pairs: &[(String, String)]) -> Result<(), Failure> {
    let cmd = Cli::command();
    let sub = cmd
        .find_subcommand(subcommand)
        .ok_or_else(|| Failure::Usage(format!("unknown subcommand {subcommand:?}")))?;
    let valid: HashSet<String> = sub
        .get_arguments()
        .filter_map(|a| a.get_long().map(str::to_string))
        .collect();
    for (key, _) in pairs {
        if key == "config" || key == "help" || !valid.contains(key) {
            return Err(Failure::Usage(format!(
                "unknown config key {key:?} for subcommand `{subcommand}`"
            )));
        }
    }
    Ok(())
}
