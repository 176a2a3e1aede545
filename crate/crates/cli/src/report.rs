//! Report assembly: the JSON document every subcommand prints.

use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use looptx::json::canonical_string;
use looptx::verify::CheckOutcome;

/// The machine-readable outcome of one invocation. Identical inputs and
/// seed reproduce this byte for byte, except for `runtime_ms`.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    /// SHA-256 of the canonical JSON (sorted keys) of everything that
    /// influenced the run: parsed input files, seed, trial counts, grid.
    pub inputs_digest: String,
    pub seed: u64,
    pub pass: bool,
    /// The command's principal output, when it has one (exponent vectors,
    /// transformed states, …).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<serde_json::Value>,
    pub results: Vec<CheckOutcome>,
    pub runtime_ms: u128,
}

/// SHA-256 hex digest of a value's canonical JSON.
pub fn digest(inputs: &serde_json::Value) -> Result<String> {
    let canonical = canonical_string(inputs)?;
    let hash = Sha256::digest(canonical.as_bytes());
    Ok(hash.iter().map(|b| format!("{b:02x}")).collect())
}

/// An informational entry: a value reported for its own sake, never
/// failing the run.
pub fn info(name: &str, value: f64) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        value,
        tolerance: 0.0,
        pass: true,
    }
}

/// A residual held to a bound: passes when `value ≤ tolerance`.
pub fn residual(name: &str, value: f64, tolerance: f64) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        value,
        tolerance,
        pass: value <= tolerance,
    }
}

/// A value held to a floor: passes when `value ≥ tolerance`.
pub fn at_least(name: &str, value: f64, tolerance: f64) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        value,
        tolerance,
        pass: value >= tolerance,
    }
}

/// Assembles the report, writes the side table if requested, prints the
/// report to standard output, and returns the process exit code.
pub fn finish(
    command: &str,
    inputs: &serde_json::Value,
    seed: u64,
    value: Option<serde_json::Value>,
    results: Vec<CheckOutcome>,
    out: Option<&Path>,
    table: Option<&serde_json::Value>,
    started: Instant,
) -> Result<i32> {
    if let (Some(path), Some(table)) = (out, table) {
        std::fs::write(path, serde_json::to_string_pretty(table)?)
            .with_context(|| format!("writing data table to {}", path.display()))?;
    }
    let report = Report {
        command: command.to_string(),
        inputs_digest: digest(inputs)?,
        seed,
        pass: results.iter().all(|c| c.pass),
        value,
        results,
        runtime_ms: started.elapsed().as_millis(),
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.pass { 0 } else { 1 })
}
