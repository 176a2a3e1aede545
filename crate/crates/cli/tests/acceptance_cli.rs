//! Full self-test acceptance gate: every verification sweep at full trial
//! counts through the binary, with deterministic output.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn selftest(seed: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_looptx"))
        .args(["selftest", "--seed", seed])
        .output()
        .expect("binary runs")
}

/// Drop the one field that is allowed to differ between runs.
fn without_runtime(stdout: &[u8]) -> String {
    String::from_utf8(stdout.to_vec())
        .expect("report is UTF-8")
        .lines()
        .filter(|line| !line.contains("\"runtime_ms\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn criterion_10_cli_selftest() {
    const BUDGET: Duration = Duration::from_secs(180);

    let started = Instant::now();
    let first = selftest("42");
    let elapsed = started.elapsed();

    let stdout = String::from_utf8_lossy(&first.stdout);
    assert_eq!(first.status.code(), Some(0), "selftest failed:\n{stdout}");
    assert!(elapsed < BUDGET, "selftest took {elapsed:?}, budget {BUDGET:?}");

    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["command"], "selftest");
    assert_eq!(report["seed"], 42);
    assert_eq!(report["pass"], true);
    let results = report["results"].as_array().unwrap();
    assert!(
        results.len() >= 9,
        "expected at least one check per sweep, got {}",
        results.len()
    );
    assert!(results.iter().all(|c| c["pass"] == true));

    // Byte-identical reruns, up to the runtime field.
    let second = selftest("42");
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(without_runtime(&first.stdout), without_runtime(&second.stdout));

    // A different seed still passes but hashes to a different input digest.
    let other = selftest("43");
    assert_eq!(other.status.code(), Some(0));
    let other_report: serde_json::Value =
        serde_json::from_slice(&other.stdout).unwrap();
    assert_ne!(report["inputs_digest"], other_report["inputs_digest"]);

    println!(
        "PASS  cli-selftest  seed 42  {:>8.2?}  [{} checks]",
        elapsed,
        results.len()
    );
}
