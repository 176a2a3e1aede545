//! End-to-end subcommand tests driving the compiled binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn looptx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_looptx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(output: &Output) -> Value {
    assert!(
        !output.stdout.is_empty(),
        "no report on stdout; stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is a JSON report")
}

fn write(dir: &Path, name: &str, value: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

struct Fixture {
    #[allow(dead_code)]
    dir: tempfile::TempDir,
    graph: PathBuf,
    commutator: PathBuf,
    generator_loop: PathBuf,
    connection: PathBuf,
}

/// The two-vertex, three-edge graph with everything pointing v0 → v1,
/// plus a commutator word, a single-generator loop, and a connection.
fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(
        dir.path(),
        "graph.json",
        &json!({
            "vertices": ["v0", "v1"],
            "base": "v0",
            "edges": [
                {"id": "e1", "from": "v0", "to": "v1"},
                {"id": "e2", "from": "v0", "to": "v1"},
                {"id": "e3", "from": "v0", "to": "v1"},
            ],
        }),
    );
    let commutator = write(
        dir.path(),
        "commutator.json",
        &json!({
            "kind": "loop",
            "steps": ["e2", "~e1", "e3", "~e1", "e1", "~e2", "e1", "~e3"],
        }),
    );
    let generator_loop = write(
        dir.path(),
        "beta1.json",
        &json!({"kind": "loop", "steps": ["e2", "~e1"]}),
    );
    let connection = write(
        dir.path(),
        "connection.json",
        &json!({
            "group": "U1",
            "assignment": {"e1": 0.0, "e2": std::f64::consts::FRAC_PI_2, "e3": 0.25},
        }),
    );
    Fixture {
        dir,
        graph,
        commutator,
        generator_loop,
        connection,
    }
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generators_lists_tree_and_chords() {
    let f = fixture();
    let out = looptx(&["generators", "--graph", path(&f.graph)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["value"]["tree_edges"], json!(["e1"]));
    assert_eq!(r["value"]["chords"], json!(["e2", "e3"]));
    assert_eq!(r["value"]["generators"][0]["steps"], json!(["e2", "~e1"]));
}

#[test]
fn decompose_recovers_generator_letters() {
    let f = fixture();
    let out = looptx(&[
        "decompose",
        "--graph",
        path(&f.graph),
        "--word",
        path(&f.commutator),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let letters = r["value"].as_array().unwrap();
    assert_eq!(letters.len(), 4, "commutator has four letters: {letters:?}");
    assert_eq!(letters[0], json!({"generator": 0, "inverse": false}));
    assert_eq!(letters[1], json!({"generator": 1, "inverse": false}));
}

#[test]
fn abelianize_reports_both_exponent_vectors() {
    let f = fixture();
    let out = looptx(&[
        "abelianize",
        "--graph",
        path(&f.graph),
        "--word",
        path(&f.generator_loop),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["value"]["loop_exponents"], json!([1, 0]));
    assert_eq!(r["value"]["edge_exponents"], json!([-1, 1, 0]));
}

#[test]
fn kernel_test_passes_commutators_and_fails_generators() {
    let f = fixture();
    let out = looptx(&[
        "kernel-test",
        "--graph",
        path(&f.graph),
        "--word",
        path(&f.commutator),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["value"], json!([0, 0]));

    let out = looptx(&[
        "kernel-test",
        "--graph",
        path(&f.graph),
        "--word",
        path(&f.generator_loop),
    ]);
    assert_eq!(out.status.code(), Some(1), "a generator is not in the kernel");
    let r = report(&out);
    assert_eq!(r["value"], json!([1, 0]));
    assert_eq!(r["pass"], json!(false));
}

#[test]
fn interpolate_hits_targets_in_both_groups() {
    let f = fixture();
    let out = looptx(&["interpolate", "--graph", path(&f.graph), "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["pass"], json!(true));
    assert!(r["value"]["u1"]["assignment"]["e1"].is_number());
    assert!(r["value"]["su2"]["assignment"]["e1"].is_array());
}

#[test]
fn holonomy_reports_angle_and_wilson_value() {
    let f = fixture();
    let out = looptx(&[
        "holonomy",
        "--graph",
        path(&f.graph),
        "--word",
        path(&f.generator_loop),
        "--connection",
        path(&f.connection),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let angle = r["value"]["angle"].as_f64().unwrap();
    assert!((angle - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    let wilson = r["value"]["wilson"].as_array().unwrap();
    assert!(wilson[0].as_f64().unwrap().abs() < 1e-15);
    assert!((wilson[1].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn transform_and_inverse_round_trip_through_files() {
    let f = fixture();
    let level = write(f.dir.path(), "level.json", &json!({"ambient": 2, "basis": [[2, 1]]}));
    let poly = write(
        f.dir.path(),
        "poly.json",
        &json!({"dim": 1, "coeffs": [{"k": [1], "re": 1.0, "im": 0.0}]}),
    );
    let state_out = f.dir.path().join("state.json");
    let out = looptx(&[
        "transform",
        "--graph",
        path(&f.graph),
        "--level",
        path(&level),
        "--poly",
        path(&poly),
        "--out",
        path(&state_out),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["value"]["support"], json!([{"h": [2, 1], "re": 1.0, "im": 0.0}]));

    // Feed the written state straight back through the inverse transform.
    let out = looptx(&["inverse-transform", "--state", path(&state_out)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["value"]["level"], json!({"ambient": 2, "basis": [[2, 1]]}));
    assert_eq!(r["value"]["poly"]["coeffs"], json!([{"k": [1], "re": 1.0, "im": 0.0}]));
}

#[test]
fn sweep_subcommands_pass_with_small_trial_counts() {
    for subcommand in [
        "mandelstam-sweep",
        "verify-diagram",
        "verify-unitarity",
        "bochner-check",
        "fft-crosscheck",
        "path-transform",
    ] {
        let out = looptx(&[subcommand, "--trials", "20", "--seed", "5"]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{subcommand} failed: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        let r = report(&out);
        assert_eq!(r["pass"], json!(true), "{subcommand}: {r}");
        assert_eq!(r["command"], json!(subcommand));
    }
}

#[test]
fn bochner_check_flags_the_signed_density() {
    let f = fixture();
    let density = write(
        f.dir.path(),
        "cosine.json",
        &json!({
            "dim": 1,
            "hermitian": true,
            "coeffs": [
                {"k": [1], "re": 1.0, "im": 0.0},
                {"k": [-1], "re": 1.0, "im": 0.0},
            ],
        }),
    );
    let samples_out = f.dir.path().join("samples.json");
    let out = looptx(&[
        "bochner-check",
        "--poly",
        path(&density),
        "--out",
        path(&samples_out),
    ]);
    assert_eq!(out.status.code(), Some(1), "signed density must fail");
    let r = report(&out);
    let eig = r["results"][0]["value"].as_f64().unwrap();
    assert!((eig + 1.0).abs() <= 1e-9, "pair-window eigenvalue: {eig}");
    let table: Value = serde_json::from_str(&std::fs::read_to_string(&samples_out).unwrap()).unwrap();
    assert_eq!(table["samples"].as_array().unwrap().len(), 65);
}

#[test]
fn bochner_check_accepts_a_squared_density() {
    let f = fixture();
    // |1 + χ₁|² = 2 + χ₁ + χ₋₁.
    let density = write(
        f.dir.path(),
        "fejer.json",
        &json!({
            "dim": 1,
            "hermitian": true,
            "coeffs": [
                {"k": [0], "re": 2.0, "im": 0.0},
                {"k": [1], "re": 1.0, "im": 0.0},
                {"k": [-1], "re": 1.0, "im": 0.0},
            ],
        }),
    );
    let out = looptx(&["bochner-check", "--poly", path(&density)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn fft_crosscheck_on_a_given_polynomial() {
    let f = fixture();
    let poly = write(
        f.dir.path(),
        "poly2d.json",
        &json!({
            "dim": 2,
            "coeffs": [
                {"k": [2, -1], "re": 0.5, "im": 0.0},
                {"k": [0, 3], "re": -0.25, "im": 1.0},
            ],
        }),
    );
    let out = looptx(&["fft-crosscheck", "--poly", path(&poly), "--grid", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r["value"]["residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn path_transform_on_an_edge_level() {
    let f = fixture();
    let level = write(
        f.dir.path(),
        "edge_level.json",
        &json!({"ambient": 3, "basis": [[-1, 1, 0]]}),
    );
    let poly = write(
        f.dir.path(),
        "edge_poly.json",
        &json!({"dim": 1, "coeffs": [{"k": [1], "re": 1.0, "im": 0.0}]}),
    );
    let out = looptx(&[
        "path-transform",
        "--graph",
        path(&f.graph),
        "--level",
        path(&level),
        "--poly",
        path(&poly),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["value"]["support"], json!([{"h": [-1, 1, 0], "re": 1.0, "im": 0.0}]));
}

#[test]
fn usage_and_schema_errors_exit_two() {
    let f = fixture();
    // Unknown subcommand (clap).
    let out = looptx(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));

    // Malformed JSON file.
    let broken = f.dir.path().join("broken.json");
    std::fs::write(&broken, "{not json").unwrap();
    let out = looptx(&["generators", "--graph", path(&broken)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parsing"));

    // Valid JSON violating a library invariant (duplicate edge id).
    let dup = write(
        f.dir.path(),
        "dup.json",
        &json!({
            "vertices": ["v0"],
            "base": "v0",
            "edges": [
                {"id": "e1", "from": "v0", "to": "v0"},
                {"id": "e1", "from": "v0", "to": "v0"},
            ],
        }),
    );
    let out = looptx(&["generators", "--graph", path(&dup)]);
    assert_eq!(out.status.code(), Some(2));

    // Mixed-mode path-transform invocation.
    let out = looptx(&["path-transform", "--graph", path(&f.graph)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_carry_digest_and_tolerances() {
    let f = fixture();
    let out = looptx(&["generators", "--graph", path(&f.graph)]);
    let r = report(&out);
    let digest = r["inputs_digest"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
    assert!(digest.chars().all(|c| c.is_ascii_hexdigit()));
    for check in r["results"].as_array().unwrap() {
        assert!(check["tolerance"].is_number());
        assert!(check["pass"].is_boolean());
    }
}

#[test]
fn tol_override_is_honored() {
    let f = fixture();
    // An absurdly strict tolerance makes the (tiny but nonzero) SU(2)
    // interpolation residual fail.
    let out = looptx(&[
        "interpolate",
        "--graph",
        path(&f.graph),
        "--seed",
        "7",
        "--tol",
        "1e-300",
    ]);
    let r = report(&out);
    let su2 = r["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "su2-holonomy-residual")
        .unwrap();
    assert_eq!(su2["tolerance"].as_f64().unwrap(), 1e-300);
}
