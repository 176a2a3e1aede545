//! `looptx` — JSON-in/JSON-out driver for loop-transform computations.
//!
//! Every subcommand prints a [`report::Report`] to standard output and
//! exits 0 when all of its checks pass, 1 when any check fails, and 2 on
//! malformed input or usage errors. `--out FILE` additionally writes the
//! subcommand's data table (generator tables, transformed states, density
//! samples, full sweep reports) as JSON.

mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use looptx::basis::{path_abelianize, spanning_tree_generators};
use looptx::harmonics::fft_oracle;
use looptx::holonomy::{holonomy, holonomy_steps, interpolate, wilson, GroupElement, GroupKind};
use looptx::json::{
    basis_to_json, connection_from_json, connection_to_json, cylinder_from_json,
    cylinder_to_json, density_from_json, graph_from_json, level_from_json, loop_state_to_json,
    poly_from_json, word_from_json, word_to_json, ConnectionJson, CylinderJson, DensityJson,
    GraphJson, LevelJson, LoopStateJson, TrigPolyJson, WordJson,
};
use looptx::levels::RefinementMatrix;
use looptx::positivity::{functional_from_density, grid_positivity_test, psd_test};
use looptx::sample::{insert_retracings, random_group_element, rng};
use looptx::transform::{inverse_transform, loop_transform, path_transform, CylinderFunction};
use looptx::verify::{
    self, CheckOutcome, CriterionReport, FFT_TOL, INTERPOLATION_TOL, PSD_TOL, UNITARITY_TOL,
};
use looptx::word::Orientation;

#[derive(Parser)]
#[command(
    name = "looptx",
    version,
    about = "Loop groups, holonomy, and the inductive loop transform on embedded graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Seed for every randomized draw in this invocation.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Override the default tolerance of this command's direct residual
    /// checks (verification sweeps keep their pinned tolerances).
    #[arg(long)]
    tol: Option<f64>,
    /// Write this command's data table as JSON to the given file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of random trials.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Print the spanning tree and free loop generators of a graph.
    Generators {
        /// Graph JSON file.
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Express a based loop as a word in the free generators.
    Decompose {
        #[arg(long)]
        graph: PathBuf,
        /// Word JSON file (must be a based loop).
        #[arg(long)]
        word: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Net generator exponents and net edge exponents of a based loop.
    Abelianize {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        word: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Test whether a based loop has trivial holonomy under every
    /// abelian connection (all net generator exponents zero).
    KernelTest {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        word: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Draw random holonomy targets and solve for connections realizing
    /// them exactly, in both U(1) and SU(2).
    Interpolate {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Evaluate the holonomy of a word under a connection.
    Holonomy {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        word: PathBuf,
        /// Connection JSON file.
        #[arg(long)]
        connection: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sweep the SU(2) trace identity over random loops and connections.
    MandelstamSweep(SweepArgs),
    /// Transform a cylinder function to its loop-lattice state.
    Transform {
        #[arg(long)]
        graph: PathBuf,
        /// Level JSON file (in the loop lattice of the graph).
        #[arg(long)]
        level: PathBuf,
        /// Polynomial JSON file (in the level's coordinates).
        #[arg(long)]
        poly: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Recover the cylinder function of a finitely supported state.
    InverseTransform {
        /// Loop-state JSON file.
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sweep inclusion isometry and diagram commutation over random
    /// refinements and refinement chains.
    VerifyDiagram(SweepArgs),
    /// Sweep unitarity of the transform over random function pairs.
    VerifyUnitarity(SweepArgs),
    /// Probe a density for positivity (Gram windows and grid minimum),
    /// or sweep random squared densities when no input is given.
    BochnerCheck {
        /// Density JSON file; omit to run the randomized sweep.
        #[arg(long)]
        poly: Option<PathBuf>,
        /// Sampling points per axis (odd).
        #[arg(long, default_value_t = 65)]
        grid: usize,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Cross-check exact coefficients against the sampled FFT, for a
    /// given polynomial or over a randomized sweep.
    FftCrosscheck {
        /// Polynomial JSON file; omit to run the randomized sweep.
        #[arg(long)]
        poly: Option<PathBuf>,
        /// Sampling points per axis (odd, above twice the bandwidth).
        #[arg(long, default_value_t = 65)]
        grid: usize,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Transform a cylinder function over the edge lattice, or sweep
    /// loop/path transform consistency when no input is given.
    PathTransform {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        level: Option<PathBuf>,
        #[arg(long)]
        poly: Option<PathBuf>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Run every verification sweep at full trial counts.
    Selftest {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() {
    std::process::exit(match run() {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error:#}");
            2
        }
    });
}

fn run() -> Result<i32> {
    let started = Instant::now();
    match Cli::parse().command {
        Command::Generators { graph, common } => cmd_generators(&graph, &common, started),
        Command::Decompose {
            graph,
            word,
            common,
        } => cmd_decompose(&graph, &word, &common, started),
        Command::Abelianize {
            graph,
            word,
            common,
        } => cmd_abelianize(&graph, &word, &common, started),
        Command::KernelTest {
            graph,
            word,
            common,
        } => cmd_kernel_test(&graph, &word, &common, started),
        Command::Interpolate { graph, common } => cmd_interpolate(&graph, &common, started),
        Command::Holonomy {
            graph,
            word,
            connection,
            common,
        } => cmd_holonomy(&graph, &word, &connection, &common, started),
        Command::MandelstamSweep(args) => cmd_sweep(
            "mandelstam-sweep",
            &args,
            verify::mandelstam_sweep(args.common.seed, args.trials)?,
            started,
        ),
        Command::Transform {
            graph,
            level,
            poly,
            common,
        } => cmd_transform(&graph, &level, &poly, &common, started),
        Command::InverseTransform { state, common } => cmd_inverse_transform(&state, &common, started),
        Command::VerifyDiagram(args) => cmd_sweep(
            "verify-diagram",
            &args,
            verify::inclusion_sweep(args.common.seed, args.trials, (args.trials / 5).max(1))?,
            started,
        ),
        Command::VerifyUnitarity(args) => cmd_sweep(
            "verify-unitarity",
            &args,
            verify::unitarity_sweep(args.common.seed, args.trials)?,
            started,
        ),
        Command::BochnerCheck { poly, grid, sweep } => {
            cmd_bochner_check(poly.as_deref(), grid, &sweep, started)
        }
        Command::FftCrosscheck { poly, grid, sweep } => {
            cmd_fft_crosscheck(poly.as_deref(), grid, &sweep, started)
        }
        Command::PathTransform {
            graph,
            level,
            poly,
            sweep,
        } => cmd_path_transform(
            graph.as_deref(),
            level.as_deref(),
            poly.as_deref(),
            &sweep,
            started,
        ),
        Command::Selftest { common } => cmd_selftest(&common, started),
    }
}

/// Reads, parses, and decodes one JSON input file, returning both the
/// typed value and the raw JSON (for the inputs digest).
fn load<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<(T, Value)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {what} file {}", path.display()))?;
    let raw: Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing {what} file {}", path.display()))?;
    let typed: T = serde_json::from_value(raw.clone())
        .with_context(|| format!("decoding {what} file {}", path.display()))?;
    Ok((typed, raw))
}

fn inputs_value(command: &str, entries: &[(&str, Value)]) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("command".to_string(), command.into());
    for (key, value) in entries {
        map.insert((*key).to_string(), value.clone());
    }
    Value::Object(map)
}

/// Prefixes every check of a sweep report with the sweep's name.
fn flatten(reports: &[CriterionReport]) -> Vec<CheckOutcome> {
    reports
        .iter()
        .flat_map(|r| {
            r.checks.iter().map(|c| CheckOutcome {
                name: format!("{}/{}", r.name, c.name),
                ..c.clone()
            })
        })
        .collect()
}

fn cmd_generators(graph_path: &Path, common: &CommonArgs, started: Instant) -> Result<i32> {
    let (graph_json, graph_raw) = load::<GraphJson>(graph_path, "graph")?;
    let graph = graph_from_json(&graph_json)?;
    let basis = spanning_tree_generators(&graph);
    let table = serde_json::to_value(basis_to_json(&graph, &basis))?;
    let inputs = inputs_value("generators", &[("graph", graph_raw)]);
    report::finish(
        "generators",
        &inputs,
        common.seed,
        Some(table.clone()),
        vec![
            report::info("rank", basis.rank() as f64),
            report::info("tree-edges", basis.tree_edges().len() as f64),
        ],
        common.out.as_deref(),
        Some(&table),
        started,
    )
}

fn cmd_decompose(
    graph_path: &Path,
    word_path: &Path,
    common: &CommonArgs,
    started: Instant,
) -> Result<i32> {
    let (graph_json, graph_raw) = load::<GraphJson>(graph_path, "graph")?;
    let (word_json, word_raw) = load::<WordJson>(word_path, "word")?;
    let graph = graph_from_json(&graph_json)?;
    let basis = spanning_tree_generators(&graph);
    let word = word_from_json(&graph, &word_json)?;
    let decomposed = basis.decompose(&word)?;
    let letters: Vec<Value> = decomposed
        .letters()
        .iter()
        .map(|&(i, orientation)| {
            json!({"generator": i, "inverse": orientation == Orientation::Reverse})
        })
        .collect();
    let round_trip_mismatch = basis.substitute(&decomposed, &graph) != word;
    let table = json!({
        "letters": letters,
        "substituted": word_to_json(&graph, &basis.substitute(&decomposed, &graph)),
    });
    let inputs = inputs_value("decompose", &[("graph", graph_raw), ("word", word_raw)]);
    report::finish(
        "decompose",
        &inputs,
        common.seed,
        Some(Value::Array(letters.clone())),
        vec![
            report::info("letter-count", letters.len() as f64),
            report::residual(
                "substitution-round-trip-mismatches",
                round_trip_mismatch as u8 as f64,
                0.0,
            ),
        ],
        common.out.as_deref(),
        Some(&table),
        started,
    )
}

fn cmd_abelianize(
    graph_path: &Path,
    word_path: &Path,
    common: &CommonArgs,
    started: Instant,
) -> Result<i32> {
    let (graph_json, graph_raw) = load::<GraphJson>(graph_path, "graph")?;
    let (word_json, word_raw) = load::<WordJson>(word_path, "word")?;
    let graph = graph_from_json(&graph_json)?;
    let basis = spanning_tree_generators(&graph);
    let word = word_from_json(&graph, &word_json)?;
    let loop_exponents = basis.abelianize(&word)?;
    let edge_exponents = path_abelianize(&graph, &word);
    let matrix = RefinementMatrix::new(basis.edge_exponent_rows(&graph), basis.rank())?;
    let factoring_mismatch = matrix.apply(&loop_exponents)? != edge_exponents;
    let table = json!({
        "loop_exponents": loop_exponents,
        "edge_exponents": edge_exponents,
    });
    let inputs = inputs_value("abelianize", &[("graph", graph_raw), ("word", word_raw)]);
    report::finish(
        "abelianize",
        &inputs,
        common.seed,
        Some(table.clone()),
        vec![report::residual(
            "edge-factoring-mismatches",
            factoring_mismatch as u8 as f64,
            0.0,
        )],
        common.out.as_deref(),
        Some(&table),
        started,
    )
}

fn cmd_kernel_test(
    graph_path: &Path,
    word_path: &Path,
    common: &CommonArgs,
    started: Instant,
) -> Result<i32> {
    let (graph_json, graph_raw) = load::<GraphJson>(graph_path, "graph")?;
    let (word_json, word_raw) = load::<WordJson>(word_path, "word")?;
    let graph = graph_from_json(&graph_json)?;
    let basis = spanning_tree_generators(&graph);
    let word = word_from_json(&graph, &word_json)?;
    let exponents = basis.abelianize(&word)?;
    let in_kernel = basis.kernel_test(&word)?;
    let nonzero = exponents.iter().filter(|&&q| q != 0).count();
    let table = json!({"pass": in_kernel, "value": exponents});
    let inputs = inputs_value("kernel-test", &[("graph", graph_raw), ("word", word_raw)]);
    report::finish(
        "kernel-test",
        &inputs,
        common.seed,
        Some(serde_json::to_value(&exponents)?),
        vec![report::residual(
            "nonzero-generator-exponents",
            nonzero as f64,
            0.0,
        )],
        common.out.as_deref(),
        Some(&table),
        started,
    )
}

fn cmd_interpolate(graph_path: &Path, common: &CommonArgs, started: Instant) -> Result<i32> {
    let (graph_json, graph_raw) = load::<GraphJson>(graph_path, "graph")?;
    let graph = graph_from_json(&graph_json)?;
    let basis = spanning_tree_generators(&graph);
    let tolerance = common.tol.unwrap_or(INTERPOLATION_TOL);
    let mut r = rng(common.seed);
    let mut results = Vec::new();
    let mut connections = serde_json::Map::new();
    for (label, kind) in [("u1", GroupKind::U1), ("su2", GroupKind::Su2)] {
        let targets: Vec<GroupElement> = (0..basis.rank())
            .map(|_| random_group_element(&mut r, kind))
            .collect();
        let connection = interpolate(&graph, &basis, kind, &targets)?;
        let mut worst = 0.0f64;
        for (i, target) in targets.iter().enumerate() {
            worst = worst.max(holonomy(&connection, basis.generator(i))?.distance(target)?);
        }
        results.push(report::residual(
            &format!("{label}-holonomy-residual"),
            worst,
            tolerance,
        ));
        connections.insert(
            label.to_string(),
            serde_json::to_value(connection_to_json(&connection))?,
        );
    }
    let table = Value::Object(connections);
    let inputs = inputs_value(
        "interpolate",
        &[("graph", graph_raw), ("seed", common.seed.into())],
    );
    report::finish(
        "interpolate",
        &inputs,
        common.seed,
        Some(table.clone()),
        results,
        common.out.as_deref(),
        Some(&table),
        started,
    )
}

fn cmd_holonomy(
    graph_path: &Path,
    word_path: &Path,
    connection_path: &Path,
    common: &CommonArgs,
    started: Instant,
) -> Result<i32> {
    let (graph_json, graph_raw) = load::<GraphJson>(graph_path, "graph")?;
    let (word_json, word_raw) = load::<WordJson>(word_path, "word")?;
    let (connection_json, connection_raw) = load::<ConnectionJson>(connection_path, "connection")?;
    let graph = graph_from_json(&graph_json)?;
    let word = word_from_json(&graph, &word_json)?;
    let connection = connection_from_json(&graph, &connection_json)?;
    let element = holonomy(&connection, &word)?;
    let tolerance = common.tol.unwrap_or(UNITARITY_TOL);

    // Holonomy must not see inserted retracings: splice some in and fold
    // the raw, unreduced steps.
    let mut r = rng(common.seed);
    let padded = insert_retracings(&mut r, &graph, &word, 3);
    let retracing_residual = holonomy_steps(&connection, &padded)?.distance(&element)?;

    let mut results = vec![report::residual(
        "retracing-residual",
        retracing_residual,
        tolerance,
    )];
    let mut table = serde_json::Map::new();
    match element.angle() {
        Some(angle) => {
            results.push(report::info("angle", angle));
            table.insert("angle".to_string(), angle.into());
        }
        None => {
            let m = element.matrix().expect("SU(2) holonomy carries a matrix");
            table.insert(
                "matrix".to_string(),
                json!([
                    [m[(0, 0)].re, m[(0, 0)].im],
                    [m[(0, 1)].re, m[(0, 1)].im],
                    [m[(1, 0)].re, m[(1, 0)].im],
                    [m[(1, 1)].re, m[(1, 1)].im],
                ]),
            );
        }
    }
    if word.is_loop() {
        let value = wilson(&connection, &word)?;
        results.push(report::info("wilson-re", value.re));
        results.push(report::info("wilson-im", value.im));
        table.insert("wilson".to_string(), json!([value.re, value.im]));
    }
    let table = Value::Object(table);
    let inputs = inputs_value(
        "holonomy",
        &[
            ("graph", graph_raw),
            ("word", word_raw),
            ("connection", connection_raw),
        ],
    );
    report::finish(
        "holonomy",
        &inputs,
        common.seed,
        Some(table.clone()),
        results,
        common.out.as_deref(),
        Some(&table),
        started,
    )
}

/// Shared tail for the pure sweep subcommands.
fn cmd_sweep(
    command: &str,
    args: &SweepArgs,
    sweep: CriterionReport,
    started: Instant,
) -> Result<i32> {
    let inputs = inputs_value(
        command,
        &[
            ("seed", args.common.seed.into()),
            ("trials", args.trials.into()),
        ],
    );
    let table = serde_json::to_value(&sweep)?;
    report::finish(
        command,
        &inputs,
        args.common.seed,
        None,
        flatten(&[sweep]),
        args.common.out.as_deref(),
        Some(&table),
        started,
    )
}

fn cmd_transform(
    graph_path: &Path,
    level_path: &Path,
    poly_path: &Path,
    common: &CommonArgs,
    started: Instant,
) -> Result<i32> {
    let (graph_json, graph_raw) = load::<GraphJson>(graph_path, "graph")?;
    let (level_json, level_raw) = load::<LevelJson>(level_path, "level")?;
    let (poly_json, poly_raw) = load::<TrigPolyJson>(poly_path, "poly")?;
    let graph = graph_from_json(&graph_json)?;
    let basis = spanning_tree_generators(&graph);
    let psi = cylinder_from_json(&CylinderJson {
        level: level_json,
        poly: poly_json,
    })?;
    let state = loop_transform(&psi, &basis)?;
    let tolerance = common.tol.unwrap_or(UNITARITY_TOL);
    let table = serde_json::to_value(loop_state_to_json(&state))?;
    let inputs = inputs_value(
        "transform",
        &[
            ("graph", graph_raw),
            ("level", level_raw),
            ("poly", poly_raw),
        ],
    );
    report::finish(
        "transform",
        &inputs,
        common.seed,
        Some(table.clone()),
        vec![
            report::residual(
                "norm-preservation-residual",
                (state.norm() - psi.norm()).abs(),
                tolerance,
            ),
            report::info("support-size", state.support_size() as f64),
        ],
        common.out.as_deref(),
        Some(&table),
        started,
    )
}

fn cmd_inverse_transform(state_path: &Path, common: &CommonArgs, started: Instant) -> Result<i32> {
    let (state_json, state_raw) = load::<LoopStateJson>(state_path, "state")?;
    let state = looptx::json::loop_state_from_json(&state_json)?;
    let psi = inverse_transform(&state)?;
    let tolerance = common.tol.unwrap_or(UNITARITY_TOL);
    let table = serde_json::to_value(cylinder_to_json(&psi))?;
    let inputs = inputs_value("inverse-transform", &[("state", state_raw)]);
    report::finish(
        "inverse-transform",
        &inputs,
        common.seed,
        Some(table.clone()),
        vec![
            report::residual(
                "norm-preservation-residual",
                (psi.norm() - state.norm()).abs(),
                tolerance,
            ),
            report::info("level-rank", psi.level().rank() as f64),
        ],
        common.out.as_deref(),
        Some(&table),
        started,
    )
}

fn cmd_bochner_check(
    poly: Option<&Path>,
    grid: usize,
    sweep: &SweepArgs,
    started: Instant,
) -> Result<i32> {
    let Some(poly_path) = poly else {
        return cmd_sweep(
            "bochner-check",
            sweep,
            verify::bochner_sweep(sweep.common.seed, sweep.trials)?,
            started,
        );
    };
    let (density_json, density_raw) = load::<DensityJson>(poly_path, "density")?;
    let density = density_from_json(&density_json)?;
    let functional = functional_from_density(&density);
    let dim = density.dim();
    let floor = -sweep.common.tol.unwrap_or(PSD_TOL);

    // Pair windows {0, k} for every k in the support box: each probes one
    // frequency of the functional against the total mass.
    let mut bounds = vec![(0i64, 0i64); dim];
    for key in functional.values().keys() {
        for (axis, &k) in key.iter().enumerate() {
            bounds[axis].0 = bounds[axis].0.min(k).max(-8);
            bounds[axis].1 = bounds[axis].1.max(k).min(8);
        }
    }
    let mut min_eigenvalue = psd_test(&functional, &[vec![0; dim]])?;
    let mut box_points: Vec<Vec<i64>> = vec![vec![]];
    for &(low, high) in &bounds {
        box_points = box_points
            .into_iter()
            .flat_map(|prefix| {
                (low..=high).map(move |k| {
                    let mut point = prefix.clone();
                    point.push(k);
                    point
                })
            })
            .collect();
    }
    for point in &box_points {
        if point.iter().all(|&k| k == 0) {
            continue;
        }
        let window = vec![vec![0; dim], point.clone()];
        min_eigenvalue = min_eigenvalue.min(psd_test(&functional, &window)?);
    }

    let grid_sizes = vec![grid; dim];
    let grid_min = grid_positivity_test(&density, &grid_sizes)?;

    // Density samples as the data table (rows capped for huge grids).
    let total: usize = grid_sizes.iter().product();
    let mut samples = Vec::new();
    if total <= 100_000 {
        let tau = std::f64::consts::TAU;
        let mut index = vec![0usize; dim];
        for flat in 0..total {
            let mut rest = flat;
            for axis in (0..dim).rev() {
                index[axis] = rest % grid_sizes[axis];
                rest /= grid_sizes[axis];
            }
            let theta: Vec<f64> = (0..dim)
                .map(|a| tau * index[a] as f64 / grid_sizes[a] as f64)
                .collect();
            let value = density.poly().eval_at(&theta)?.re;
            samples.push(json!({"theta": theta, "value": value}));
        }
    }
    let table = json!({
        "min_eigenvalue": min_eigenvalue,
        "grid_min": grid_min,
        "samples": samples,
    });
    let inputs = inputs_value(
        "bochner-check",
        &[("poly", density_raw), ("grid", grid.into())],
    );
    report::finish(
        "bochner-check",
        &inputs,
        sweep.common.seed,
        Some(json!({"min_eigenvalue": min_eigenvalue, "grid_min": grid_min})),
        vec![
            report::at_least("pair-window-min-eigenvalue", min_eigenvalue, floor),
            report::at_least("grid-min", grid_min, floor),
        ],
        sweep.common.out.as_deref(),
        Some(&table),
        started,
    )
}

fn cmd_fft_crosscheck(
    poly: Option<&Path>,
    grid: usize,
    sweep: &SweepArgs,
    started: Instant,
) -> Result<i32> {
    let Some(poly_path) = poly else {
        return cmd_sweep(
            "fft-crosscheck",
            sweep,
            verify::fourier_sweep(sweep.common.seed, (sweep.trials / 2).max(1), sweep.trials)?,
            started,
        );
    };
    let (poly_json, poly_raw) = load::<TrigPolyJson>(poly_path, "poly")?;
    let poly = poly_from_json(&poly_json)?;
    let grid_sizes = vec![grid; poly.dim()];
    let sampled = fft_oracle(&poly, &grid_sizes)?;
    let residual = sampled.max_distance(&poly.fourier())?;
    let tolerance = sweep.common.tol.unwrap_or(FFT_TOL);
    let coeffs: Vec<Value> = sampled
        .values()
        .iter()
        .map(|(k, c)| json!({"k": k, "re": c.re, "im": c.im}))
        .collect();
    let table = json!({"residual": residual, "coeffs": coeffs});
    let inputs = inputs_value(
        "fft-crosscheck",
        &[("poly", poly_raw), ("grid", grid.into())],
    );
    report::finish(
        "fft-crosscheck",
        &inputs,
        sweep.common.seed,
        Some(json!({"residual": residual})),
        vec![report::residual("fft-coefficient-residual", residual, tolerance)],
        sweep.common.out.as_deref(),
        Some(&table),
        started,
    )
}

fn cmd_path_transform(
    graph: Option<&Path>,
    level: Option<&Path>,
    poly: Option<&Path>,
    sweep: &SweepArgs,
    started: Instant,
) -> Result<i32> {
    match (graph, level, poly) {
        (None, None, None) => cmd_sweep(
            "path-transform",
            sweep,
            verify::path_sweep(sweep.common.seed, sweep.trials)?,
            started,
        ),
        (Some(graph_path), Some(level_path), Some(poly_path)) => {
            let (graph_json, graph_raw) = load::<GraphJson>(graph_path, "graph")?;
            let (level_json, level_raw) = load::<LevelJson>(level_path, "level")?;
            let (poly_json, poly_raw) = load::<TrigPolyJson>(poly_path, "poly")?;
            let graph = graph_from_json(&graph_json)?;
            let psi = CylinderFunction::new(
                level_from_json(&level_json)?,
                poly_from_json(&poly_json)?,
            )?;
            let state = path_transform(&psi, &graph)?;
            let tolerance = sweep.common.tol.unwrap_or(UNITARITY_TOL);
            let table = serde_json::to_value(loop_state_to_json(&state))?;
            let inputs = inputs_value(
                "path-transform",
                &[
                    ("graph", graph_raw),
                    ("level", level_raw),
                    ("poly", poly_raw),
                ],
            );
            report::finish(
                "path-transform",
                &inputs,
                sweep.common.seed,
                Some(table.clone()),
                vec![report::residual(
                    "norm-preservation-residual",
                    (state.norm() - psi.norm()).abs(),
                    tolerance,
                )],
                sweep.common.out.as_deref(),
                Some(&table),
                started,
            )
        }
        _ => bail!("path-transform needs either no inputs (sweep mode) or all of --graph, --level, and --poly"),
    }
}

fn cmd_selftest(common: &CommonArgs, started: Instant) -> Result<i32> {
    let reports = verify::selftest(common.seed)?;
    let inputs = inputs_value("selftest", &[("seed", common.seed.into())]);
    let table = serde_json::to_value(&reports)?;
    report::finish(
        "selftest",
        &inputs,
        common.seed,
        None,
        flatten(&reports),
        common.out.as_deref(),
        Some(&table),
        started,
    )
}
