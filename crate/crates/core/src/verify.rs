//! Randomized end-to-end verification sweeps.
//!
//! Each sweep draws its inputs from a seeded stream ([`crate::sample`]),
//! exercises one mathematical guarantee across many random instances, and
//! reports the worst residual it saw next to the tolerance it was held
//! to. The command-line driver exposes each sweep as a subcommand and all
//! of them together as `selftest`; the acceptance test suite runs the
//! same functions with the same trial counts.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::basis::{path_abelianize, spanning_tree_generators};
use crate::error::Result;
use crate::harmonics::fft_oracle;
use crate::holonomy::{holonomy, interpolate, mandelstam_check, wilson, GroupElement, GroupKind};
use crate::levels::{refinement_matrix, Level, RefinementMatrix};
use crate::positivity::{
    density_from_functional, functional_from_density, grid_positivity_test, psd_test,
    MeasureDensity,
};
use crate::sample::{
    balanced_rows, insert_retracings, random_connection, random_cylinder, random_graph,
    random_group_element, random_level, random_loop, random_loop_state, random_refinement,
    random_trig_poly, rng, unbalanced_rows, word_from_rows,
};
use crate::transform::{
    cylinder_inner_product, include_function, inverse_transform, loop_transform, path_transform,
    verify_diagram, CylinderFunction,
};

/// Residual bound for unitarity of the transform.
pub const UNITARITY_TOL: f64 = 1e-12;
/// Residual bound for inclusion isometry and diagram commutation.
pub const INCLUSION_TOL: f64 = 1e-12;
/// Holonomy-triviality bound for kernel words.
pub const KERNEL_HOLONOMY_TOL: f64 = 1e-10;
/// A witnessing connection must move the holonomy at least this far from 1.
pub const WITNESS_MARGIN: f64 = 0.1;
/// Residual bound for holonomy interpolation.
pub const INTERPOLATION_TOL: f64 = 1e-12;
/// Residual bound for the trace identity sweep.
pub const MANDELSTAM_TOL: f64 = 1e-10;
/// Agreement bound between sampled FFT coefficients and exact ones.
pub const FFT_TOL: f64 = 1e-9;
/// Residual bound for the two-path inner-product (Parseval) check.
pub const PARSEVAL_TOL: f64 = 1e-12;
/// Eigenvalue floor for positive-semidefinite Gram matrices.
pub const PSD_TOL: f64 = 1e-9;
/// Equivalence bound for transform round trips after refinement.
pub const ROUND_TRIP_TOL: f64 = 1e-12;
/// Residual bound for loop/path transform agreement.
pub const PATH_TOL: f64 = 1e-12;
/// Grid fine enough that a dimension-one density's true extremum is seen
/// to within 1e-9 (odd grids never sample θ = π itself, so the sampling
/// gap must be pushed under the tolerance).
pub const EXTREMUM_GRID: usize = 100_001;

/// One named measurement inside a sweep, with the bound it was held to.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckOutcome {
    /// A residual-style check: passes when `value ≤ tolerance`.
    fn residual(name: &str, value: f64, tolerance: f64) -> Self {
        CheckOutcome {
            name: name.to_string(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }

    /// A floor-style check: passes when `value ≥ tolerance`.
    fn at_least(name: &str, value: f64, tolerance: f64) -> Self {
        CheckOutcome {
            name: name.to_string(),
            value,
            tolerance,
            pass: value >= tolerance,
        }
    }

    /// A counter of hard violations: passes when none occurred.
    fn violations(name: &str, count: usize) -> Self {
        CheckOutcome {
            name: name.to_string(),
            value: count as f64,
            tolerance: 0.0,
            pass: count == 0,
        }
    }
}

/// The outcome of one sweep: its checks, and the overall verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionReport {
    pub name: String,
    pub trials: usize,
    pub checks: Vec<CheckOutcome>,
    pub pass: bool,
}

impl CriterionReport {
    fn new(name: &str, trials: usize, checks: Vec<CheckOutcome>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        CriterionReport {
            name: name.to_string(),
            trials,
            checks,
            pass,
        }
    }
}

/// Unitarity: transforming two cylinder functions never changes their
/// inner product.
pub fn unitarity_sweep(seed: u64, trials: usize) -> Result<CriterionReport> {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let graph = random_graph(&mut r, 10);
        let basis = spanning_tree_generators(&graph);
        let psi = random_cylinder(&mut r, basis.rank());
        let phi = random_cylinder(&mut r, basis.rank());
        let direct = cylinder_inner_product(&psi, &phi)?;
        let through = loop_transform(&psi, &basis)?.inner_product(&loop_transform(&phi, &basis)?)?;
        worst = worst.max((direct - through).norm());
    }
    Ok(CriterionReport::new(
        "transform-unitarity",
        trials,
        vec![CheckOutcome::residual(
            "inner-product-residual",
            worst,
            UNITARITY_TOL,
        )],
    ))
}

/// Inclusions between levels preserve norms, commute with reading off
/// coefficients, and compose exactly along chains of refinements.
pub fn inclusion_sweep(seed: u64, trials: usize, chains: usize) -> Result<CriterionReport> {
    let mut r = rng(seed);
    let mut worst_isometry = 0.0f64;
    let mut worst_diagram = 0.0f64;
    for _ in 0..trials {
        let ambient = r.random_range(1..=3);
        let psi = random_cylinder(&mut r, ambient);
        let (fine, _) = random_refinement(&mut r, psi.level());
        let included = include_function(&psi, &fine)?;
        worst_isometry = worst_isometry.max((included.norm() - psi.norm()).abs());
        worst_diagram = worst_diagram.max(verify_diagram(&psi, &fine)?);
    }
    let mut chain_mismatches = 0usize;
    for _ in 0..chains {
        let ambient = r.random_range(1..=3);
        let base = random_level(&mut r, ambient);
        let (mid, step_one) = random_refinement(&mut r, &base);
        let (top, step_two) = random_refinement(&mut r, &mid);
        let direct = refinement_matrix(&base, &top)?
            .expect("the top level refines the base level transitively");
        let composed = step_two.compose(&step_one)?;
        if direct.entries() != composed.entries() {
            chain_mismatches += 1;
        }
    }
    Ok(CriterionReport::new(
        "inclusion-isometry",
        trials + chains,
        vec![
            CheckOutcome::residual("isometry-residual", worst_isometry, INCLUSION_TOL),
            CheckOutcome::residual("diagram-residual", worst_diagram, INCLUSION_TOL),
            CheckOutcome::violations("chain-composition-mismatches", chain_mismatches),
        ],
    ))
}

/// Kernel characterization: words whose exponent rows all balance to zero
/// have trivial holonomy under every connection; any unbalanced word is
/// caught by the test and by an explicit witnessing connection.
pub fn kernel_sweep(
    seed: u64,
    words_per_class: usize,
    connections_per_word: usize,
) -> Result<CriterionReport> {
    let mut r = rng(seed);
    let mut balanced_failures = 0usize;
    let mut worst_holonomy = 0.0f64;
    for _ in 0..words_per_class {
        let graph = random_graph(&mut r, 8);
        let basis = spanning_tree_generators(&graph);
        let word = word_from_rows(&graph, &basis, &balanced_rows(&mut r, basis.rank(), 4));
        if !basis.kernel_test(&word)? {
            balanced_failures += 1;
        }
        for _ in 0..connections_per_word {
            let connection = random_connection(&mut r, &graph, GroupKind::U1);
            let value = wilson(&connection, &word)?;
            worst_holonomy = worst_holonomy.max((value - Complex64::ONE).norm());
        }
    }
    let mut unbalanced_misses = 0usize;
    let mut weakest_witness = f64::INFINITY;
    for _ in 0..words_per_class {
        let graph = random_graph(&mut r, 8);
        let basis = spanning_tree_generators(&graph);
        let word = word_from_rows(&graph, &basis, &unbalanced_rows(&mut r, basis.rank(), 4));
        if basis.kernel_test(&word)? {
            unbalanced_misses += 1;
            continue;
        }
        // An explicit witness: aim the one unbalanced generator at angle
        // π divided by its net exponent, so the word's holonomy lands at -1.
        let exponents = basis.abelianize(&word)?;
        let pivot = exponents
            .iter()
            .position(|&q| q != 0)
            .expect("the word failed the kernel test, so some exponent is nonzero");
        let mut targets = vec![GroupElement::identity(GroupKind::U1); basis.rank()];
        targets[pivot] = GroupElement::u1(std::f64::consts::PI / exponents[pivot] as f64);
        let connection = interpolate(&graph, &basis, GroupKind::U1, &targets)?;
        let gap = (wilson(&connection, &word)? - Complex64::ONE).norm();
        weakest_witness = weakest_witness.min(gap);
    }
    Ok(CriterionReport::new(
        "kernel-characterization",
        2 * words_per_class,
        vec![
            CheckOutcome::violations("balanced-words-failing-kernel-test", balanced_failures),
            CheckOutcome::residual(
                "balanced-holonomy-residual",
                worst_holonomy,
                KERNEL_HOLONOMY_TOL,
            ),
            CheckOutcome::violations("unbalanced-words-passing-kernel-test", unbalanced_misses),
            CheckOutcome::at_least("witness-holonomy-gap", weakest_witness, WITNESS_MARGIN),
        ],
    ))
}

/// Interpolation: a connection realizing any prescribed generator
/// holonomies exists and is found exactly.
pub fn interpolation_sweep(seed: u64, trials_per_group: usize) -> Result<CriterionReport> {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for kind in [GroupKind::U1, GroupKind::Su2] {
        for _ in 0..trials_per_group {
            let graph = random_graph(&mut r, 10);
            let basis = spanning_tree_generators(&graph);
            let targets: Vec<GroupElement> = (0..basis.rank())
                .map(|_| random_group_element(&mut r, kind))
                .collect();
            let connection = interpolate(&graph, &basis, kind, &targets)?;
            for (i, target) in targets.iter().enumerate() {
                let achieved = holonomy(&connection, basis.generator(i))?;
                worst = worst.max(achieved.distance(target)?);
            }
        }
    }
    Ok(CriterionReport::new(
        "interpolation",
        2 * trials_per_group,
        vec![CheckOutcome::residual(
            "holonomy-target-residual",
            worst,
            INTERPOLATION_TOL,
        )],
    ))
}

/// The SU(2) trace identity `2·T_α·T_β = T_{αβ} + T_{αβ⁻¹}` across random
/// connections and loop pairs, plus invariance of holonomy under inserted
/// retracings.
pub fn mandelstam_sweep(seed: u64, trials: usize) -> Result<CriterionReport> {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    let mut worst_retracing = 0.0f64;
    for _ in 0..trials {
        let graph = random_graph(&mut r, 8);
        let basis = spanning_tree_generators(&graph);
        let connection = random_connection(&mut r, &graph, GroupKind::Su2);
        let alpha = random_loop(&mut r, &graph, &basis, 5);
        let beta = random_loop(&mut r, &graph, &basis, 5);
        worst = worst.max(mandelstam_check(&connection, &alpha, &beta)?);
        let padded = insert_retracings(&mut r, &graph, &alpha, 2);
        let raw = crate::holonomy::holonomy_steps(&connection, &padded)?;
        worst_retracing = worst_retracing.max(raw.distance(&holonomy(&connection, &alpha)?)?);
    }
    Ok(CriterionReport::new(
        "mandelstam",
        trials,
        vec![
            CheckOutcome::residual("trace-identity-residual", worst, MANDELSTAM_TOL),
            CheckOutcome::residual("retracing-residual", worst_retracing, MANDELSTAM_TOL),
        ],
    ))
}

/// Fourier correctness: sampled-grid FFT coefficients agree with the exact
/// sparse coefficients, and inner products agree between the function side
/// and the coefficient side when the coefficients come from the FFT.
pub fn fourier_sweep(seed: u64, polys: usize, pairs: usize) -> Result<CriterionReport> {
    let mut r = rng(seed);
    let mut worst_fft = 0.0f64;
    for _ in 0..polys {
        let dim = r.random_range(1..=3);
        let poly = random_trig_poly(&mut r, dim, 5, 6);
        let grid: Vec<usize> = (0..dim)
            .map(|_| [11, 13, 15][r.random_range(0..3)])
            .collect();
        let sampled = fft_oracle(&poly, &grid)?;
        worst_fft = worst_fft.max(sampled.max_distance(&poly.fourier())?);
    }
    let mut worst_parseval = 0.0f64;
    for _ in 0..pairs {
        let dim = r.random_range(1..=2);
        let p = random_trig_poly(&mut r, dim, 5, 6);
        let q = random_trig_poly(&mut r, dim, 5, 6);
        let grid = vec![21usize; dim];
        let through_fft = fft_oracle(&p, &grid)?.inner_product(&fft_oracle(&q, &grid)?)?;
        let direct = p.inner_product(&q)?;
        worst_parseval = worst_parseval.max((through_fft - direct).norm());
    }
    Ok(CriterionReport::new(
        "fourier",
        polys + pairs,
        vec![
            CheckOutcome::residual("fft-coefficient-residual", worst_fft, FFT_TOL),
            CheckOutcome::residual("parseval-residual", worst_parseval, PARSEVAL_TOL),
        ],
    ))
}

/// The measure ↔ functional correspondence: exact round trips, squared
/// densities pass every positivity probe, and the canonical signed
/// density is flagged by both probes with the predicted margins.
pub fn bochner_sweep(seed: u64, densities: usize) -> Result<CriterionReport> {
    let mut r = rng(seed);
    let mut round_trip_failures = 0usize;
    let mut worst_eigenvalue = f64::INFINITY;
    let mut worst_grid_min = f64::INFINITY;
    for _ in 0..densities {
        let dim = r.random_range(1..=2);
        let q = random_trig_poly(&mut r, dim, 3, 4);
        let density = MeasureDensity::modulus_squared(&q);
        let functional = functional_from_density(&density);
        if density_from_functional(&functional)? != density {
            round_trip_failures += 1;
        }
        for _ in 0..3 {
            let size = r.random_range(1..=5);
            let window: Vec<Vec<i64>> = (0..size)
                .map(|_| (0..dim).map(|_| r.random_range(-6..=6)).collect())
                .collect();
            worst_eigenvalue = worst_eigenvalue.min(psd_test(&functional, &window)?);
        }
        worst_grid_min = worst_grid_min.min(grid_positivity_test(&density, &vec![13usize; dim])?);
    }

    // The signed density 2cosθ must be caught by both probes: the {0,1}
    // window's Gram matrix has eigenvalues ±1, and the function's true
    // minimum is -2.
    let cosine = MeasureDensity::new(
        crate::harmonics::TrigPoly::from_coeffs(
            1,
            vec![
                (vec![1], Complex64::ONE),
                (vec![-1], Complex64::ONE),
            ],
        )?,
    )?;
    let signed_eig = psd_test(&functional_from_density(&cosine), &[vec![0], vec![1]])?;
    let signed_min = grid_positivity_test(&cosine, &[EXTREMUM_GRID])?;

    Ok(CriterionReport::new(
        "bochner",
        densities,
        vec![
            CheckOutcome::violations("round-trip-failures", round_trip_failures),
            CheckOutcome::at_least("squared-density-min-eigenvalue", worst_eigenvalue, -PSD_TOL),
            CheckOutcome::at_least("squared-density-grid-min", worst_grid_min, -PSD_TOL),
            CheckOutcome::residual("signed-density-eigenvalue-error", (signed_eig + 1.0).abs(), PSD_TOL),
            CheckOutcome::residual("signed-density-grid-min-error", (signed_min + 2.0).abs(), PSD_TOL),
        ],
    ))
}

/// Round trips of the transform: recovering a state from its inverse
/// transform is exact, and transforming back a transformed function lands
/// in the same equivalence class after refinement.
pub fn round_trip_sweep(seed: u64, states: usize, cylinders: usize) -> Result<CriterionReport> {
    let mut r = rng(seed);
    let mut worst_state = 0.0f64;
    for _ in 0..states {
        let graph = random_graph(&mut r, 8);
        let basis = spanning_tree_generators(&graph);
        let state = random_loop_state(&mut r, basis.rank(), 5);
        let back = loop_transform(&inverse_transform(&state)?, &basis)?;
        worst_state = worst_state.max(back.max_distance(&state)?);
    }
    let mut inequivalent = 0usize;
    for _ in 0..cylinders {
        let graph = random_graph(&mut r, 8);
        let basis = spanning_tree_generators(&graph);
        let psi = random_cylinder(&mut r, basis.rank());
        let recovered = inverse_transform(&loop_transform(&psi, &basis)?)?;
        if !psi.equivalent(&recovered, ROUND_TRIP_TOL)? {
            inequivalent += 1;
        }
    }
    Ok(CriterionReport::new(
        "round-trips",
        states + cylinders,
        vec![
            CheckOutcome::residual("state-round-trip-residual", worst_state, 0.0),
            CheckOutcome::violations("function-round-trip-failures", inequivalent),
        ],
    ))
}

/// Path-side consistency: edge exponents factor through loop exponents,
/// balanced words have zero net edge traversal, and the path transform
/// agrees with the loop transform pushed through the edge-exponent matrix.
pub fn path_sweep(seed: u64, trials: usize) -> Result<CriterionReport> {
    let mut r = rng(seed);
    let mut factoring_failures = 0usize;
    let mut kernel_failures = 0usize;
    let mut worst_agreement = 0.0f64;
    for _ in 0..trials {
        let graph = random_graph(&mut r, 8);
        let basis = spanning_tree_generators(&graph);
        let matrix = RefinementMatrix::new(basis.edge_exponent_rows(&graph), basis.rank())?;

        let word = random_loop(&mut r, &graph, &basis, 6);
        let through_loops = matrix.apply(&basis.abelianize(&word)?)?;
        if through_loops != path_abelianize(&graph, &word) {
            factoring_failures += 1;
        }

        let balanced = word_from_rows(&graph, &basis, &balanced_rows(&mut r, basis.rank(), 4));
        if path_abelianize(&graph, &balanced).iter().any(|&e| e != 0) {
            kernel_failures += 1;
        }

        let psi = random_cylinder(&mut r, basis.rank());
        let pushed = loop_transform(&psi, &basis)?.pushforward(&matrix)?;
        let edge_basis: Vec<Vec<i64>> = psi
            .level()
            .basis()
            .iter()
            .map(|row| matrix.apply(row))
            .collect::<Result<_>>()?;
        let on_edges = CylinderFunction::new(
            Level::new(graph.edge_count(), edge_basis)?,
            psi.poly().clone(),
        )?;
        worst_agreement = worst_agreement.max(path_transform(&on_edges, &graph)?.max_distance(&pushed)?);
    }
    Ok(CriterionReport::new(
        "path-consistency",
        trials,
        vec![
            CheckOutcome::violations("edge-exponent-factoring-failures", factoring_failures),
            CheckOutcome::violations("balanced-word-edge-kernel-failures", kernel_failures),
            CheckOutcome::residual("transform-agreement-residual", worst_agreement, PATH_TOL),
        ],
    ))
}

/// Every sweep at full acceptance trial counts, each drawing from its own
/// deterministic offset of the seed.
pub fn selftest(seed: u64) -> Result<Vec<CriterionReport>> {
    Ok(vec![
        unitarity_sweep(seed, 1000)?,
        inclusion_sweep(seed.wrapping_add(1), 1000, 200)?,
        kernel_sweep(seed.wrapping_add(2), 500, 100)?,
        interpolation_sweep(seed.wrapping_add(3), 500)?,
        mandelstam_sweep(seed.wrapping_add(4), 1000)?,
        fourier_sweep(seed.wrapping_add(5), 500, 1000)?,
        bochner_sweep(seed.wrapping_add(6), 500)?,
        round_trip_sweep(seed.wrapping_add(7), 500, 500)?,
        path_sweep(seed.wrapping_add(8), 300)?,
    ])
}
