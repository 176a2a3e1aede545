//! Seeded random generators for every object in the crate.
//!
//! All sampling goes through a [`ChaCha8Rng`] created by [`rng`], so a
//! seed pins the entire input stream of a verification sweep: the same
//! seed replays the same graphs, words, connections, and functions on
//! any platform.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::basis::GeneratorBasis;
use crate::graph::Graph;
use crate::harmonics::TrigPoly;
use crate::holonomy::{Connection, GroupElement, GroupKind};
use crate::levels::{join_levels, level_from_generators, refinement_matrix, Level, RefinementMatrix};
use crate::transform::{CylinderFunction, LoopState};
use crate::word::{Step, Word};

/// The deterministic generator behind all sampling helpers.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonzero magnitude in `[0.1, 1.1)` with random sign — large enough
/// that arithmetic never drops it as numerical noise.
fn solid(rng: &mut ChaCha8Rng) -> f64 {
    let magnitude = rng.random_range(0.1..1.1);
    if rng.random::<bool>() {
        magnitude
    } else {
        -magnitude
    }
}

fn solid_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(solid(rng), solid(rng))
}

/// A random connected graph with between 1 and 4 vertices and at most
/// `max_edges` edges (at least one beyond a spanning tree, so the loop
/// group is never trivial). Vertices are `v0, v1, …`; edges `e0, e1, …`.
///
/// # Panics
/// Panics if `max_edges` is 0.
pub fn random_graph(rng: &mut ChaCha8Rng, max_edges: usize) -> Graph {
    assert!(max_edges >= 1, "a graph with no edges has no loops");
    let vertex_count = rng.random_range(1..=4.min(max_edges));
    let vertices: Vec<String> = (0..vertex_count).map(|i| format!("v{i}")).collect();
    let mut edges: Vec<(String, String, String)> = Vec::new();
    // Spanning tree: each later vertex hooks onto a random earlier one,
    // with a random direction.
    for i in 1..vertex_count {
        let parent = rng.random_range(0..i);
        let (from, to) = if rng.random::<bool>() {
            (parent, i)
        } else {
            (i, parent)
        };
        edges.push((format!("e{}", edges.len()), format!("v{from}"), format!("v{to}")));
    }
    let extra = rng.random_range(1..=max_edges - (vertex_count - 1));
    for _ in 0..extra {
        let a = rng.random_range(0..vertex_count);
        let b = rng.random_range(0..vertex_count);
        edges.push((format!("e{}", edges.len()), format!("v{a}"), format!("v{b}")));
    }
    Graph::new(vertices, "v0", edges).expect("construction is connected by design")
}

/// A random based loop: a product of 1 to `max_letters` generator letters
/// (the word may reduce, occasionally all the way to the constant loop).
pub fn random_loop(
    rng: &mut ChaCha8Rng,
    graph: &Graph,
    basis: &GeneratorBasis,
    max_letters: usize,
) -> Word {
    let mut word = Word::constant(graph);
    for _ in 0..rng.random_range(1..=max_letters) {
        let generator = basis.generator(rng.random_range(0..basis.rank()));
        let letter = if rng.random::<bool>() {
            generator.clone()
        } else {
            generator.invert()
        };
        word = word.compose(&letter, graph).expect("loops share the base");
    }
    word
}

/// The word's steps with `count` immediate retracings `s·s⁻¹` spliced in
/// at random positions — an unreduced traversal of the same loop. The
/// result deliberately bypasses [`Word`] so callers can feed raw step
/// sequences to holonomy evaluation.
pub fn insert_retracings(
    rng: &mut ChaCha8Rng,
    graph: &Graph,
    word: &Word,
    count: usize,
) -> Vec<Step> {
    let mut steps = word.steps().to_vec();
    let start = word.start();
    for _ in 0..count {
        let position = rng.random_range(0..=steps.len());
        let vertex = if position == 0 {
            start
        } else {
            steps[position - 1].target(graph)
        };
        let incident: Vec<Step> = (0..graph.edge_count())
            .flat_map(|e| [Step::forward(e), Step::reverse(e)])
            .filter(|s| s.source(graph) == vertex)
            .collect();
        let spur = incident[rng.random_range(0..incident.len())];
        steps.insert(position, spur.inverse());
        steps.insert(position, spur);
    }
    steps
}

/// A uniformly random U(1) element.
pub fn random_u1(rng: &mut ChaCha8Rng) -> GroupElement {
    GroupElement::u1(rng.random_range(0.0..std::f64::consts::TAU))
}

/// A Haar-random SU(2) element (normalized Gaussian quaternion).
pub fn random_su2(rng: &mut ChaCha8Rng) -> GroupElement {
    loop {
        let draw = |rng: &mut ChaCha8Rng| -> f64 { rng.sample(StandardNormal) };
        let a = Complex64::new(draw(rng), draw(rng));
        let b = Complex64::new(draw(rng), draw(rng));
        if let Ok(element) = GroupElement::su2_from_quaternion(a, b) {
            return element;
        }
    }
}

pub fn random_group_element(rng: &mut ChaCha8Rng, kind: GroupKind) -> GroupElement {
    match kind {
        GroupKind::U1 => random_u1(rng),
        GroupKind::Su2 => random_su2(rng),
    }
}

/// A connection assigning an independent random element to every edge.
pub fn random_connection(rng: &mut ChaCha8Rng, graph: &Graph, kind: GroupKind) -> Connection {
    let elements = (0..graph.edge_count())
        .map(|_| random_group_element(rng, kind))
        .collect();
    Connection::new(graph, kind, elements).expect("arity and kinds match by construction")
}

/// A random trigonometric polynomial with 1 to `max_terms` coefficients
/// supported in the box `[-max_freq, max_freq]^dim`, every coefficient
/// of solid magnitude.
pub fn random_trig_poly(
    rng: &mut ChaCha8Rng,
    dim: usize,
    max_freq: i64,
    max_terms: usize,
) -> TrigPoly {
    let terms = rng.random_range(1..=max_terms);
    let entries: Vec<(Vec<i64>, Complex64)> = (0..terms)
        .map(|_| {
            let k: Vec<i64> = (0..dim)
                .map(|_| rng.random_range(-max_freq..=max_freq))
                .collect();
            (k, solid_complex(rng))
        })
        .collect();
    TrigPoly::from_coeffs(dim, entries).expect("keys have length dim by construction")
}

/// A random nontrivial level in `Z^ambient`, in canonical form.
pub fn random_level(rng: &mut ChaCha8Rng, ambient: usize) -> Level {
    assert!(ambient >= 1, "Z^0 has no nontrivial subgroups");
    loop {
        let count = rng.random_range(1..=ambient);
        let generators: Vec<Vec<i64>> = (0..count)
            .map(|_| (0..ambient).map(|_| rng.random_range(-3..=3)).collect())
            .collect();
        let level = level_from_generators(ambient, &generators)
            .expect("small entries cannot overflow");
        if level.rank() >= 1 {
            return level;
        }
    }
}

/// A level containing `coarse` (its join with an independent random
/// level), together with the refinement matrix of the inclusion.
pub fn random_refinement(rng: &mut ChaCha8Rng, coarse: &Level) -> (Level, RefinementMatrix) {
    let other = random_level(rng, coarse.ambient());
    let fine = join_levels(coarse, &other).expect("small entries cannot overflow");
    let matrix = refinement_matrix(coarse, &fine)
        .expect("small entries cannot overflow")
        .expect("a join contains both arguments");
    (fine, matrix)
}

/// A random cylinder function: a random level and a random polynomial in
/// its coordinates.
pub fn random_cylinder(rng: &mut ChaCha8Rng, ambient: usize) -> CylinderFunction {
    let level = random_level(rng, ambient);
    let poly = random_trig_poly(rng, level.rank(), 3, 4);
    CylinderFunction::new(level, poly).expect("polynomial built in the level's rank")
}

/// A random finitely supported state with 1 to `max_points` point masses
/// in the box `[-5, 5]^ambient`.
pub fn random_loop_state(rng: &mut ChaCha8Rng, ambient: usize, max_points: usize) -> LoopState {
    let points = rng.random_range(1..=max_points);
    let entries: Vec<(Vec<i64>, Complex64)> = (0..points)
        .map(|_| {
            let h: Vec<i64> = (0..ambient).map(|_| rng.random_range(-5..=5)).collect();
            (h, solid_complex(rng))
        })
        .collect();
    LoopState::new(ambient, entries).expect("keys have length ambient by construction")
}

/// A `rank × cols` exponent table whose rows all sum to zero — the shape
/// whose words land in the kernel of abelianization.
pub fn balanced_rows(rng: &mut ChaCha8Rng, rank: usize, cols: usize) -> Vec<Vec<i64>> {
    assert!(cols >= 2, "a single column cannot balance a nonzero row");
    (0..rank)
        .map(|_| {
            let mut row: Vec<i64> = (0..cols - 1).map(|_| rng.random_range(-2..=2)).collect();
            let sum: i64 = row.iter().sum();
            row.push(-sum);
            row
        })
        .collect()
}

/// A balanced table spoiled in one entry, so at least one row sum is
/// nonzero and the word escapes the kernel.
pub fn unbalanced_rows(rng: &mut ChaCha8Rng, rank: usize, cols: usize) -> Vec<Vec<i64>> {
    let mut rows = balanced_rows(rng, rank, cols);
    let row = rng.random_range(0..rank);
    let col = rng.random_range(0..cols);
    let delta = *[-2i64, -1, 1, 2]
        .get(rng.random_range(0..4))
        .expect("index in range");
    rows[row][col] += delta;
    rows
}

/// The interleaved product `Π_j Π_i βᵢ^{k[i][j]}` over an exponent table:
/// column by column, each generator raised to its entry. Row sums are
/// exactly the net exponents surviving abelianization.
pub fn word_from_rows(graph: &Graph, basis: &GeneratorBasis, rows: &[Vec<i64>]) -> Word {
    let cols = rows.first().map_or(0, Vec::len);
    let mut word = Word::constant(graph);
    for j in 0..cols {
        for (i, row) in rows.iter().enumerate() {
            let factor = basis
                .generator(i)
                .pow(row[j], graph)
                .expect("generators are closed words");
            word = word.compose(&factor, graph).expect("loops share the base");
        }
    }
    word
}
