//! Free generators of the loop group and its abelianization.
//!
//! A breadth-first spanning tree from the base vertex singles out one
//! generator per leftover edge ("chord"): run out along the tree, cross the
//! chord, run home along the tree. The loop group is free on these
//! generators, so every based loop decomposes uniquely as a reduced word in
//! them — read off by listing its chord crossings — and the abelianization
//! sends a loop to its vector of net chord exponents.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::word::{Orientation, Step, Word};

/// A reduced word in the generators of a [`GeneratorBasis`]; letter `i`
/// refers to the `i`-th generator.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GeneratorWord {
    letters: Vec<(usize, Orientation)>,
}

impl GeneratorWord {
    pub fn new(letters: Vec<(usize, Orientation)>) -> Self {
        // Same cancellation rule as edge words, applied to generator letters.
        let mut reduced: Vec<(usize, Orientation)> = Vec::with_capacity(letters.len());
        for letter in letters {
            match reduced.last() {
                Some(&(idx, orient)) if idx == letter.0 && orient != letter.1 => {
                    reduced.pop();
                }
                _ => reduced.push(letter),
            }
        }
        GeneratorWord { letters: reduced }
    }

    pub fn letters(&self) -> &[(usize, Orientation)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Spanning-tree data: the free generating set of the loop group together
/// with everything needed to rewrite loops in terms of it.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    tree_edges: Vec<usize>,
    chords: Vec<usize>,
    /// chord_position[e] = Some(i) iff edge e is the i-th chord.
    chord_position: Vec<Option<usize>>,
    generators: Vec<Word>,
}

/// Builds the generator basis from the breadth-first spanning tree rooted at
/// the base vertex, examining edges in declaration order. Both the tree and
/// the chord numbering are therefore deterministic for a given graph.
pub fn spanning_tree_generators(graph: &Graph) -> GeneratorBasis {
    let n_vertices = graph.vertex_count();
    let mut visited = vec![false; n_vertices];
    // Reduced tree path from the base to each vertex.
    let mut path_home: Vec<Vec<Step>> = vec![Vec::new(); n_vertices];
    let mut in_tree = vec![false; graph.edge_count()];

    visited[graph.base()] = true;
    let mut queue = VecDeque::from([graph.base()]);
    while let Some(v) = queue.pop_front() {
        for (idx, edge) in graph.edges().iter().enumerate() {
            let step = if edge.source() == v && !visited[edge.target()] {
                Step::forward(idx)
            } else if edge.target() == v && !visited[edge.source()] {
                Step::reverse(idx)
            } else {
                continue;
            };
            let next = step.target(graph);
            visited[next] = true;
            in_tree[idx] = true;
            let mut path = path_home[v].clone();
            path.push(step);
            path_home[next] = path;
            queue.push_back(next);
        }
    }

    let mut tree_edges = Vec::with_capacity(n_vertices.saturating_sub(1));
    let mut chords = Vec::new();
    let mut chord_position = vec![None; graph.edge_count()];
    let mut generators = Vec::new();
    for (idx, edge) in graph.edges().iter().enumerate() {
        if in_tree[idx] {
            tree_edges.push(idx);
            continue;
        }
        chord_position[idx] = Some(chords.len());
        chords.push(idx);
        // out along the tree, across the chord, home along the tree
        let mut steps = path_home[edge.source()].clone();
        steps.push(Step::forward(idx));
        steps.extend(path_home[edge.target()].iter().rev().map(|s| s.inverse()));
        let word = Word::loop_word(graph, steps)
            .expect("tree paths chain by construction");
        generators.push(word);
    }

    GeneratorBasis {
        tree_edges,
        chords,
        chord_position,
        generators,
    }
}

impl GeneratorBasis {
    /// Number of free generators, `|E| - |V| + 1`.
    pub fn rank(&self) -> usize {
        self.chords.len()
    }

    /// Edge indices of the spanning tree, in declaration order.
    pub fn tree_edges(&self) -> &[usize] {
        &self.tree_edges
    }

    /// Edge indices of the chords, in declaration order; chord `i` defines
    /// generator `i`.
    pub fn chords(&self) -> &[usize] {
        &self.chords
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &Word {
        &self.generators[i]
    }

    /// Which generator an edge defines, if it is a chord.
    pub fn chord_index(&self, edge: usize) -> Option<usize> {
        self.chord_position.get(edge).copied().flatten()
    }

    /// Rewrites a based loop as a reduced word in the generators by listing
    /// its chord crossings in order. Tree edges contribute nothing.
    pub fn decompose(&self, word: &Word) -> Result<GeneratorWord> {
        if !word.is_loop() {
            return Err(Error::NotALoop);
        }
        let letters = word
            .steps()
            .iter()
            .filter_map(|step| {
                self.chord_position
                    .get(step.edge)
                    .copied()
                    .flatten()
                    .map(|i| (i, step.orientation))
            })
            .collect();
        Ok(GeneratorWord::new(letters))
    }

    /// Inverse of [`GeneratorBasis::decompose`]: substitutes each letter by
    /// its generator loop and reduces.
    pub fn substitute(&self, word: &GeneratorWord, graph: &Graph) -> Word {
        let mut steps = Vec::new();
        for &(idx, orientation) in word.letters() {
            match orientation {
                Orientation::Forward => steps.extend_from_slice(self.generators[idx].steps()),
                Orientation::Reverse => {
                    steps.extend(self.generators[idx].steps().iter().rev().map(|s| s.inverse()))
                }
            }
        }
        Word::loop_word(graph, steps).expect("generator loops chain at the base")
    }

    /// Net exponent of each generator in the loop: the image of the loop in
    /// the abelianized loop group `Z^rank`.
    pub fn abelianize(&self, word: &Word) -> Result<Vec<i64>> {
        if !word.is_loop() {
            return Err(Error::NotALoop);
        }
        let mut exponents = vec![0i64; self.rank()];
        for step in word.steps() {
            if let Some(i) = self.chord_position.get(step.edge).copied().flatten() {
                exponents[i] += step.orientation.sign();
            }
        }
        Ok(exponents)
    }

    /// Whether the loop dies in the abelianization, i.e. lies in the
    /// commutator subgroup of the loop group. These are exactly the loops
    /// every abelian connection ignores.
    pub fn kernel_test(&self, word: &Word) -> Result<bool> {
        Ok(self.abelianize(word)?.iter().all(|&q| q == 0))
    }

    /// The `|E| x rank` integer matrix whose column `i` is the edge-exponent
    /// vector of generator `i`. It intertwines the two abelianizations:
    /// `path_abelianize(w) = M * abelianize(w)` for every based loop `w`.
    pub fn edge_exponent_rows(&self, graph: &Graph) -> Vec<Vec<i64>> {
        let mut rows = vec![vec![0i64; self.rank()]; graph.edge_count()];
        for (i, generator) in self.generators.iter().enumerate() {
            for (edge, net) in path_abelianize(graph, generator).iter().enumerate() {
                rows[edge][i] = *net;
            }
        }
        rows
    }
}

/// Net exponent of every edge in a word (loops and open paths alike); the
/// abelianization of the path groupoid, valued in `Z^{|E|}`.
pub fn path_abelianize(graph: &Graph, word: &Word) -> Vec<i64> {
    let mut exponents = vec![0i64; graph.edge_count()];
    for step in word.steps() {
        exponents[step.edge] += step.orientation.sign();
    }
    exponents
}

/// Convenience wrapper: does the word abelianize to zero in `Z^{|E|}`?
pub fn path_kernel_test(graph: &Graph, word: &Word) -> bool {
    path_abelianize(graph, word).iter().all(|&q| q == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> Graph {
        Graph::new(
            vec!["v0", "v1"],
            "v0",
            vec![
                ("e1", "v0", "v1"),
                ("e2", "v0", "v1"),
                ("e3", "v0", "v1"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn theta_tree_and_generators() {
        let g = theta();
        let basis = spanning_tree_generators(&g);
        assert_eq!(basis.tree_edges(), &[0]);
        assert_eq!(basis.chords(), &[1, 2]);
        assert_eq!(basis.rank(), 2);
        assert_eq!(
            basis.generator(0).steps(),
            &[Step::forward(1), Step::reverse(0)]
        );
        assert_eq!(
            basis.generator(1).steps(),
            &[Step::forward(2), Step::reverse(0)]
        );
    }

    #[test]
    fn bouquet_generators_are_the_edges() {
        let g = Graph::bouquet(3);
        let basis = spanning_tree_generators(&g);
        assert!(basis.tree_edges().is_empty());
        assert_eq!(basis.rank(), 3);
        for i in 0..3 {
            assert_eq!(basis.generator(i).steps(), &[Step::forward(i)]);
        }
    }

    #[test]
    fn tree_graph_has_rank_zero() {
        let g = Graph::new(
            vec!["v0", "v1", "v2"],
            "v0",
            vec![("a", "v0", "v1"), ("b", "v1", "v2")],
        )
        .unwrap();
        let basis = spanning_tree_generators(&g);
        assert_eq!(basis.rank(), 0);
        assert_eq!(basis.tree_edges(), &[0, 1]);
        let trivial = basis.decompose(&Word::constant(&g)).unwrap();
        assert!(trivial.is_empty());
        assert_eq!(basis.abelianize(&Word::constant(&g)).unwrap(), Vec::<i64>::new());
    }

    #[test]
    fn decomposes_cross_loop() {
        // e2 then ~e3 crosses chord e2 forward and chord e3 backward.
        let g = theta();
        let basis = spanning_tree_generators(&g);
        let w = Word::loop_word(&g, vec![Step::forward(1), Step::reverse(2)]).unwrap();
        let gw = basis.decompose(&w).unwrap();
        assert_eq!(
            gw.letters(),
            &[(0, Orientation::Forward), (1, Orientation::Reverse)]
        );
        assert_eq!(basis.abelianize(&w).unwrap(), vec![1, -1]);
        assert!(!basis.kernel_test(&w).unwrap());
    }

    #[test]
    fn substitute_inverts_decompose() {
        let g = theta();
        let basis = spanning_tree_generators(&g);
        let w = Word::loop_word(
            &g,
            vec![
                Step::forward(1),
                Step::reverse(2),
                Step::forward(2),
                Step::reverse(2),
            ],
        )
        .unwrap();
        let round = basis.substitute(&basis.decompose(&w).unwrap(), &g);
        assert_eq!(round, w);
    }

    #[test]
    fn commutator_lies_in_kernel() {
        let g = theta();
        let basis = spanning_tree_generators(&g);
        let a = basis.generator(0).clone();
        let b = basis.generator(1).clone();
        let comm = a
            .compose(&b, &g)
            .unwrap()
            .compose(&a.invert(), &g)
            .unwrap()
            .compose(&b.invert(), &g)
            .unwrap();
        assert!(!comm.is_empty(), "the generators do not commute");
        assert!(basis.kernel_test(&comm).unwrap());
        assert_eq!(basis.abelianize(&comm).unwrap(), vec![0, 0]);
    }

    #[test]
    fn path_abelianization_factors_through_generators() {
        let g = theta();
        let basis = spanning_tree_generators(&g);
        let w = Word::loop_word(&g, vec![Step::forward(1), Step::reverse(2)]).unwrap();
        let per_edge = path_abelianize(&g, &w);
        assert_eq!(per_edge, vec![0, 1, -1]);

        let rows = basis.edge_exponent_rows(&g);
        assert_eq!(rows, vec![vec![-1, -1], vec![1, 0], vec![0, 1]]);
        let h = basis.abelianize(&w).unwrap();
        let matvec: Vec<i64> = rows
            .iter()
            .map(|row| row.iter().zip(&h).map(|(a, b)| a * b).sum())
            .collect();
        assert_eq!(matvec, per_edge);
    }

    #[test]
    fn decompose_rejects_open_paths() {
        let g = theta();
        let basis = spanning_tree_generators(&g);
        let p = Word::path_word(&g, vec![Step::forward(0)]).unwrap();
        assert!(matches!(basis.decompose(&p), Err(Error::NotALoop)));
        assert!(matches!(basis.abelianize(&p), Err(Error::NotALoop)));
    }
}
