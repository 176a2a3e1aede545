//! Edge words: paths and based loops up to retracing.
//!
//! A word is a composable sequence of oriented edge traversals. Two words
//! that differ by inserting or deleting immediate backtracks (`e` followed
//! by `~e`, or vice versa) describe the same element of the path groupoid,
//! so `Word` stores the fully reduced representative and equality of values
//! is equality in the groupoid. Reduction is confluent — cancelling adjacent
//! inverse pairs in any order reaches the same normal form — which the tests
//! check against a brute-force rewriter.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Traversal direction relative to an edge's stored orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Forward,
    Reverse,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Forward => Orientation::Reverse,
            Orientation::Reverse => Orientation::Forward,
        }
    }

    /// +1 for forward, -1 for reverse; the exponent the step contributes.
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Forward => 1,
            Orientation::Reverse => -1,
        }
    }
}

/// One oriented edge traversal. `edge` indexes into the owning graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub edge: usize,
    pub orientation: Orientation,
}

impl Step {
    pub fn forward(edge: usize) -> Self {
        Step {
            edge,
            orientation: Orientation::Forward,
        }
    }

    pub fn reverse(edge: usize) -> Self {
        Step {
            edge,
            orientation: Orientation::Reverse,
        }
    }

    pub fn inverse(self) -> Self {
        Step {
            edge: self.edge,
            orientation: self.orientation.flip(),
        }
    }

    /// Vertex the step leaves from.
    pub fn source(self, graph: &Graph) -> usize {
        let e = graph.edge(self.edge);
        match self.orientation {
            Orientation::Forward => e.source(),
            Orientation::Reverse => e.target(),
        }
    }

    /// Vertex the step arrives at.
    pub fn target(self, graph: &Graph) -> usize {
        let e = graph.edge(self.edge);
        match self.orientation {
            Orientation::Forward => e.target(),
            Orientation::Reverse => e.source(),
        }
    }

    fn cancels(self, other: Step) -> bool {
        self.edge == other.edge && self.orientation != other.orientation
    }
}

/// Whether a word is a based loop or a general path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordKind {
    Loop,
    Path,
}

/// A reduced edge word together with its endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    kind: WordKind,
    steps: Vec<Step>,
    start: usize,
    end: usize,
}

/// Cancels adjacent inverse pairs until none remain (single left-to-right
/// stack pass; confluence makes the result order-independent).
pub fn reduce_steps(steps: &[Step]) -> Vec<Step> {
    let mut out: Vec<Step> = Vec::with_capacity(steps.len());
    for &step in steps {
        match out.last() {
            Some(&top) if top.cancels(step) => {
                out.pop();
            }
            _ => out.push(step),
        }
    }
    out
}

impl Word {
    /// The empty loop at the base vertex — the group identity.
    pub fn constant(graph: &Graph) -> Self {
        Word {
            kind: WordKind::Loop,
            steps: Vec::new(),
            start: graph.base(),
            end: graph.base(),
        }
    }

    /// The empty path sitting at `vertex` — a groupoid unit.
    pub fn identity_path(graph: &Graph, vertex: usize) -> Result<Self> {
        if vertex >= graph.vertex_count() {
            return Err(Error::UnknownVertex(format!("#{vertex}")));
        }
        Ok(Word {
            kind: WordKind::Path,
            steps: Vec::new(),
            start: vertex,
            end: vertex,
        })
    }

    /// A based loop: consecutive steps must chain and the whole word must
    /// start and end at the base vertex. The steps are reduced on entry.
    pub fn loop_word(graph: &Graph, steps: Vec<Step>) -> Result<Self> {
        let word = Self::path_like(graph, steps, graph.base())?;
        if word.start != graph.base() || word.end != graph.base() {
            return Err(Error::NotBasedLoop);
        }
        Ok(Word {
            kind: WordKind::Loop,
            ..word
        })
    }

    /// A path word; endpoints are inferred from the steps. Empty input is
    /// rejected because it cannot name its basepoint — use
    /// [`Word::identity_path`] for that.
    pub fn path_word(graph: &Graph, steps: Vec<Step>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::EmptyPath);
        }
        let start = steps[0].source(graph);
        Self::path_like(graph, steps, start)
    }

    fn path_like(graph: &Graph, steps: Vec<Step>, start: usize) -> Result<Self> {
        let mut at = start;
        for (position, step) in steps.iter().enumerate() {
            if step.edge >= graph.edge_count() {
                return Err(Error::EdgeIndexOutOfRange {
                    index: step.edge,
                    available: graph.edge_count(),
                });
            }
            if step.source(graph) != at {
                return Err(Error::EndpointMismatch { position });
            }
            at = step.target(graph);
        }
        Ok(Word {
            kind: WordKind::Path,
            steps: reduce_steps(&steps),
            start,
            end: at,
        })
    }

    pub fn kind(&self) -> WordKind {
        self.kind
    }

    pub fn is_loop(&self) -> bool {
        self.kind == WordKind::Loop
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Groupoid composition: `self` first, then `other`. Fails unless
    /// `other` starts where `self` ends. Loop ∘ loop is again a loop;
    /// any mix involving a path is a path.
    pub fn compose(&self, other: &Word, graph: &Graph) -> Result<Word> {
        if self.end != other.start {
            return Err(Error::Composition {
                left_end: graph.vertex_name(self.end).to_string(),
                right_start: graph.vertex_name(other.start).to_string(),
            });
        }
        let kind = if self.is_loop() && other.is_loop() {
            WordKind::Loop
        } else {
            WordKind::Path
        };
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Ok(Word {
            kind,
            steps: reduce_steps(&steps),
            start: self.start,
            end: other.end,
        })
    }

    /// The reverse traversal. Reversing a reduced word keeps it reduced.
    pub fn invert(&self) -> Word {
        let steps = self.steps.iter().rev().map(|s| s.inverse()).collect();
        Word {
            kind: self.kind,
            steps,
            start: self.end,
            end: self.start,
        }
    }

    /// Integer power. Negative exponents invert; exponent 0 yields the unit
    /// at the start vertex. Exponents beyond ±1 require a closed word.
    pub fn pow(&self, exponent: i64, graph: &Graph) -> Result<Word> {
        if exponent < 0 {
            return self.invert().pow(-exponent, graph);
        }
        if exponent > 1 && self.start != self.end {
            return Err(Error::Composition {
                left_end: graph.vertex_name(self.end).to_string(),
                right_start: graph.vertex_name(self.start).to_string(),
            });
        }
        let mut acc = Word {
            kind: self.kind,
            steps: Vec::new(),
            start: self.start,
            end: self.start,
        };
        for _ in 0..exponent {
            acc = acc.compose(self, graph)?;
        }
        Ok(acc)
    }
}
