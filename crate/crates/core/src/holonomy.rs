//! Connections, holonomy, and Wilson observables.
//!
//! A connection assigns a structure-group element to every edge; holonomy
//! folds those elements along a word, inverting on reversed steps. Two
//! groups are supported: `U(1)`, stored as an angle in `[0, 2π)` so that
//! long products stay exactly on the circle, and `SU(2)`, stored as an
//! explicit 2×2 complex matrix that is projected onto the group once, at
//! construction, and never renormalized mid-product.

use nalgebra::Matrix2;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::TAU;

use crate::basis::GeneratorBasis;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::word::{Orientation, Step, Word};

/// Structure group tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    U1,
    Su2,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::U1 => "U(1)",
            GroupKind::Su2 => "SU(2)",
        }
    }
}

/// Brings an angle into `[0, 2π)`. `rem_euclid` may land exactly on `2π`
/// for tiny negative inputs, so that endpoint is folded back to zero.
fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// One element of the structure group.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupElement {
    /// The phase `e^{iθ}`, stored as `θ ∈ [0, 2π)`.
    U1(f64),
    /// A special unitary 2×2 matrix.
    Su2(Matrix2<Complex64>),
}

impl GroupElement {
    pub fn u1(angle: f64) -> Self {
        GroupElement::U1(normalize_angle(angle))
    }

    /// Validates that `m` is special unitary to within `1e-12` (`‖U†U−I‖∞`
    /// and `|det U − 1|`), then projects it exactly onto the group.
    ///
    /// The projection writes `m` in quaternion coordinates
    /// `[[a, -b̄], [b, ā]]` and normalizes; for matrices this close to the
    /// group it agrees with the polar factor to second order in the defect.
    pub fn su2(m: Matrix2<Complex64>) -> Result<Self> {
        let defect = (m.adjoint() * m - Matrix2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if defect > 1e-12 {
            return Err(Error::NotSpecialUnitary(format!(
                "unitarity defect {defect:.3e}"
            )));
        }
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        let det_defect = (det - Complex64::ONE).norm();
        if det_defect > 1e-12 {
            return Err(Error::NotSpecialUnitary(format!(
                "determinant defect {det_defect:.3e}"
            )));
        }
        let a = (m[(0, 0)] + m[(1, 1)].conj()) * 0.5;
        let b = (m[(1, 0)] - m[(0, 1)].conj()) * 0.5;
        Self::su2_from_quaternion(a, b)
    }

    /// Builds the matrix `[[a, -b̄], [b, ā]] / √(|a|²+|b|²)`. Every special
    /// unitary 2×2 matrix arises this way from a unit quaternion.
    pub fn su2_from_quaternion(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if norm < 1e-6 {
            return Err(Error::SingularProjection);
        }
        let a = a / norm;
        let b = b / norm;
        Ok(GroupElement::Su2(Matrix2::new(a, -b.conj(), b, a.conj())))
    }

    pub fn identity(kind: GroupKind) -> Self {
        match kind {
            GroupKind::U1 => GroupElement::U1(0.0),
            GroupKind::Su2 => GroupElement::Su2(Matrix2::identity()),
        }
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            GroupElement::U1(_) => GroupKind::U1,
            GroupElement::Su2(_) => GroupKind::Su2,
        }
    }

    /// The stored angle, for `U(1)` elements.
    pub fn angle(&self) -> Option<f64> {
        match self {
            GroupElement::U1(theta) => Some(*theta),
            GroupElement::Su2(_) => None,
        }
    }

    /// The stored matrix, for `SU(2)` elements.
    pub fn matrix(&self) -> Option<&Matrix2<Complex64>> {
        match self {
            GroupElement::U1(_) => None,
            GroupElement::Su2(m) => Some(m),
        }
    }

    /// Group inverse. Exact in both representations: angle negation mod 2π
    /// and conjugate transpose respectively.
    pub fn inverse(&self) -> Self {
        match self {
            GroupElement::U1(theta) => GroupElement::U1(normalize_angle(-theta)),
            GroupElement::Su2(m) => GroupElement::Su2(m.adjoint()),
        }
    }

    /// Group product.
    ///
    /// # Panics
    /// If the operands belong to different groups; connections keep their
    /// elements uniform, so mixing is a programming error, not bad data.
    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (GroupElement::U1(s), GroupElement::U1(t)) => {
                GroupElement::U1(normalize_angle(s + t))
            }
            (GroupElement::Su2(a), GroupElement::Su2(b)) => GroupElement::Su2(a * b),
            _ => panic!("cannot multiply U(1) and SU(2) elements"),
        }
    }

    /// Normalized trace: the phase itself for `U(1)`, half the matrix trace
    /// for `SU(2)`. Always lies in the closed unit disc.
    pub fn wilson_value(&self) -> Complex64 {
        match self {
            GroupElement::U1(theta) => Complex64::from_polar(1.0, *theta),
            GroupElement::Su2(m) => (m[(0, 0)] + m[(1, 1)]) * 0.5,
        }
    }

    /// A metric for tests and sweeps: circle distance of angles for `U(1)`,
    /// max-abs entry difference for `SU(2)`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        match (self, other) {
            (GroupElement::U1(s), GroupElement::U1(t)) => {
                let d = (s - t).rem_euclid(TAU);
                Ok(d.min(TAU - d))
            }
            (GroupElement::Su2(a), GroupElement::Su2(b)) => Ok((a - b)
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max)),
            _ => Err(Error::GroupMismatch {
                expected: self.kind().name(),
                found: other.kind().name(),
            }),
        }
    }
}

/// An assignment of one group element to every edge of a graph.
#[derive(Debug, Clone)]
pub struct Connection {
    graph: Graph,
    kind: GroupKind,
    elements: Vec<GroupElement>,
}

impl Connection {
    /// `elements[i]` labels edge `i`. All elements must belong to `kind`
    /// and there must be exactly one per edge.
    pub fn new(graph: &Graph, kind: GroupKind, elements: Vec<GroupElement>) -> Result<Self> {
        if elements.len() != graph.edge_count() {
            return Err(Error::AssignmentSize {
                expected: graph.edge_count(),
                found: elements.len(),
            });
        }
        for element in &elements {
            if element.kind() != kind {
                return Err(Error::GroupMismatch {
                    expected: kind.name(),
                    found: element.kind().name(),
                });
            }
        }
        Ok(Connection {
            graph: graph.clone(),
            kind,
            elements,
        })
    }

    /// Builds a connection from an edge-id-keyed map, requiring the map's
    /// keys to be exactly the graph's edge ids.
    pub fn from_edge_map(
        graph: &Graph,
        kind: GroupKind,
        assignment: &BTreeMap<String, GroupElement>,
    ) -> Result<Self> {
        for id in assignment.keys() {
            graph.edge_index(id)?;
        }
        let elements = graph
            .edges()
            .iter()
            .map(|edge| {
                assignment
                    .get(edge.id())
                    .cloned()
                    .ok_or_else(|| Error::UnknownEdge(edge.id().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(graph, kind, elements)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn element(&self, edge: usize) -> &GroupElement {
        &self.elements[edge]
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    /// The connection with every edge element conjugated by `g0` — the
    /// effect of a constant gauge transformation. For `U(1)` conjugation is
    /// the identity, and the result is returned unchanged (exactly).
    pub fn conjugated(&self, g0: &GroupElement) -> Result<Self> {
        if g0.kind() != self.kind {
            return Err(Error::GroupMismatch {
                expected: self.kind.name(),
                found: g0.kind().name(),
            });
        }
        match self.kind {
            GroupKind::U1 => Ok(self.clone()),
            GroupKind::Su2 => {
                let inv = g0.inverse();
                let elements = self
                    .elements
                    .iter()
                    .map(|h| g0.mul(h).mul(&inv))
                    .collect();
                Connection::new(&self.graph, self.kind, elements)
            }
        }
    }
}

/// Folds the connection along a raw step sequence (no reduction assumed).
pub fn holonomy_steps(connection: &Connection, steps: &[Step]) -> Result<GroupElement> {
    let mut acc = GroupElement::identity(connection.kind());
    for step in steps {
        if step.edge >= connection.graph.edge_count() {
            return Err(Error::EdgeIndexOutOfRange {
                index: step.edge,
                available: connection.graph.edge_count(),
            });
        }
        let element = &connection.elements[step.edge];
        let factor = match step.orientation {
            Orientation::Forward => element.clone(),
            Orientation::Reverse => element.inverse(),
        };
        acc = acc.mul(&factor);
    }
    Ok(acc)
}

/// Ordered product of the assigned elements along the word. Multiplicative
/// under composition and blind to retracings (words are stored reduced, and
/// an inserted backtrack contributes `g·g⁻¹`).
pub fn holonomy(connection: &Connection, word: &Word) -> Result<GroupElement> {
    holonomy_steps(connection, word.steps())
}

/// The Wilson observable: normalized trace of the holonomy of a loop.
pub fn wilson(connection: &Connection, word: &Word) -> Result<Complex64> {
    if !word.is_loop() {
        return Err(Error::NotALoop);
    }
    Ok(holonomy(connection, word)?.wilson_value())
}

/// Builds the connection in tree gauge that realizes prescribed holonomies:
/// tree edges carry the identity, chord `i` carries `targets[i]`. Because
/// generator `i` runs out along the tree, across chord `i`, and home along
/// the tree, its holonomy is *exactly* `targets[i]` — identity factors fold
/// with no rounding in either representation.
pub fn interpolate(
    graph: &Graph,
    basis: &GeneratorBasis,
    kind: GroupKind,
    targets: &[GroupElement],
) -> Result<Connection> {
    if targets.len() != basis.rank() {
        return Err(Error::AssignmentSize {
            expected: basis.rank(),
            found: targets.len(),
        });
    }
    let mut elements = vec![GroupElement::identity(kind); graph.edge_count()];
    for (i, target) in targets.iter().enumerate() {
        if target.kind() != kind {
            return Err(Error::GroupMismatch {
                expected: kind.name(),
                found: target.kind().name(),
            });
        }
        elements[basis.chords()[i]] = target.clone();
    }
    Connection::new(graph, kind, elements)
}

/// Residual of the trace identity `2 T_α T_β = T_{αβ} + T_{αβ⁻¹}`, which
/// holds for every pair of `SU(2)` loops by the Cayley–Hamilton theorem.
/// The returned value is a float-roundoff artifact, contractually ≤ 1e-10.
pub fn mandelstam_check(connection: &Connection, alpha: &Word, beta: &Word) -> Result<f64> {
    if connection.kind() != GroupKind::Su2 {
        return Err(Error::GroupMismatch {
            expected: "SU(2)",
            found: connection.kind().name(),
        });
    }
    if !alpha.is_loop() || !beta.is_loop() {
        return Err(Error::NotALoop);
    }
    let t_a = wilson(connection, alpha)?;
    let t_b = wilson(connection, beta)?;
    let t_ab = wilson(connection, &alpha.compose(beta, &connection.graph)?)?;
    let t_abi = wilson(connection, &alpha.compose(&beta.invert(), &connection.graph)?)?;
    Ok((t_a * t_b * 2.0 - t_ab - t_abi).norm())
}

/// Residual of gauge invariance of the Wilson observable under a constant
/// gauge transformation: conjugating every edge element by `g0` cannot
/// change any trace. Zero exactly for `U(1)`; roundoff-sized for `SU(2)`.
pub fn conjugation_invariance_check(
    connection: &Connection,
    g0: &GroupElement,
    word: &Word,
) -> Result<f64> {
    let before = wilson(connection, word)?;
    let after = wilson(&connection.conjugated(g0)?, word)?;
    Ok((after - before).norm())
}
