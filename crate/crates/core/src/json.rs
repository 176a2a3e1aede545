//! The JSON wire format used by the command-line driver.
//!
//! Every shareable object has a plain serde struct here mirroring its
//! on-disk shape, plus `*_to_json` / `*_from_json` conversions that funnel
//! through the library constructors so a hand-edited file faces the same
//! validation as programmatic input. [`canonical_string`] renders any
//! serializable value with sorted keys for digesting.

use std::collections::BTreeMap;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::GeneratorBasis;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::harmonics::TrigPoly;
use crate::holonomy::{Connection, GroupElement, GroupKind};
use crate::levels::Level;
use crate::positivity::{CharacterFunctional, MeasureDensity};
use crate::transform::{CylinderFunction, LoopState};
use crate::word::{Step, Word, WordKind};

/// A graph: named vertices, a base vertex, and directed named edges.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub base: String,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: String,
    pub from: String,
    pub to: String,
}

/// A word as edge-id steps; `"~"` prefixes a reversed traversal, and
/// `kind` is `"loop"` or `"path"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WordJson {
    pub kind: String,
    pub steps: Vec<String>,
}

/// A connection: `group` is `"U1"` or `"SU2"`, and `assignment` maps each
/// edge id to an angle in radians (U1) or to the four matrix entries in
/// row-major order, each as an `[re, im]` pair (SU2).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConnectionJson {
    pub group: String,
    pub assignment: BTreeMap<String, AssignmentJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AssignmentJson {
    Angle(f64),
    Matrix([[f64; 2]; 4]),
}

/// One coefficient of a trigonometric polynomial or coefficient table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffJson {
    pub k: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

/// A sparse trigonometric polynomial (also the shape used for character
/// functionals, which are coefficient tables of the same kind).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrigPolyJson {
    pub dim: usize,
    pub coeffs: Vec<CoeffJson>,
}

/// A measure density: a trigonometric polynomial flagged as Hermitian.
/// The flag is demanded on input so a signed intent can't hide a typo.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityJson {
    pub dim: usize,
    pub hermitian: bool,
    pub coeffs: Vec<CoeffJson>,
}

/// A finitely generated subgroup of `Z^ambient` with a chosen basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelJson {
    pub ambient: usize,
    pub basis: Vec<Vec<i64>>,
}

/// A cylinder function: a level together with a polynomial in the level's
/// coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CylinderJson {
    pub level: LevelJson,
    pub poly: TrigPolyJson,
}

/// One point mass of a loop state, at the lattice point `h`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MassJson {
    pub h: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

/// A finitely supported function on the lattice `Z^ambient`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LoopStateJson {
    pub ambient: usize,
    pub support: Vec<MassJson>,
}

/// Renders any serializable value as compact JSON with objects' keys
/// sorted at every depth; the canonical form fed to input digests.
pub fn canonical_string<T: Serialize>(value: &T) -> Result<String> {
    // serde_json's Value keeps object keys in a sorted map, so a round
    // trip through Value is exactly the key-sorting pass.
    let value = serde_json::to_value(value)?;
    Ok(serde_json::to_string(&value)?)
}

pub fn graph_to_json(graph: &Graph) -> GraphJson {
    GraphJson {
        vertices: graph.vertex_names().to_vec(),
        base: graph.vertex_name(graph.base()).to_string(),
        edges: graph
            .edges()
            .iter()
            .map(|e| EdgeJson {
                id: e.id().to_string(),
                from: graph.vertex_name(e.source()).to_string(),
                to: graph.vertex_name(e.target()).to_string(),
            })
            .collect(),
    }
}

pub fn graph_from_json(json: &GraphJson) -> Result<Graph> {
    Graph::new(
        json.vertices.clone(),
        &json.base,
        json.edges
            .iter()
            .map(|e| (e.id.clone(), e.from.clone(), e.to.clone()))
            .collect(),
    )
}

pub fn word_to_json(graph: &Graph, word: &Word) -> WordJson {
    WordJson {
        kind: match word.kind() {
            WordKind::Loop => "loop".to_string(),
            WordKind::Path => "path".to_string(),
        },
        steps: word
            .steps()
            .iter()
            .map(|step| {
                let id = graph.edge(step.edge).id();
                match step.orientation {
                    crate::word::Orientation::Forward => id.to_string(),
                    crate::word::Orientation::Reverse => format!("~{id}"),
                }
            })
            .collect(),
    }
}

pub fn word_from_json(graph: &Graph, json: &WordJson) -> Result<Word> {
    let steps = json
        .steps
        .iter()
        .map(|token| {
            Ok(match token.strip_prefix('~') {
                Some(id) => Step::reverse(graph.edge_index(id)?),
                None => Step::forward(graph.edge_index(token)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    match json.kind.as_str() {
        "loop" => Word::loop_word(graph, steps),
        "path" => Word::path_word(graph, steps),
        other => Err(Error::Schema(format!(
            "word kind must be \"loop\" or \"path\", got {other:?}"
        ))),
    }
}

pub fn connection_to_json(connection: &Connection) -> ConnectionJson {
    let assignment = connection
        .graph()
        .edges()
        .iter()
        .enumerate()
        .map(|(i, edge)| {
            let value = match connection.element(i) {
                g if g.kind() == GroupKind::U1 => {
                    AssignmentJson::Angle(g.angle().expect("U1 element carries an angle"))
                }
                g => {
                    let m = g.matrix().expect("SU2 element carries a matrix");
                    AssignmentJson::Matrix([
                        [m[(0, 0)].re, m[(0, 0)].im],
                        [m[(0, 1)].re, m[(0, 1)].im],
                        [m[(1, 0)].re, m[(1, 0)].im],
                        [m[(1, 1)].re, m[(1, 1)].im],
                    ])
                }
            };
            (edge.id().to_string(), value)
        })
        .collect();
    ConnectionJson {
        group: match connection.kind() {
            GroupKind::U1 => "U1".to_string(),
            GroupKind::Su2 => "SU2".to_string(),
        },
        assignment,
    }
}

pub fn connection_from_json(graph: &Graph, json: &ConnectionJson) -> Result<Connection> {
    let kind = match json.group.as_str() {
        "U1" => GroupKind::U1,
        "SU2" => GroupKind::Su2,
        other => {
            return Err(Error::Schema(format!(
                "group must be \"U1\" or \"SU2\", got {other:?}"
            )))
        }
    };
    let mut assignment = BTreeMap::new();
    for (id, value) in &json.assignment {
        let element = match (kind, value) {
            (GroupKind::U1, AssignmentJson::Angle(angle)) => GroupElement::u1(*angle),
            (GroupKind::Su2, AssignmentJson::Matrix(entries)) => {
                let c = |pair: &[f64; 2]| Complex64::new(pair[0], pair[1]);
                GroupElement::su2(Matrix2::new(
                    c(&entries[0]),
                    c(&entries[1]),
                    c(&entries[2]),
                    c(&entries[3]),
                ))?
            }
            _ => {
                return Err(Error::Schema(format!(
                    "edge {id:?}: assignment value does not match group {}",
                    json.group
                )))
            }
        };
        assignment.insert(id.clone(), element);
    }
    Connection::from_edge_map(graph, kind, &assignment)
}

fn coeffs_to_json(coeffs: &BTreeMap<Vec<i64>, Complex64>) -> Vec<CoeffJson> {
    coeffs
        .iter()
        .map(|(k, c)| CoeffJson {
            k: k.clone(),
            re: c.re,
            im: c.im,
        })
        .collect()
}

fn coeffs_from_json(coeffs: &[CoeffJson]) -> impl Iterator<Item = (Vec<i64>, Complex64)> + '_ {
    coeffs
        .iter()
        .map(|c| (c.k.clone(), Complex64::new(c.re, c.im)))
}

pub fn poly_to_json(poly: &TrigPoly) -> TrigPolyJson {
    TrigPolyJson {
        dim: poly.dim(),
        coeffs: coeffs_to_json(poly.coeffs()),
    }
}

pub fn poly_from_json(json: &TrigPolyJson) -> Result<TrigPoly> {
    TrigPoly::from_coeffs(json.dim, coeffs_from_json(&json.coeffs))
}

pub fn density_to_json(density: &MeasureDensity) -> DensityJson {
    DensityJson {
        dim: density.dim(),
        hermitian: true,
        coeffs: coeffs_to_json(density.poly().coeffs()),
    }
}

pub fn density_from_json(json: &DensityJson) -> Result<MeasureDensity> {
    if !json.hermitian {
        return Err(Error::Schema(
            "density files must set \"hermitian\": true".to_string(),
        ));
    }
    MeasureDensity::new(TrigPoly::from_coeffs(
        json.dim,
        coeffs_from_json(&json.coeffs),
    )?)
}

pub fn functional_to_json(functional: &CharacterFunctional) -> TrigPolyJson {
    TrigPolyJson {
        dim: functional.dim(),
        coeffs: coeffs_to_json(functional.values()),
    }
}

pub fn functional_from_json(json: &TrigPolyJson) -> Result<CharacterFunctional> {
    CharacterFunctional::new(json.dim, coeffs_from_json(&json.coeffs))
}

pub fn level_to_json(level: &Level) -> LevelJson {
    LevelJson {
        ambient: level.ambient(),
        basis: level.basis().to_vec(),
    }
}

pub fn level_from_json(json: &LevelJson) -> Result<Level> {
    Level::new(json.ambient, json.basis.clone())
}

pub fn cylinder_to_json(psi: &CylinderFunction) -> CylinderJson {
    CylinderJson {
        level: level_to_json(psi.level()),
        poly: poly_to_json(psi.poly()),
    }
}

pub fn cylinder_from_json(json: &CylinderJson) -> Result<CylinderFunction> {
    CylinderFunction::new(level_from_json(&json.level)?, poly_from_json(&json.poly)?)
}

pub fn loop_state_to_json(state: &LoopState) -> LoopStateJson {
    LoopStateJson {
        ambient: state.ambient(),
        support: state
            .support()
            .iter()
            .map(|(h, c)| MassJson {
                h: h.clone(),
                re: c.re,
                im: c.im,
            })
            .collect(),
    }
}

pub fn loop_state_from_json(json: &LoopStateJson) -> Result<LoopState> {
    LoopState::new(
        json.ambient,
        json.support
            .iter()
            .map(|m| (m.h.clone(), Complex64::new(m.re, m.im))),
    )
}

/// The generator table emitted by the basis subcommand: which edges span
/// the tree, and each free generator as a word.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisJson {
    pub tree_edges: Vec<String>,
    pub chords: Vec<String>,
    pub generators: Vec<WordJson>,
}

pub fn basis_to_json(graph: &Graph, basis: &GeneratorBasis) -> BasisJson {
    let edge_id = |i: &usize| graph.edge(*i).id().to_string();
    BasisJson {
        tree_edges: basis.tree_edges().iter().map(edge_id).collect(),
        chords: basis.chords().iter().map(edge_id).collect(),
        generators: (0..basis.rank())
            .map(|i| word_to_json(graph, basis.generator(i)))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::spanning_tree_generators;
    use crate::word::Orientation;

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
    fn graph_round_trip() {
        let g = theta();
        let back = graph_from_json(&graph_to_json(&g)).unwrap();
        assert_eq!(back.vertex_names(), g.vertex_names());
        assert_eq!(back.edge(2).id(), "e3");
        assert_eq!(back.base(), g.base());
    }

    #[test]
    fn graph_json_parses_from_text() {
        let text = r#"{"vertices":["v0","v1"],"base":"v0",
            "edges":[{"id":"e1","from":"v0","to":"v1"},
                     {"id":"e2","from":"v1","to":"v0"}]}"#;
        let json: GraphJson = serde_json::from_str(text).unwrap();
        let g = graph_from_json(&json).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.rank(), 1);
    }

    #[test]
    fn word_round_trip_preserves_steps() {
        let g = theta();
        let json = WordJson {
            kind: "loop".to_string(),
            steps: vec!["e2".to_string(), "~e1".to_string()],
        };
        let word = word_from_json(&g, &json).unwrap();
        assert_eq!(word.steps().len(), 2);
        assert_eq!(word.steps()[1].orientation, Orientation::Reverse);
        let back = word_to_json(&g, &word);
        assert_eq!(back.kind, "loop");
        assert_eq!(back.steps, json.steps);
    }

    #[test]
    fn word_json_rejects_unknown_kind_and_edge() {
        let g = theta();
        let bad_kind = WordJson {
            kind: "cycle".to_string(),
            steps: vec![],
        };
        assert!(matches!(
            word_from_json(&g, &bad_kind),
            Err(Error::Schema(_))
        ));
        let bad_edge = WordJson {
            kind: "loop".to_string(),
            steps: vec!["e9".to_string()],
        };
        assert!(matches!(
            word_from_json(&g, &bad_edge),
            Err(Error::UnknownEdge(_))
        ));
    }

    #[test]
    fn u1_connection_round_trip() {
        let g = theta();
        let text = r#"{"group":"U1","assignment":{"e1":0.0,"e2":1.5707963267948966,"e3":0.25}}"#;
        let json: ConnectionJson = serde_json::from_str(text).unwrap();
        let conn = connection_from_json(&g, &json).unwrap();
        assert_eq!(conn.element(1).angle(), Some(std::f64::consts::FRAC_PI_2));
        let back = connection_to_json(&conn);
        assert_eq!(canonical_string(&back).unwrap(), canonical_string(&json).unwrap());
    }

    #[test]
    fn su2_connection_round_trip() {
        let g = Graph::bouquet(1);
        let json = ConnectionJson {
            group: "SU2".to_string(),
            assignment: [(
                "e0".to_string(),
                AssignmentJson::Matrix([[0.0, 1.0], [0.0, 0.0], [0.0, 0.0], [0.0, -1.0]]),
            )]
            .into_iter()
            .collect(),
        };
        let conn = connection_from_json(&g, &json).unwrap();
        let m = conn.element(0).matrix().unwrap();
        assert!((m[(0, 0)] - Complex64::new(0.0, 1.0)).norm() <= 1e-12);
        // Parsing renormalizes the matrix (it may flip signed zeros), so the
        // stability contract is: one render is a fixed point of the round trip.
        let once = connection_to_json(&conn);
        let reparsed = connection_from_json(&g, &once).unwrap();
        assert_eq!(
            canonical_string(&once).unwrap(),
            canonical_string(&connection_to_json(&reparsed)).unwrap()
        );
        assert!(conn.element(0).distance(reparsed.element(0)).unwrap() <= 1e-12);
    }

    #[test]
    fn connection_json_rejects_mixed_group() {
        let g = Graph::bouquet(1);
        let json = ConnectionJson {
            group: "U1".to_string(),
            assignment: [(
                "e0".to_string(),
                AssignmentJson::Matrix([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]),
            )]
            .into_iter()
            .collect(),
        };
        assert!(matches!(
            connection_from_json(&g, &json),
            Err(Error::Schema(_))
        ));
        let unknown = ConnectionJson {
            group: "SO3".to_string(),
            assignment: BTreeMap::new(),
        };
        assert!(matches!(
            connection_from_json(&g, &unknown),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn poly_round_trip() {
        let text = r#"{"dim":2,"coeffs":[{"k":[2,-1],"re":0.5,"im":0.0}]}"#;
        let json: TrigPolyJson = serde_json::from_str(text).unwrap();
        let poly = poly_from_json(&json).unwrap();
        assert_eq!(poly.coeff(&[2, -1]), Complex64::new(0.5, 0.0));
        let back = poly_to_json(&poly);
        assert_eq!(canonical_string(&back).unwrap(), canonical_string(&json).unwrap());
    }

    #[test]
    fn density_json_demands_the_flag_and_symmetry() {
        let unflagged: DensityJson = serde_json::from_str(
            r#"{"dim":1,"hermitian":false,"coeffs":[{"k":[0],"re":1.0,"im":0.0}]}"#,
        )
        .unwrap();
        assert!(matches!(
            density_from_json(&unflagged),
            Err(Error::Schema(_))
        ));
        let asymmetric: DensityJson = serde_json::from_str(
            r#"{"dim":1,"hermitian":true,"coeffs":[{"k":[1],"re":1.0,"im":0.0}]}"#,
        )
        .unwrap();
        assert!(matches!(
            density_from_json(&asymmetric),
            Err(Error::NotHermitian(_))
        ));
        let good: DensityJson = serde_json::from_str(
            r#"{"dim":1,"hermitian":true,"coeffs":[
                {"k":[0],"re":2.0,"im":0.0},
                {"k":[1],"re":1.0,"im":0.0},
                {"k":[-1],"re":1.0,"im":0.0}]}"#,
        )
        .unwrap();
        let density = density_from_json(&good).unwrap();
        assert_eq!(density.total_mass(), 2.0);
        assert!(density_to_json(&density).hermitian);
    }

    #[test]
    fn level_and_cylinder_round_trip() {
        let text = r#"{"level":{"ambient":2,"basis":[[2,1]]},
                       "poly":{"dim":1,"coeffs":[{"k":[3],"re":1.0,"im":-1.0}]}}"#;
        let json: CylinderJson = serde_json::from_str(text).unwrap();
        let psi = cylinder_from_json(&json).unwrap();
        assert_eq!(psi.level().basis(), &[vec![2, 1]]);
        assert_eq!(psi.poly().coeff(&[3]), Complex64::new(1.0, -1.0));
        let back = cylinder_to_json(&psi);
        assert_eq!(canonical_string(&back).unwrap(), canonical_string(&json).unwrap());
    }

    #[test]
    fn cylinder_json_rejects_rank_mismatch() {
        let json: CylinderJson = serde_json::from_str(
            r#"{"level":{"ambient":2,"basis":[[2,1]]},
                "poly":{"dim":2,"coeffs":[]}}"#,
        )
        .unwrap();
        assert!(matches!(
            cylinder_from_json(&json),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn loop_state_round_trip() {
        let text = r#"{"ambient":2,"support":[{"h":[2,1],"re":1.0,"im":0.0}]}"#;
        let json: LoopStateJson = serde_json::from_str(text).unwrap();
        let state = loop_state_from_json(&json).unwrap();
        assert_eq!(state.value(&[2, 1]), Complex64::ONE);
        let back = loop_state_to_json(&state);
        assert_eq!(canonical_string(&back).unwrap(), canonical_string(&json).unwrap());
    }

    #[test]
    fn canonical_string_sorts_keys() {
        let g = graph_to_json(&Graph::bouquet(1));
        let rendered = canonical_string(&g).unwrap();
        // Struct field order is vertices, base, edges; canonical form is
        // alphabetical at every level.
        assert!(rendered.starts_with(r#"{"base":"v0","edges":[{"from":"v0","id":"e0","#));
    }

    #[test]
    fn basis_table_for_theta() {
        let g = theta();
        let basis = spanning_tree_generators(&g);
        let json = basis_to_json(&g, &basis);
        assert_eq!(json.tree_edges, vec!["e1"]);
        assert_eq!(json.chords, vec!["e2", "e3"]);
        assert_eq!(json.generators[0].steps, vec!["e2", "~e1"]);
        assert_eq!(json.generators[1].steps, vec!["e3", "~e1"]);
    }
}
