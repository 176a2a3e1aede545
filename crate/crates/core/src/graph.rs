//! Finite directed graphs with a marked base vertex.
//!
//! Vertices and edges carry user-facing names; all other modules work with
//! dense indices (`usize` positions in declaration order). Every graph is
//! connected by construction — the constructor rejects anything else — so
//! downstream code never has to re-check reachability.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A directed edge between two vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    id: String,
    source: usize,
    target: usize,
}

impl Edge {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Whether the edge starts and ends at the same vertex.
    pub fn is_self_loop(&self) -> bool {
        self.source == self.target
    }
}

/// A connected directed graph with a base vertex.
///
/// Multi-edges and self-loops are allowed; edge direction is a labeling
/// convention (traversals may run either way), not a restriction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    base: usize,
    vertex_lookup: HashMap<String, usize>,
    edge_lookup: HashMap<String, usize>,
}

impl Graph {
    /// Builds a graph from named parts. `edges` are `(id, from, to)` triples.
    ///
    /// Fails on duplicate names, dangling endpoints, an unknown base, or a
    /// vertex unreachable from the base (ignoring edge direction).
    pub fn new<S: Into<String>>(
        vertices: Vec<S>,
        base: &str,
        edges: Vec<(S, S, S)>,
    ) -> Result<Self> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut vertex_lookup = HashMap::with_capacity(vertices.len());
        for (idx, name) in vertices.iter().enumerate() {
            if vertex_lookup.insert(name.clone(), idx).is_some() {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        let base = *vertex_lookup
            .get(base)
            .ok_or_else(|| Error::UnknownVertex(base.to_string()))?;

        let mut edge_lookup = HashMap::with_capacity(edges.len());
        let mut resolved = Vec::with_capacity(edges.len());
        for (id, from, to) in edges {
            let id: String = id.into();
            let from: String = from.into();
            let to: String = to.into();
            let source = *vertex_lookup
                .get(&from)
                .ok_or(Error::UnknownVertex(from))?;
            let target = *vertex_lookup.get(&to).ok_or(Error::UnknownVertex(to))?;
            if edge_lookup.insert(id.clone(), resolved.len()).is_some() {
                return Err(Error::DuplicateEdge(id));
            }
            resolved.push(Edge {
                id,
                source,
                target,
            });
        }

        let graph = Graph {
            vertices,
            edges: resolved,
            base,
            vertex_lookup,
            edge_lookup,
        };
        graph.check_connected()?;
        Ok(graph)
    }

    /// The one-vertex graph with `n` self-loops `e0..e{n-1}`, the canonical
    /// example of a graph of rank `n`.
    pub fn bouquet(n: usize) -> Self {
        let edges = (0..n)
            .map(|i| (format!("e{i}"), "v0".to_string(), "v0".to_string()))
            .collect();
        Self::new(vec!["v0".to_string()], "v0", edges)
            .expect("a bouquet is always a valid graph")
    }

    fn check_connected(&self) -> Result<()> {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = vec![self.base];
        seen[self.base] = true;
        while let Some(v) = queue.pop() {
            for edge in &self.edges {
                for (a, b) in [(edge.source, edge.target), (edge.target, edge.source)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        queue.push(b);
                    }
                }
            }
        }
        match seen.iter().position(|&s| !s) {
            None => Ok(()),
            Some(v) => Err(Error::Disconnected(self.vertices[v].clone())),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Index of the base vertex.
    pub fn base(&self) -> usize {
        self.base
    }

    pub fn vertex_name(&self, index: usize) -> &str {
        &self.vertices[index]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertex_lookup
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edge_lookup
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    /// First Betti number `|E| - |V| + 1`, the rank of the loop group.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }
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
    fn builds_theta_graph() {
        let g = theta();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.base(), 0);
        assert_eq!(g.rank(), 2);
        assert_eq!(g.edge_index("e2").unwrap(), 1);
        assert_eq!(g.edge(2).id(), "e3");
    }

    #[test]
    fn bouquet_has_expected_shape() {
        let g = Graph::bouquet(3);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.rank(), 3);
        assert!(g.edge(0).is_self_loop());
    }

    #[test]
    fn rejects_duplicate_vertex() {
        let err = Graph::new(vec!["v0", "v0"], "v0", vec![("e1", "v0", "v0")]);
        assert!(matches!(err, Err(Error::DuplicateVertex(_))));
    }

    #[test]
    fn rejects_duplicate_edge_id() {
        let err = Graph::new(
            vec!["v0"],
            "v0",
            vec![("e1", "v0", "v0"), ("e1", "v0", "v0")],
        );
        assert!(matches!(err, Err(Error::DuplicateEdge(_))));
    }

    #[test]
    fn rejects_unknown_base_and_endpoints() {
        assert!(matches!(
            Graph::new(vec!["v0"], "vX", vec![("e1", "v0", "v0")]),
            Err(Error::UnknownVertex(_))
        ));
        assert!(matches!(
            Graph::new(vec!["v0"], "v0", vec![("e1", "v0", "v9")]),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn rejects_disconnected_graph() {
        let err = Graph::new(
            vec!["v0", "v1", "v2"],
            "v0",
            vec![("e1", "v0", "v1")],
        );
        match err {
            Err(Error::Disconnected(v)) => assert_eq!(v, "v2"),
            other => panic!("expected disconnected error, got {other:?}"),
        }
    }

    #[test]
    fn connectivity_ignores_direction() {
        // Both edges point away from v1; v2 is still reachable undirectedly.
        let g = Graph::new(
            vec!["v0", "v1", "v2"],
            "v0",
            vec![("a", "v1", "v0"), ("b", "v1", "v2")],
        )
        .unwrap();
        assert_eq!(g.rank(), 0);
    }
}
