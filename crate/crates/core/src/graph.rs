//! Crisp graph containers shared by every stage of the pipeline.
//!
//! [`CrispDigraph`] is the graph as ingested from an edge table: a vertex set
//! plus ordered `(source, destination)` arcs. [`UndirectedGraph`] is the
//! compact, index-based form used by percolation and the metric suite. Its
//! vertices are always stored in lexicographic id order, so index `i` is the
//! `i`-th smallest id and every derived quantity is independent of input order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of a vertex: a non-empty token.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(id: impl Into<String>) -> Self {
        VertexId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_owned())
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId(s)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("arc {0} -> {1} references a vertex outside the vertex set")]
    DanglingArc(VertexId, VertexId),
    #[error("self-arc on vertex {0}")]
    SelfArc(VertexId),
    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(VertexId, VertexId),
    #[error("edge {0} -- {1} references a vertex outside the vertex set")]
    DanglingEdge(VertexId, VertexId),
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
}

/// Directed graph with a vertex set and a set of ordered arcs.
///
/// Arc endpoints are always members of the vertex set and self-arcs cannot
/// be represented.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrispDigraph {
    vertices: BTreeSet<VertexId>,
    arcs: BTreeSet<(VertexId, VertexId)>,
}

impl CrispDigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a digraph from an explicit vertex set and arc list.
    pub fn from_parts<V, A>(vertices: V, arcs: A) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = VertexId>,
        A: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = CrispDigraph {
            vertices: vertices.into_iter().collect(),
            arcs: BTreeSet::new(),
        };
        for (s, d) in arcs {
            if !g.vertices.contains(&s) || !g.vertices.contains(&d) {
                return Err(GraphError::DanglingArc(s, d));
            }
            g.insert_arc(s, d)?;
        }
        Ok(g)
    }

    /// Builds a digraph whose vertex set is the union of the arc endpoints.
    pub fn from_arcs<A>(arcs: A) -> Result<Self, GraphError>
    where
        A: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = CrispDigraph::new();
        for (s, d) in arcs {
            g.add_vertex(s.clone());
            g.add_vertex(d.clone());
            g.insert_arc(s, d)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId) -> bool {
        self.vertices.insert(v)
    }

    /// Inserts an arc, adding its endpoints to the vertex set.
    pub fn add_arc(&mut self, source: VertexId, destination: VertexId) -> Result<(), GraphError> {
        if source == destination {
            return Err(GraphError::SelfArc(source));
        }
        self.vertices.insert(source.clone());
        self.vertices.insert(destination.clone());
        self.insert_arc(source, destination)
    }

    fn insert_arc(&mut self, s: VertexId, d: VertexId) -> Result<(), GraphError> {
        if s == d {
            return Err(GraphError::SelfArc(s));
        }
        let arc = (s, d);
        if self.arcs.contains(&arc) {
            return Err(GraphError::DuplicateArc(arc.0, arc.1));
        }
        self.arcs.insert(arc);
        Ok(())
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn arcs(&self) -> &BTreeSet<(VertexId, VertexId)> {
        &self.arcs
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn contains_arc(&self, source: &VertexId, destination: &VertexId) -> bool {
        // BTreeSet<(A, B)> has no borrowed lookup for tuples
        self.arcs.contains(&(source.clone(), destination.clone()))
    }

    /// Out-degree of every vertex (zero for sinks).
    pub fn out_degrees(&self) -> BTreeMap<&VertexId, usize> {
        let mut out: BTreeMap<&VertexId, usize> = self.vertices.iter().map(|v| (v, 0)).collect();
        for (s, _) in &self.arcs {
            *out.get_mut(s).expect("arc source in vertex set") += 1;
        }
        out
    }

    /// Total degree (in + out) of every vertex.
    pub fn total_degrees(&self) -> BTreeMap<&VertexId, usize> {
        let mut deg: BTreeMap<&VertexId, usize> = self.vertices.iter().map(|v| (v, 0)).collect();
        for (s, d) in &self.arcs {
            *deg.get_mut(s).expect("arc source in vertex set") += 1;
            *deg.get_mut(d).expect("arc destination in vertex set") += 1;
        }
        deg
    }

    /// Subgraph on `keep`, retaining every arc with both endpoints kept.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> CrispDigraph {
        CrispDigraph {
            vertices: self.vertices.intersection(keep).cloned().collect(),
            arcs: self
                .arcs
                .iter()
                .filter(|(s, d)| keep.contains(s) && keep.contains(d))
                .cloned()
                .collect(),
        }
    }

    /// Unordered edge `{u, v}` for every arc `u -> v` or `v -> u`; the vertex
    /// set is preserved.
    pub fn undirected_projection(&self) -> UndirectedGraph {
        let edges = self.arcs.iter().map(|(s, d)| (s.clone(), d.clone()));
        UndirectedGraph::build(self.vertices.iter().cloned(), edges, true)
            .expect("digraph arcs are valid undirected edges")
    }
}

/// Simple undirected graph with vertices kept in sorted id order and sorted
/// adjacency lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UndirectedGraph {
    ids: Vec<VertexId>,
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl UndirectedGraph {
    /// Builds a graph from a vertex set and unordered edges.
    ///
    /// Repeated edges (in either orientation) are rejected; so are self-loops
    /// and edges naming unknown vertices.
    pub fn from_edges<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = VertexId>,
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        Self::build(vertices, edges, false)
    }

    fn build<V, E>(vertices: V, edges: E, collapse: bool) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = VertexId>,
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut ids: Vec<VertexId> = vertices.into_iter().collect();
        ids.sort();
        ids.dedup();
        let mut adjacency = vec![Vec::new(); ids.len()];
        for (u, v) in edges {
            let (Ok(a), Ok(b)) = (ids.binary_search(&u), ids.binary_search(&v)) else {
                return Err(GraphError::DanglingEdge(u, v));
            };
            if a == b {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let mut edge_count = 0;
        for (i, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if !collapse {
                if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                    return Err(GraphError::DuplicateArc(ids[i].clone(), ids[w[0]].clone()));
                }
            }
            list.dedup();
            edge_count += list.len();
        }
        Ok(UndirectedGraph {
            ids,
            adjacency,
            edge_count: edge_count / 2,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Vertex ids in ascending order; position is the vertex index.
    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn id(&self, index: usize) -> &VertexId {
        &self.ids[index]
    }

    pub fn index_of(&self, id: &VertexId) -> Option<usize> {
        self.ids.binary_search(id).ok()
    }

    /// Sorted neighbour indices of vertex `index`.
    pub fn neighbors(&self, index: usize) -> &[usize] {
        &self.adjacency[index]
    }

    pub fn degree(&self, index: usize) -> usize {
        self.adjacency[index].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Edges as index pairs `(a, b)` with `a < b`, in ascending order.
    pub fn edge_indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
    }

    /// Edges as id pairs, lexicographically smaller endpoint first.
    pub fn edges(&self) -> impl Iterator<Item = (&VertexId, &VertexId)> + '_ {
        self.edge_indices().map(|(a, b)| (&self.ids[a], &self.ids[b]))
    }

    /// `2|E| / |V|`, or 0 for the empty graph.
    pub fn average_degree(&self) -> f64 {
        if self.ids.is_empty() {
            0.0
        } else {
            2.0 * self.edge_count as f64 / self.ids.len() as f64
        }
    }

    /// Graph with the vertices flagged in `removed` deleted along with every
    /// incident edge.
    pub fn without_vertices(&self, removed: &[bool]) -> UndirectedGraph {
        assert_eq!(removed.len(), self.ids.len());
        let mut remap = vec![usize::MAX; self.ids.len()];
        let mut ids = Vec::with_capacity(self.ids.len());
        for (i, id) in self.ids.iter().enumerate() {
            if !removed[i] {
                remap[i] = ids.len();
                ids.push(id.clone());
            }
        }
        let mut edge_count = 0;
        let adjacency: Vec<Vec<usize>> = self
            .adjacency
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed[*i])
            .map(|(_, list)| {
                // remap is monotone, so sorted order survives
                let kept: Vec<usize> = list
                    .iter()
                    .filter(|&&j| !removed[j])
                    .map(|&j| remap[j])
                    .collect();
                edge_count += kept.len();
                kept
            })
            .collect();
        UndirectedGraph {
            ids,
            adjacency,
            edge_count: edge_count / 2,
        }
    }

    /// Digraph carrying each edge once, smaller id as source.
    pub fn to_digraph_once(&self) -> CrispDigraph {
        CrispDigraph {
            vertices: self.ids.iter().cloned().collect(),
            arcs: self.edges().map(|(a, b)| (a.clone(), b.clone())).collect(),
        }
    }

    /// Digraph carrying each edge as a symmetric pair of arcs.
    pub fn to_digraph_symmetric(&self) -> CrispDigraph {
        CrispDigraph {
            vertices: self.ids.iter().cloned().collect(),
            arcs: self
                .edges()
                .flat_map(|(a, b)| [(a.clone(), b.clone()), (b.clone(), a.clone())])
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> VertexId {
        VertexId::from(s)
    }

    #[test]
    fn projection_collapses_antiparallel_arcs() {
        let g = CrispDigraph::from_arcs([(v("a"), v("b")), (v("b"), v("a"))]).unwrap();
        let u = g.undirected_projection();
        assert_eq!(g.arc_count(), 2);
        assert_eq!(u.edge_count(), 1);
        assert!(u.has_edge(0, 1));
    }

    #[test]
    fn projection_of_single_arc_and_cycle() {
        let g = CrispDigraph::from_arcs([(v("a"), v("b"))]).unwrap();
        assert_eq!(g.undirected_projection().edge_count(), 1);

        let cycle =
            CrispDigraph::from_arcs([(v("a"), v("b")), (v("b"), v("c")), (v("c"), v("a"))])
                .unwrap();
        let tri = cycle.undirected_projection();
        assert_eq!(tri.edge_count(), 3);
        assert!((0..3).all(|i| tri.degree(i) == 2));
    }

    #[test]
    fn projection_keeps_isolated_vertices() {
        let g = CrispDigraph::from_parts([v("a"), v("b"), v("z")], [(v("a"), v("b"))]).unwrap();
        let u = g.undirected_projection();
        assert_eq!(u.vertex_count(), 3);
        assert_eq!(u.degree(u.index_of(&v("z")).unwrap()), 0);
    }

    #[test]
    fn digraph_rejects_bad_arcs() {
        assert_eq!(
            CrispDigraph::from_arcs([(v("a"), v("a"))]),
            Err(GraphError::SelfArc(v("a")))
        );
        assert_eq!(
            CrispDigraph::from_arcs([(v("a"), v("b")), (v("a"), v("b"))]),
            Err(GraphError::DuplicateArc(v("a"), v("b")))
        );
        assert!(matches!(
            CrispDigraph::from_parts([v("a")], [(v("a"), v("b"))]),
            Err(GraphError::DanglingArc(..))
        ));
    }

    #[test]
    fn undirected_rejects_repeated_edge() {
        let err = UndirectedGraph::from_edges([v("a"), v("b")], [(v("a"), v("b")), (v("b"), v("a"))]);
        assert!(matches!(err, Err(GraphError::DuplicateArc(..))));
    }

    #[test]
    fn removal_preserves_sorted_indices() {
        let g = UndirectedGraph::from_edges(
            ["a", "b", "c", "d"].map(v),
            [(v("a"), v("b")), (v("b"), v("c")), (v("c"), v("d")), (v("a"), v("d"))],
        )
        .unwrap();
        let h = g.without_vertices(&[false, true, false, false]);
        assert_eq!(h.ids(), &[v("a"), v("c"), v("d")]);
        assert_eq!(h.edge_count(), 2);
        assert!(h.has_edge(0, 2) && h.has_edge(1, 2) && !h.has_edge(0, 1));
    }
}
