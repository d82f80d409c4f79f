//! Cubic (3-regular) graphs, the global edge ordering used by the
//! reduction, vertex cover solvers, and instance generators.
//!
//! Vertices are 1-based. Edges are unordered pairs stored as `(lo, hi)`
//! with `lo < hi`, and the edge list is kept sorted; the position of an
//! edge among the three edges of a vertex in that global order is its
//! rank (1..=3).

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap for the exact vertex cover search.
pub const VC_EXACT_MAX_VERTICES: u32 = 24;

/// Attempt limit for rejection sampling of random cubic graphs.
const RANDOM_CUBIC_MAX_ATTEMPTS: usize = 10_000;

/// An undirected graph intended to be simple and 3-regular.
///
/// Values deserialized from files may violate the invariants; call
/// [`CubicGraph::validate`] before trusting one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicGraph {
    pub n: u32,
    pub edges: Vec<(u32, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphViolation {
    #[error("vertex count {n} is odd or below 4")]
    BadVertexCount { n: u32 },
    #[error("edge ({0}, {1}) has an endpoint outside 1..={2}", edge.0, edge.1, n)]
    VertexOutOfRange { edge: (u32, u32), n: u32 },
    #[error("loop at vertex {vertex}")]
    LoopEdge { vertex: u32 },
    #[error("edge ({0}, {1}) is not in (lo, hi) order", edge.0, edge.1)]
    UnorientedEdge { edge: (u32, u32) },
    #[error("edge list is not sorted at ({0}, {1})", edge.0, edge.1)]
    UnsortedEdges { edge: (u32, u32) },
    #[error("duplicate edge ({0}, {1})", edge.0, edge.1)]
    DuplicateEdge { edge: (u32, u32) },
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    WrongDegree { vertex: u32, degree: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid cubic graph: {0}")]
    Invalid(#[from] GraphViolation),
    #[error("vertex count must be an even number >= 4, got {n}")]
    BadParity { n: u32 },
    #[error("could not sample a simple cubic graph in {attempts} attempts")]
    RejectionLimit { attempts: usize },
    #[error("graph too large for exact search: {n} > {max}")]
    TooLarge { n: u32, max: u32 },
    #[error("invalid graph JSON: {0}")]
    Json(String),
}

impl CubicGraph {
    /// Normalizes edge orientation and order, then validates.
    pub fn new(n: u32, mut edges: Vec<(u32, u32)>) -> Result<Self, GraphViolation> {
        for edge in edges.iter_mut() {
            if edge.0 > edge.1 {
                *edge = (edge.1, edge.0);
            }
        }
        edges.sort();
        let graph = CubicGraph { n, edges };
        graph.validate()?;
        Ok(graph)
    }

    /// Checks simplicity, 3-regularity and canonical edge order.
    pub fn validate(&self) -> Result<(), GraphViolation> {
        if self.n < 4 || !self.n.is_multiple_of(2) {
            return Err(GraphViolation::BadVertexCount { n: self.n });
        }
        let mut degree = vec![0usize; self.n as usize + 1];
        let mut prev: Option<(u32, u32)> = None;
        for &edge in &self.edges {
            let (lo, hi) = edge;
            if lo == hi {
                return Err(GraphViolation::LoopEdge { vertex: lo });
            }
            if lo > hi {
                return Err(GraphViolation::UnorientedEdge { edge });
            }
            if lo < 1 || hi > self.n {
                return Err(GraphViolation::VertexOutOfRange { edge, n: self.n });
            }
            if let Some(p) = prev {
                if p == edge {
                    return Err(GraphViolation::DuplicateEdge { edge });
                }
                if p > edge {
                    return Err(GraphViolation::UnsortedEdges { edge });
                }
            }
            prev = Some(edge);
            degree[lo as usize] += 1;
            degree[hi as usize] += 1;
        }
        for vertex in 1..=self.n {
            if degree[vertex as usize] != 3 {
                return Err(GraphViolation::WrongDegree {
                    vertex,
                    degree: degree[vertex as usize],
                });
            }
        }
        Ok(())
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> {
        1..=self.n
    }

    pub fn neighbors(&self, vertex: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(3);
        for &(lo, hi) in &self.edges {
            if lo == vertex {
                out.push(hi);
            } else if hi == vertex {
                out.push(lo);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serialization cannot fail")
    }

    /// Parses and validates a graph file.
    pub fn from_json(document: &[u8]) -> Result<Self, GraphError> {
        let graph: CubicGraph =
            serde_json::from_slice(document).map_err(|e| GraphError::Json(e.to_string()))?;
        graph.validate()?;
        Ok(graph)
    }
}

/// Checks the cubic-graph invariants (spec-level entry point).
pub fn validate_cubic(graph: &CubicGraph) -> Result<(), GraphViolation> {
    graph.validate()
}

/// The global edge order and the per-vertex ranks it induces.
#[derive(Debug, Clone)]
pub struct EdgeOrder {
    edges: Vec<(u32, u32)>,
    incident: BTreeMap<u32, Vec<(u32, u32)>>,
}

impl EdgeOrder {
    /// All edges in the global `(lo, hi)` lexicographic order.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// The three edges of `vertex` in rank order (rank = index + 1).
    pub fn incident(&self, vertex: u32) -> &[(u32, u32)] {
        &self.incident[&vertex]
    }

    /// Rank (1..=3) of `edge` among the edges of `vertex`.
    pub fn rank(&self, vertex: u32, edge: (u32, u32)) -> Option<u32> {
        self.incident
            .get(&vertex)?
            .iter()
            .position(|&e| e == edge)
            .map(|p| p as u32 + 1)
    }
}

/// Sorts edges by `(lo, hi)` and ranks each vertex's three edges 1..=3 in
/// that order.
pub fn order_edges(graph: &CubicGraph) -> EdgeOrder {
    let mut edges = graph.edges.clone();
    edges.sort();
    let mut incident: BTreeMap<u32, Vec<(u32, u32)>> = BTreeMap::new();
    for v in graph.vertices() {
        incident.insert(v, Vec::with_capacity(3));
    }
    for &edge in &edges {
        incident.get_mut(&edge.0).unwrap().push(edge);
        incident.get_mut(&edge.1).unwrap().push(edge);
    }
    EdgeOrder { edges, incident }
}

/// A set of vertices meant to touch every edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCover {
    pub vertices: BTreeSet<u32>,
}

impl VertexCover {
    pub fn new(vertices: impl IntoIterator<Item = u32>) -> Self {
        VertexCover {
            vertices: vertices.into_iter().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn contains(&self, vertex: u32) -> bool {
        self.vertices.contains(&vertex)
    }

    /// First edge with no endpoint in the set, if any.
    pub fn uncovered_edge(&self, graph: &CubicGraph) -> Option<(u32, u32)> {
        graph
            .edges
            .iter()
            .copied()
            .find(|&(lo, hi)| !self.contains(lo) && !self.contains(hi))
    }

    pub fn is_cover(&self, graph: &CubicGraph) -> bool {
        self.uncovered_edge(graph).is_none()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cover serialization cannot fail")
    }

    pub fn from_json(document: &[u8]) -> Result<Self, GraphError> {
        serde_json::from_slice(document).map_err(|e| GraphError::Json(e.to_string()))
    }
}

struct VcSearch {
    adjacency: Vec<Vec<u32>>,
    best_size: usize,
    best: Vec<u32>,
}

impl VcSearch {
    /// Greedy maximal matching on the edges still alive; its size lower
    /// bounds the cover size for those edges.
    fn matching_bound(&self, alive: &[bool], chosen: &[bool]) -> usize {
        let n = alive.len() - 1;
        let mut used = vec![false; n + 1];
        let mut bound = 0;
        for v in 1..=n {
            if !alive[v] || chosen[v] || used[v] {
                continue;
            }
            for &w in &self.adjacency[v] {
                let w = w as usize;
                if alive[w] && !chosen[w] && !used[w] && w > v {
                    used[v] = true;
                    used[w] = true;
                    bound += 1;
                    break;
                }
            }
        }
        bound
    }

    fn uncovered_vertex(&self, alive: &[bool], chosen: &[bool]) -> Option<usize> {
        // Max-degree vertex among those with an uncovered incident edge.
        let n = alive.len() - 1;
        let mut pick = None;
        let mut pick_degree = 0;
        for v in 1..=n {
            if !alive[v] || chosen[v] {
                continue;
            }
            let degree = self.adjacency[v]
                .iter()
                .filter(|&&w| alive[w as usize] && !chosen[w as usize])
                .count();
            if degree > pick_degree {
                pick = Some(v);
                pick_degree = degree;
            }
        }
        pick
    }

    fn search(&mut self, alive: &mut [bool], chosen: &mut [bool], size: usize) {
        if size + self.matching_bound(alive, chosen) > self.best_size {
            return;
        }
        let Some(v) = self.uncovered_vertex(alive, chosen) else {
            let mut cover: Vec<u32> = (1..alive.len() as u32)
                .filter(|&v| chosen[v as usize])
                .collect();
            cover.sort();
            if size < self.best_size || (size == self.best_size && cover < self.best) {
                self.best_size = size;
                self.best = cover;
            }
            return;
        };
        // Branch 1: v joins the cover.
        chosen[v] = true;
        self.search(alive, chosen, size + 1);
        chosen[v] = false;
        // Branch 2: v stays out, so all its live neighbors join.
        let added: Vec<usize> = self.adjacency[v]
            .iter()
            .map(|&w| w as usize)
            .filter(|&w| alive[w] && !chosen[w])
            .collect();
        if !added.is_empty() {
            for &w in &added {
                chosen[w] = true;
            }
            let was_alive = alive[v];
            alive[v] = false;
            self.search(alive, chosen, size + added.len());
            alive[v] = was_alive;
            for &w in &added {
                chosen[w] = false;
            }
        }
    }
}

/// Minimum vertex cover by branch and bound ("v in cover or N(v) in
/// cover"), returning the lexicographically smallest minimum cover.
pub fn vc_exact(graph: &CubicGraph) -> Result<VertexCover, GraphError> {
    graph.validate()?;
    if graph.n > VC_EXACT_MAX_VERTICES {
        return Err(GraphError::TooLarge {
            n: graph.n,
            max: VC_EXACT_MAX_VERTICES,
        });
    }
    let n = graph.n as usize;
    let mut adjacency = vec![Vec::new(); n + 1];
    for &(lo, hi) in &graph.edges {
        adjacency[lo as usize].push(hi);
        adjacency[hi as usize].push(lo);
    }
    let mut search = VcSearch {
        adjacency,
        best_size: n,
        best: (1..=graph.n).collect(),
    };
    let mut alive = vec![true; n + 1];
    let mut chosen = vec![false; n + 1];
    search.search(&mut alive, &mut chosen, 0);
    Ok(VertexCover::new(search.best))
}

/// 2-approximate cover: both endpoints of a greedily built maximal
/// matching (edges scanned in global order).
pub fn vc_approx_matching(graph: &CubicGraph) -> Result<VertexCover, GraphError> {
    graph.validate()?;
    let mut matched = BTreeSet::new();
    for &(lo, hi) in &graph.edges {
        if !matched.contains(&lo) && !matched.contains(&hi) {
            matched.insert(lo);
            matched.insert(hi);
        }
    }
    Ok(VertexCover { vertices: matched })
}

/// The complete graph on four vertices, the smallest cubic graph.
pub fn gen_k4() -> CubicGraph {
    CubicGraph::new(4, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
        .expect("K4 is a valid cubic graph")
}

/// Random cubic graph as the union of three seeded perfect matchings,
/// rejection-sampled until simple. Deterministic per seed.
pub fn gen_random_cubic(n: u32, seed: u64) -> Result<CubicGraph, GraphError> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(GraphError::BadParity { n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vertices: Vec<u32> = (1..=n).collect();
    for _ in 0..RANDOM_CUBIC_MAX_ATTEMPTS {
        let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
        let mut simple = true;
        'matchings: for _ in 0..3 {
            vertices.shuffle(&mut rng);
            for pair in vertices.chunks_exact(2) {
                let edge = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                if !edges.insert(edge) {
                    simple = false;
                    break 'matchings;
                }
            }
        }
        if simple {
            let graph = CubicGraph {
                n,
                edges: edges.into_iter().collect(),
            };
            graph.validate()?;
            return Ok(graph);
        }
    }
    Err(GraphError::RejectionLimit {
        attempts: RANDOM_CUBIC_MAX_ATTEMPTS,
    })
}
