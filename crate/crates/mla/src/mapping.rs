//! Constructive mappings between vertex covers and labelings.
//!
//! A vertex block has two canonical labelings: *type A* (cost 7: four
//! pad-pair duplications from the first auxiliary block plus three
//! encoding-triple duplications from the incident edge blocks) and
//! *type B* (cost 8: six split-encoding duplications from the second
//! auxiliary block plus unit losses of the first and last pad). An edge
//! block is labeled at cost 2 by one triple duplication from a chosen
//! endpoint's vertex block plus a unit loss of the opposite port.
//!
//! Covered vertices get type B, uncovered ones type A, and each edge
//! copies from a covered endpoint; that orientation is what keeps the
//! dependency digraph acyclic, because type B blocks copy only from the
//! auxiliary part, which never needs labeling. `normalize_labeling`
//! rewrites an arbitrary feasible labeling into this canonical shape
//! without ever increasing its cost, which is the engine behind
//! `labeling_to_cover`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{vc_exact, CubicGraph, GraphError, VertexCover};
use crate::labeling::{labeling_cost, Event, Labeling, LossEvent};
use crate::model::{AlignedPair, Genome, Interval};
use crate::reduction::{reduce_graph, BlockMap, BlockMapError, BlockName};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MappingError {
    #[error(transparent)]
    BlockMap(#[from] BlockMapError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid vertex cover: edge ({0}, {1}) has no covered endpoint", edge.0, edge.1)]
    UncoveredEdge { edge: (u32, u32) },
    #[error("vertex {vertex} is not an endpoint of edge ({0}, {1})", edge.0, edge.1)]
    NotAnEndpoint { vertex: u32, edge: (u32, u32) },
}

/// Structural class of one vertex block's labeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockLabelClass {
    TypeA,
    TypeB,
    Other,
}

fn dup(target: Interval, source: Interval) -> Event {
    Event::Dup(crate::labeling::DupEvent {
        genome: Genome::X,
        target,
        source,
    })
}

/// Incident edges of a vertex, read off its block's encoding anchors.
fn incident_edges(blockmap: &BlockMap, vertex: u32) -> Result<Vec<(u32, u32)>, MappingError> {
    let block = blockmap.get(BlockName::VertexVe(vertex))?;
    let mut edges: Vec<(u32, u32)> = block
        .anchors
        .keys()
        .filter_map(|key| {
            let rest = key.strip_prefix("enc:e:")?;
            let (lo, hi) = rest.split_once(':')?;
            Some((lo.parse().ok()?, hi.parse().ok()?))
        })
        .collect();
    edges.sort();
    Ok(edges)
}

/// The cost-7 labeling of a vertex block: pad pairs copied from the first
/// auxiliary block, encoding triples copied from the incident edge blocks.
pub fn type_a_labeling(vertex: u32, blockmap: &BlockMap) -> Result<Vec<Event>, MappingError> {
    let vertex_block = BlockName::VertexVe(vertex);
    let mut events = Vec::with_capacity(7);
    for t in 0..4 {
        let name = format!("z:{}-{}", 2 * t + 1, 2 * t + 2);
        events.push(dup(
            blockmap.anchor(vertex_block, &name)?,
            blockmap.anchor(BlockName::Aux1(vertex), &name)?,
        ));
    }
    for (lo, hi) in incident_edges(blockmap, vertex)? {
        let enc = format!("enc:e:{lo}:{hi}");
        let side = if vertex == lo { "enc:i" } else { "enc:j" };
        events.push(dup(
            blockmap.anchor(vertex_block, &enc)?,
            blockmap.anchor(BlockName::EdgeVe(lo, hi), side)?,
        ));
    }
    Ok(events)
}

/// The cost-8 labeling of a vertex block: six split-encoding duplications
/// from the second auxiliary block plus unit losses of the outer pads.
pub fn type_b_labeling(vertex: u32, blockmap: &BlockMap) -> Result<Vec<Event>, MappingError> {
    let vertex_block = BlockName::VertexVe(vertex);
    let mut events = Vec::with_capacity(8);
    for k in 1..=6 {
        let name = format!("a2src:{k}");
        events.push(dup(
            blockmap.anchor(vertex_block, &name)?,
            blockmap.anchor(BlockName::Aux2(vertex), &name)?,
        ));
    }
    let first_pair = blockmap.anchor(vertex_block, "z:1-2")?;
    let last_pair = blockmap.anchor(vertex_block, "z:7-8")?;
    events.push(Event::Loss(LossEvent {
        genome: Genome::X,
        target: Interval::new(first_pair.start, first_pair.start + 1),
    }));
    events.push(Event::Loss(LossEvent {
        genome: Genome::X,
        target: Interval::new(last_pair.end - 1, last_pair.end),
    }));
    Ok(events)
}

/// The cost-2 labeling of an edge block, copying from `endpoint`'s vertex
/// block and losing the opposite port.
pub fn edge_labeling(
    edge: (u32, u32),
    endpoint: u32,
    blockmap: &BlockMap,
) -> Result<Vec<Event>, MappingError> {
    let (lo, hi) = edge;
    if endpoint != lo && endpoint != hi {
        return Err(MappingError::NotAnEndpoint {
            vertex: endpoint,
            edge,
        });
    }
    let edge_block = BlockName::EdgeVe(lo, hi);
    let enc_anchor = format!("enc:e:{lo}:{hi}");
    let (target_side, loss_side) = if endpoint == lo {
        ("enc:i", "x:j")
    } else {
        ("enc:j", "x:i")
    };
    Ok(vec![
        dup(
            blockmap.anchor(edge_block, target_side)?,
            blockmap.anchor(BlockName::VertexVe(endpoint), &enc_anchor)?,
        ),
        Event::Loss(LossEvent {
            genome: Genome::X,
            target: blockmap.anchor(edge_block, loss_side)?,
        }),
    ])
}

/// Labeling of the whole instance from a vertex cover: type B for covered
/// vertices, type A otherwise, each edge copying from its lowest covered
/// endpoint. Costs exactly `8|V'| + 7(n - |V'|) + 2|E|`.
pub fn cover_to_labeling(
    graph: &CubicGraph,
    cover: &VertexCover,
    pair: &AlignedPair,
    blockmap: &BlockMap,
) -> Result<Labeling, MappingError> {
    graph.validate().map_err(GraphError::from)?;
    if let Some(edge) = cover.uncovered_edge(graph) {
        return Err(MappingError::UncoveredEdge { edge });
    }
    let mut events = Vec::new();
    for vertex in graph.vertices() {
        if cover.contains(vertex) {
            events.extend(type_b_labeling(vertex, blockmap)?);
        } else {
            events.extend(type_a_labeling(vertex, blockmap)?);
        }
    }
    for &(lo, hi) in &graph.edges {
        let endpoint = if cover.contains(lo) { lo } else { hi };
        events.extend(edge_labeling((lo, hi), endpoint, blockmap)?);
    }
    let labeling = Labeling::new(events).canonicalize();
    debug_assert!(crate::labeling::validate_cover(pair, &labeling).is_ok());
    debug_assert!(crate::labeling::is_feasible(&labeling));
    Ok(labeling)
}

/// Exact structural comparison of one vertex block's events against the
/// two canonical labelings.
pub fn classify_vertex_block(
    labeling: &Labeling,
    vertex: u32,
    blockmap: &BlockMap,
) -> Result<BlockLabelClass, MappingError> {
    let block = blockmap.get(BlockName::VertexVe(vertex))?.interval;
    let actual = Labeling::new(labeling.events_in(block)).canonicalize();
    let type_a = Labeling::new(type_a_labeling(vertex, blockmap)?).canonicalize();
    if actual == type_a {
        return Ok(BlockLabelClass::TypeA);
    }
    let type_b = Labeling::new(type_b_labeling(vertex, blockmap)?).canonicalize();
    if actual == type_b {
        return Ok(BlockLabelClass::TypeB);
    }
    Ok(BlockLabelClass::Other)
}

fn normalize_with_classes(
    graph: &CubicGraph,
    blockmap: &BlockMap,
    labeling: &Labeling,
) -> Result<(Labeling, Vec<BlockLabelClass>), MappingError> {
    let n = graph.n as usize;
    let mut classes = vec![BlockLabelClass::Other; n + 1];
    let mut vertex_events: Vec<Vec<Event>> = vec![Vec::new(); n + 1];

    // Step 1: a block at the local minimum 7 must already be the unique
    // type A covering; anything costlier is rewritten to type B.
    for vertex in graph.vertices() {
        let block = blockmap.get(BlockName::VertexVe(vertex))?.interval;
        let v = vertex as usize;
        if labeling.restricted_cost(block) == 7 {
            classes[v] = BlockLabelClass::TypeA;
            vertex_events[v] = labeling.events_in(block);
        } else {
            classes[v] = BlockLabelClass::TypeB;
            vertex_events[v] = type_b_labeling(vertex, blockmap)?;
        }
    }

    // Step 2: an edge between two type A blocks cannot be labeled at cost
    // 2 feasibly, so promoting one endpoint pays for itself; promote the
    // lower one.
    for &(lo, hi) in &graph.edges {
        if classes[lo as usize] == BlockLabelClass::TypeA
            && classes[hi as usize] == BlockLabelClass::TypeA
        {
            classes[lo as usize] = BlockLabelClass::TypeB;
            vertex_events[lo as usize] = type_b_labeling(lo, blockmap)?;
        }
    }

    // Step 3: rewrite every edge block from its lowest type B endpoint.
    let mut events: Vec<Event> = vertex_events.into_iter().flatten().collect();
    for &(lo, hi) in &graph.edges {
        let endpoint = if classes[lo as usize] == BlockLabelClass::TypeB {
            lo
        } else {
            debug_assert_eq!(classes[hi as usize], BlockLabelClass::TypeB);
            hi
        };
        events.extend(edge_labeling((lo, hi), endpoint, blockmap)?);
    }
    Ok((Labeling::new(events).canonicalize(), classes))
}

/// Rewrites a feasible covering labeling of a reduction instance into the
/// canonical type A / type B shape. The result is feasible, never costs
/// more than the input, and costs exactly `8p + 7(n - p) + 2|E|` where `p`
/// counts the type B blocks.
pub fn normalize_labeling(
    graph: &CubicGraph,
    pair: &AlignedPair,
    blockmap: &BlockMap,
    labeling: &Labeling,
) -> Result<Labeling, MappingError> {
    let (normalized, _) = normalize_with_classes(graph, blockmap, labeling)?;
    debug_assert!(crate::labeling::validate_cover(pair, &normalized).is_ok());
    debug_assert!(crate::labeling::is_feasible(&normalized));
    debug_assert!(labeling_cost(&normalized) <= labeling_cost(labeling));
    Ok(normalized)
}

/// Normalizes, then reads the cover off the type B blocks. If the input
/// costs at most `8p + 7(n - p) + 2|E|` the cover has at most `p`
/// vertices.
pub fn labeling_to_cover(
    graph: &CubicGraph,
    pair: &AlignedPair,
    blockmap: &BlockMap,
    labeling: &Labeling,
) -> Result<VertexCover, MappingError> {
    let (normalized, classes) = normalize_with_classes(graph, blockmap, labeling)?;
    debug_assert!(crate::labeling::validate_cover(pair, &normalized).is_ok());
    let cover = VertexCover::new(
        graph
            .vertices()
            .filter(|&v| classes[v as usize] == BlockLabelClass::TypeB),
    );
    if let Some(edge) = cover.uncovered_edge(graph) {
        return Err(MappingError::UncoveredEdge { edge });
    }
    Ok(cover)
}

/// Arithmetic summary of the reduction on one graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LReductionReport {
    pub n: u32,
    pub edges: usize,
    pub tau: usize,
    pub opt_cost: usize,
    pub identity_ok: bool,
    pub apx_bound_ok: bool,
}

/// Solves vertex cover exactly, maps the optimum through the reduction,
/// and checks the two arithmetic facts that make the reduction
/// approximation-preserving: `opt_cost = tau + 10 n` (since `|E| = 3n/2`)
/// and `opt_cost <= 41 tau` (since `tau >= n/4`).
pub fn lreduction_report(graph: &CubicGraph) -> Result<LReductionReport, MappingError> {
    let cover = vc_exact(graph)?;
    let tau = cover.size();
    let (pair, blockmap) = reduce_graph(graph)?;
    let labeling = cover_to_labeling(graph, &cover, &pair, &blockmap)?;
    let opt_cost = labeling_cost(&labeling);
    Ok(LReductionReport {
        n: graph.n,
        edges: graph.edge_count(),
        tau,
        opt_cost,
        identity_ok: opt_cost == tau + 10 * graph.n as usize,
        apx_bound_ok: opt_cost <= 41 * tau,
    })
}
