//! Minimum Labeling Alignment (MLA): given two aligned genomes, explain
//! every unmatched character as a duplication (copied from an identical
//! substring of the same genome) or a loss, at minimum cost (1 per
//! duplication, 1 per lost character), subject to the duplication
//! dependency relation being acyclic.
//!
//! Besides the exact desk-scale solvers, the crate implements the
//! reduction that encodes minimum vertex cover on cubic graphs as an MLA
//! instance, the constructive mappings between covers and labelings in
//! both directions, and enumeration-based verifiers for the per-block cost
//! facts those mappings rely on.

pub mod graph;
pub mod labeling;
pub mod lemmas;
pub mod mapping;
pub mod model;
pub mod reduction;
pub mod solver;

pub use graph::{
    gen_k4, gen_random_cubic, order_edges, vc_approx_matching, vc_exact, CubicGraph, VertexCover,
};
pub use labeling::{
    dependency_digraph, is_feasible, is_maximal_dup, labeling_cost, validate_cover, DupEvent,
    Event, Labeling, LossEvent,
};
pub use model::{AlignedPair, ColumnClass, Genome, Interval, SymbolToken};
pub use reduction::{reduce_graph, Block, BlockMap, BlockName};
