//! Enumeration-backed checks of the per-block cost facts and the
//! arithmetic identities behind the reduction, bundled for the
//! `check-lemmas` command and the acceptance suite.
//!
//! The certified optimum for a graph's instance is `tau + 10 n`: the
//! upper bound is the constructed labeling of a minimum cover; the lower
//! bound combines the relaxed per-block minima (7 per vertex block with
//! the type A covering as unique argmin, 2 per edge block with every
//! argmin copying from an endpoint's vertex block) with the
//! cost-monotone normalization, which would turn any cheaper labeling
//! into a vertex cover smaller than tau.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{vc_approx_matching, vc_exact, CubicGraph, GraphError};
use crate::labeling::{is_feasible, labeling_cost, validate_cover, Event, Labeling, LossEvent};
use crate::mapping::{
    cover_to_labeling, lreduction_report, normalize_labeling, type_a_labeling, MappingError,
};
use crate::model::{AlignedPair, Genome, Interval};
use crate::reduction::{reduce_graph, BlockMap, BlockName};
use crate::solver::{solve_block_relaxed, SolveError};

#[derive(Debug, Error)]
pub enum LemmaError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    BlockMap(#[from] crate::reduction::BlockMapError),
}

/// One named check with a human-readable outcome line.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaReport {
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&LemmaCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(LemmaCheck {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

/// Every vertex block's relaxed minimum is 7, attained only by type A.
pub fn check_vertex_block_minima(
    pair: &AlignedPair,
    blockmap: &BlockMap,
) -> Result<(bool, String), LemmaError> {
    let mut blocks = 0;
    for block in blockmap.vertex_blocks() {
        let BlockName::VertexVe(vertex) = block.name else {
            unreachable!()
        };
        let (min_cost, argmins) = solve_block_relaxed(pair, block.interval)?;
        let type_a = Labeling::new(type_a_labeling(vertex, blockmap)?).canonicalize();
        if min_cost != 7 || argmins != vec![type_a] {
            return Ok((
                false,
                format!(
                    "block {} has relaxed min {min_cost} with {} argmins",
                    block.name,
                    argmins.len()
                ),
            ));
        }
        blocks += 1;
    }
    Ok((
        true,
        format!("min 7 with the type A covering as unique argmin ({blocks} blocks)"),
    ))
}

/// Every edge block's relaxed minimum is 2, and every argmin contains a
/// duplication copying from an endpoint's vertex block.
pub fn check_edge_block_minima(
    pair: &AlignedPair,
    blockmap: &BlockMap,
) -> Result<(bool, String), LemmaError> {
    let mut blocks = 0;
    for block in blockmap.edge_blocks() {
        let BlockName::EdgeVe(lo, hi) = block.name else {
            unreachable!()
        };
        let (min_cost, argmins) = solve_block_relaxed(pair, block.interval)?;
        if min_cost != 2 {
            return Ok((
                false,
                format!("block {} has relaxed min {min_cost}", block.name),
            ));
        }
        let lo_block = blockmap.get(BlockName::VertexVe(lo))?.interval;
        let hi_block = blockmap.get(BlockName::VertexVe(hi))?.interval;
        for argmin in &argmins {
            let endpoint_sourced = argmin.events.iter().filter_map(Event::as_dup).any(|d| {
                lo_block.contains_interval(&d.source) || hi_block.contains_interval(&d.source)
            });
            if !endpoint_sourced {
                return Ok((
                    false,
                    format!(
                        "block {} has an argmin without an endpoint-sourced duplication",
                        block.name
                    ),
                ));
            }
        }
        blocks += 1;
    }
    Ok((
        true,
        format!("min 2, every argmin copies from an endpoint block ({blocks} blocks)"),
    ))
}

/// Certificate that `tau + 10 n` is the instance's optimal cost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimumCertificate {
    pub tau: usize,
    pub opt_cost: usize,
    pub block_minima_ok: bool,
    pub upper_bound_ok: bool,
}

impl OptimumCertificate {
    pub fn certified(&self) -> bool {
        self.block_minima_ok && self.upper_bound_ok
    }
}

/// Certifies the optimum of `graph`'s instance both ways: block-minima
/// enumeration for the lower bound, the constructed labeling of a
/// minimum cover for the upper bound.
pub fn certify_optimum(graph: &CubicGraph) -> Result<OptimumCertificate, LemmaError> {
    let cover = vc_exact(graph)?;
    let tau = cover.size();
    let (pair, blockmap) = reduce_graph(graph)?;
    let (vertex_ok, _) = check_vertex_block_minima(&pair, &blockmap)?;
    let (edge_ok, _) = check_edge_block_minima(&pair, &blockmap)?;
    let labeling = cover_to_labeling(graph, &cover, &pair, &blockmap)?;
    let opt_cost = tau + 10 * graph.n as usize;
    let upper_bound_ok = validate_cover(&pair, &labeling).is_ok()
        && is_feasible(&labeling)
        && labeling_cost(&labeling) == opt_cost;
    Ok(OptimumCertificate {
        tau,
        opt_cost,
        block_minima_ok: vertex_ok && edge_ok,
        upper_bound_ok,
    })
}

/// An expensive but feasible rewrite of `labeling`: one vertex block and
/// every edge block replaced by all-losses.
fn adversarial_perturbation(labeling: &Labeling, blockmap: &BlockMap) -> Labeling {
    let rewritten: Vec<Interval> = blockmap
        .vertex_blocks()
        .take(1)
        .chain(blockmap.edge_blocks())
        .map(|b| b.interval)
        .collect();
    let mut events: Vec<Event> = labeling
        .events
        .iter()
        .filter(|e| !rewritten.iter().any(|b| b.contains_interval(&e.target())))
        .cloned()
        .collect();
    for block in &rewritten {
        events.push(Event::Loss(LossEvent {
            genome: Genome::X,
            target: Interval::new(block.start + 1, block.end),
        }));
    }
    Labeling::new(events).canonicalize()
}

/// Runs the whole battery of checks on one graph.
pub fn check_lemmas(graph: &CubicGraph) -> Result<LemmaReport, LemmaError> {
    graph.validate().map_err(GraphError::from)?;
    let n = graph.n as usize;
    let edge_count = graph.edge_count();
    let (pair, blockmap) = reduce_graph(graph)?;
    let mut report = LemmaReport { checks: Vec::new() };

    let (passed, detail) = check_vertex_block_minima(&pair, &blockmap)?;
    report.push("vertex-block-minimum", passed, detail);

    let (passed, detail) = check_edge_block_minima(&pair, &blockmap)?;
    report.push("edge-block-minimum", passed, detail);

    let exact_cover = vc_exact(graph)?;
    let tau = exact_cover.size();
    let optimal = cover_to_labeling(graph, &exact_cover, &pair, &blockmap)?;
    let expected = 8 * tau + 7 * (n - tau) + 2 * edge_count;
    let forward_ok = validate_cover(&pair, &optimal).is_ok()
        && is_feasible(&optimal)
        && labeling_cost(&optimal) == expected;
    report.push(
        "cover-to-labeling",
        forward_ok,
        format!(
            "cover of size {tau} maps to a feasible labeling of cost {} = 8*{tau} + 7*{} + 2*{edge_count}",
            labeling_cost(&optimal),
            n - tau
        ),
    );

    let perturbed = adversarial_perturbation(&optimal, &blockmap);
    let normalized = normalize_labeling(graph, &pair, &blockmap, &perturbed)?;
    let monotone_ok = validate_cover(&pair, &perturbed).is_ok()
        && is_feasible(&perturbed)
        && labeling_cost(&normalized) <= labeling_cost(&perturbed)
        && is_feasible(&normalized);
    report.push(
        "normalization-monotone",
        monotone_ok,
        format!(
            "perturbed cost {} normalizes to {}",
            labeling_cost(&perturbed),
            labeling_cost(&normalized)
        ),
    );

    let mut round_trip_ok = true;
    let mut detail = String::new();
    for (kind, cover) in [
        ("exact", exact_cover.clone()),
        ("approx", vc_approx_matching(graph)?),
    ] {
        let labeling = cover_to_labeling(graph, &cover, &pair, &blockmap)?;
        let back = crate::mapping::labeling_to_cover(graph, &pair, &blockmap, &labeling)?;
        if !back.is_cover(graph) || back.size() > cover.size() {
            round_trip_ok = false;
        }
        if !detail.is_empty() {
            detail.push_str(", ");
        }
        detail.push_str(&format!("{kind}: {} -> {}", cover.size(), back.size()));
    }
    report.push("labeling-to-cover-roundtrip", round_trip_ok, detail);

    let certificate = certify_optimum(graph)?;
    report.push(
        "optimum-identity",
        certificate.certified() && certificate.opt_cost == tau + 10 * n,
        format!("optimum {} = {tau} + 10*{n}", certificate.opt_cost),
    );

    report.push(
        "edge-count",
        2 * edge_count == 3 * n,
        format!("|E| = {edge_count} = 3/2 * {n}"),
    );
    report.push(
        "cover-lower-bound",
        4 * tau >= n,
        format!("tau = {tau} >= {n}/4"),
    );

    let lred = lreduction_report(graph)?;
    report.push(
        "apx-bound",
        lred.apx_bound_ok && lred.identity_ok,
        format!("opt {} <= 41 * tau = {}", lred.opt_cost, 41 * lred.tau),
    );

    Ok(report)
}
