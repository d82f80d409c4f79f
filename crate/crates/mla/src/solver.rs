//! Exact MLA solving at desk scale.
//!
//! Three engines with deliberately different structure:
//!
//! - [`solve_exact`]: branch and bound over left-to-right partitions of
//!   each unmatched run into candidate events, feasibility enforced by a
//!   cycle check at every duplication added, bound `partial cost +
//!   ceil(remaining / max candidate length)`.
//! - [`brute_force_oracle`]: plain exhaustive enumeration of all interval
//!   partitions and source assignments with a feasibility filter at the
//!   leaves. No pruning and no code shared with the search loop; this is
//!   the reference the search is tested against.
//! - [`solve_block_relaxed`]: per-block minimum over all coverings with
//!   the acyclicity constraint dropped. Dropping a constraint can only
//!   lower the minimum, so the value is a sound per-block lower bound for
//!   any feasible labeling, and the enumerator returns every covering
//!   that attains it.

use crate::labeling::{is_feasible, DupEvent, Event, Labeling, LossEvent};
use crate::model::{AlignedPair, Genome, Interval};
use thiserror::Error;

/// Cap on total unmatched columns accepted by [`solve_exact`].
pub const DESK_SCALE_UNMATCHED_MAX: usize = 48;

/// Per-genome cap on unmatched columns accepted by [`brute_force_oracle`].
pub const ORACLE_UNMATCHED_MAX: usize = 20;

/// Cap on unmatched columns inside a block for [`solve_block_relaxed`].
pub const BLOCK_UNMATCHED_MAX: usize = 20;

/// Cap on the number of minimum-cost labelings the relaxed block solver
/// will enumerate before giving up.
pub const ARGMIN_ENUMERATION_CAP: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("instance has {unmatched} unmatched columns, above the desk-scale cap {max}")]
    TooLarge { unmatched: usize, max: usize },
    #[error("genome {genome} has {unmatched} unmatched columns, above the oracle cap {max}")]
    OracleCapExceeded {
        genome: Genome,
        unmatched: usize,
        max: usize,
    },
    #[error("block has {unmatched} unmatched columns, above the cap {max}")]
    BlockTooLarge { unmatched: usize, max: usize },
    #[error("unmatched run {run} straddles the block boundary {block}")]
    RunStraddlesBlock { run: Interval, block: Interval },
    #[error("more than {cap} minimum-cost labelings")]
    ArgminOverflow { cap: usize },
}

/// All candidate events for one unmatched run: every subinterval of the
/// run paired with every identical source occurrence, plus the unit loss
/// of each column.
#[derive(Debug, Clone)]
pub struct RunCandidates {
    pub run: Interval,
    pub events: Vec<Event>,
}

/// Candidate events for every unmatched run of one genome, in
/// deterministic order (target start, target length, then source start;
/// the unit loss of a column follows its single-column duplications).
#[derive(Debug, Clone)]
pub struct CandidateSet {
    pub genome: Genome,
    pub runs: Vec<RunCandidates>,
}

impl CandidateSet {
    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Longest duplication target length in the set, if any.
    pub fn max_dup_len(&self) -> Option<usize> {
        self.runs
            .iter()
            .flat_map(|r| r.events.iter())
            .filter_map(|e| e.as_dup().map(|d| d.target.len()))
            .max()
    }
}

/// Enumerates the complete candidate set for `genome`.
pub fn enumerate_candidates(pair: &AlignedPair, genome: Genome) -> CandidateSet {
    let mut runs = Vec::new();
    for run in pair.unmatched_runs(genome) {
        let mut events = Vec::new();
        for start in run.iter() {
            for end in start + 1..=run.end {
                let target = Interval::new(start, end);
                let sources = pair
                    .substring_occurrences(genome, target)
                    .expect("run columns are gap-free for their genome");
                for source in sources {
                    events.push(Event::Dup(DupEvent {
                        genome,
                        target,
                        source,
                    }));
                }
                if target.len() == 1 {
                    events.push(Event::Loss(LossEvent { genome, target }));
                }
            }
        }
        events.sort();
        runs.push(RunCandidates { run, events });
    }
    CandidateSet { genome, runs }
}

/// Outcome of an exact or oracle solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub best: Labeling,
    pub cost: usize,
    pub nodes_explored: u64,
    pub proven_optimal: bool,
}

/// All-losses labeling: always feasible, cost = unmatched column count.
fn all_losses(pair: &AlignedPair) -> Labeling {
    let mut events = Vec::new();
    for genome in [Genome::X, Genome::Y] {
        for run in pair.unmatched_runs(genome) {
            events.push(Event::Loss(LossEvent {
                genome,
                target: run,
            }));
        }
    }
    Labeling::new(events).canonicalize()
}

fn dups_acyclic(dups: &[DupEvent]) -> bool {
    let n = dups.len();
    let mut indegree = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, da) in dups.iter().enumerate() {
        for (b, db) in dups.iter().enumerate() {
            if da.genome == db.genome && db.source.overlaps(&da.target) {
                out[a].push(b);
                indegree[b] += 1;
            }
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = queue.pop() {
        removed += 1;
        for &w in &out[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                queue.push(w);
            }
        }
    }
    removed == n
}

/// One run prepared for the search: per offset, the duplication
/// candidates whose target starts there, longest first.
struct SearchRun {
    genome: Genome,
    run: Interval,
    dups_by_offset: Vec<Vec<DupEvent>>,
}

struct ExactSearch {
    runs: Vec<SearchRun>,
    max_dup_len: usize,
    node_budget: u64,
    nodes: u64,
    exhausted: bool,
    best_cost: usize,
    best_key: String,
    best: Labeling,
    chosen: Vec<Event>,
    chosen_dups: Vec<DupEvent>,
}

impl ExactSearch {
    fn remaining(&self, run_idx: usize, offset: usize) -> usize {
        let mut remaining = self.runs[run_idx].run.len() - offset;
        for run in &self.runs[run_idx + 1..] {
            remaining += run.run.len();
        }
        remaining
    }

    fn complete(&mut self) {
        let candidate = Labeling::new(self.chosen.clone()).canonicalize();
        let cost: usize = candidate.events.iter().map(Event::cost).sum();
        if cost > self.best_cost {
            return;
        }
        let key = candidate.canonical_serialization();
        if cost < self.best_cost || key < self.best_key {
            self.best_cost = cost;
            self.best_key = key;
            self.best = candidate;
        }
    }

    fn cost_so_far(&self) -> usize {
        self.chosen.iter().map(Event::cost).sum()
    }

    fn branch(&mut self, run_idx: usize, offset: usize) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.node_budget {
            self.exhausted = true;
            return;
        }
        if run_idx == self.runs.len() {
            self.complete();
            return;
        }
        if offset == self.runs[run_idx].run.len() {
            self.branch(run_idx + 1, 0);
            return;
        }
        // Lower bound: every event explains at most max_dup_len columns
        // per unit of cost.
        let bound = self.cost_so_far() + self.remaining(run_idx, offset).div_ceil(self.max_dup_len);
        if bound > self.best_cost {
            return;
        }
        let column = self.runs[run_idx].run.start + offset;
        let dups = self.runs[run_idx].dups_by_offset[offset].clone();
        for dup in dups {
            let len = dup.target.len();
            self.chosen_dups.push(dup.clone());
            if dups_acyclic(&self.chosen_dups) {
                self.chosen.push(Event::Dup(dup));
                self.branch(run_idx, offset + len);
                self.chosen.pop();
            }
            self.chosen_dups.pop();
        }
        // Unit loss; longer losses are equivalent chains of unit losses
        // and re-merge during canonicalization.
        self.chosen.push(Event::Loss(LossEvent {
            genome: self.runs[run_idx].genome,
            target: Interval::new(column, column + 1),
        }));
        self.branch(run_idx, offset + 1);
        self.chosen.pop();
    }
}

/// Minimum-cost feasible labeling by branch and bound.
///
/// Requires at most [`DESK_SCALE_UNMATCHED_MAX`] unmatched columns in
/// total. If `node_budget` search nodes are exhausted the best labeling
/// found so far is returned with `proven_optimal = false`; the search is
/// seeded with the all-losses labeling, so a result always exists. Among
/// equal-cost optima the one with the smallest canonical serialization is
/// returned.
pub fn solve_exact(pair: &AlignedPair, node_budget: u64) -> Result<SolveResult, SolveError> {
    let unmatched = pair.unmatched_count(Genome::X) + pair.unmatched_count(Genome::Y);
    if unmatched > DESK_SCALE_UNMATCHED_MAX {
        return Err(SolveError::TooLarge {
            unmatched,
            max: DESK_SCALE_UNMATCHED_MAX,
        });
    }

    let mut runs = Vec::new();
    let mut max_dup_len = 1;
    for genome in [Genome::X, Genome::Y] {
        let candidates = enumerate_candidates(pair, genome);
        if let Some(len) = candidates.max_dup_len() {
            max_dup_len = max_dup_len.max(len);
        }
        for run_candidates in candidates.runs {
            let run = run_candidates.run;
            let mut dups_by_offset: Vec<Vec<DupEvent>> = vec![Vec::new(); run.len()];
            for event in run_candidates.events {
                if let Event::Dup(dup) = event {
                    dups_by_offset[dup.target.start - run.start].push(dup);
                }
            }
            for dups in &mut dups_by_offset {
                // Longest candidate first to tighten the bound early.
                dups.sort_by_key(|d| (std::cmp::Reverse(d.target.len()), d.source.start));
            }
            runs.push(SearchRun {
                genome,
                run,
                dups_by_offset,
            });
        }
    }

    let seed = all_losses(pair);
    let mut search = ExactSearch {
        runs,
        max_dup_len,
        node_budget,
        nodes: 0,
        exhausted: false,
        best_cost: unmatched,
        best_key: seed.canonical_serialization(),
        best: seed,
        chosen: Vec::new(),
        chosen_dups: Vec::new(),
    };
    search.branch(0, 0);
    Ok(SolveResult {
        cost: search.best_cost,
        best: search.best,
        nodes_explored: search.nodes,
        proven_optimal: !search.exhausted,
    })
}

struct OracleState<'a> {
    pair: &'a AlignedPair,
    runs: Vec<(Genome, Interval)>,
    leaves: u64,
    best: Option<(usize, String, Labeling)>,
}

impl OracleState<'_> {
    fn evaluate(&mut self, events: &[Event]) {
        self.leaves += 1;
        let labeling = Labeling::new(events.to_vec());
        if !is_feasible(&labeling) {
            return;
        }
        let cost: usize = events.iter().map(Event::cost).sum();
        match &self.best {
            Some((best_cost, _, _)) if cost > *best_cost => {}
            _ => {
                let canonical = labeling.canonicalize();
                let key = canonical.canonical_serialization();
                let better = match &self.best {
                    None => true,
                    Some((best_cost, best_key, _)) => {
                        cost < *best_cost || (cost == *best_cost && key < *best_key)
                    }
                };
                if better {
                    self.best = Some((cost, key, canonical));
                }
            }
        }
    }

    fn enumerate(&mut self, run_idx: usize, position: usize, events: &mut Vec<Event>) {
        if run_idx == self.runs.len() {
            self.evaluate(events);
            return;
        }
        let (genome, run) = self.runs[run_idx];
        if position == run.end {
            self.enumerate(
                run_idx + 1,
                self.runs.get(run_idx + 1).map_or(0, |r| r.1.start),
                events,
            );
            return;
        }
        for end in position + 1..=run.end {
            let target = Interval::new(position, end);
            events.push(Event::Loss(LossEvent { genome, target }));
            self.enumerate(run_idx, end, events);
            events.pop();
            let sources = self
                .pair
                .substring_occurrences(genome, target)
                .expect("run columns are gap-free for their genome");
            for source in sources {
                events.push(Event::Dup(DupEvent {
                    genome,
                    target,
                    source,
                }));
                self.enumerate(run_idx, end, events);
                events.pop();
            }
        }
    }
}

/// Exhaustive reference solver: every partition of every run, every
/// source assignment, feasibility filtered at the leaves.
pub fn brute_force_oracle(pair: &AlignedPair) -> Result<SolveResult, SolveError> {
    for genome in [Genome::X, Genome::Y] {
        let unmatched = pair.unmatched_count(genome);
        if unmatched > ORACLE_UNMATCHED_MAX {
            return Err(SolveError::OracleCapExceeded {
                genome,
                unmatched,
                max: ORACLE_UNMATCHED_MAX,
            });
        }
    }
    let mut runs = Vec::new();
    for genome in [Genome::X, Genome::Y] {
        for run in pair.unmatched_runs(genome) {
            runs.push((genome, run));
        }
    }
    let start = runs.first().map_or(0, |r| r.1.start);
    let mut state = OracleState {
        pair,
        runs,
        leaves: 0,
        best: None,
    };
    let mut events = Vec::new();
    state.enumerate(0, start, &mut events);
    let (cost, _, best) = state
        .best
        .unwrap_or_else(|| (0, String::new(), Labeling::empty()));
    Ok(SolveResult {
        best,
        cost,
        nodes_explored: state.leaves,
        proven_optimal: true,
    })
}

/// Per-run dynamic program used by the relaxed block solver.
struct RunDp {
    /// `choices[i]`: events starting at offset `i` that lie on some
    /// minimum-cost covering of the suffix, with the offset they jump to.
    choices: Vec<Vec<(Event, usize)>>,
    min_cost: usize,
}

fn run_dp(pair: &AlignedPair, genome: Genome, run: Interval) -> RunDp {
    let len = run.len();
    let mut cost = vec![usize::MAX; len + 1];
    cost[len] = 0;
    let mut options: Vec<Vec<(Event, usize, usize)>> = vec![Vec::new(); len];
    for offset in (0..len).rev() {
        let start = run.start + offset;
        // Unit loss.
        let loss = Event::Loss(LossEvent {
            genome,
            target: Interval::new(start, start + 1),
        });
        options[offset].push((loss, offset + 1, 1));
        // Duplications of every length from here.
        for end in start + 1..=run.end {
            let target = Interval::new(start, end);
            let sources = pair
                .substring_occurrences(genome, target)
                .expect("run columns are gap-free for their genome");
            let next = offset + target.len();
            for source in sources {
                let dup = Event::Dup(DupEvent {
                    genome,
                    target,
                    source,
                });
                options[offset].push((dup, next, 1));
            }
        }
        cost[offset] = options[offset]
            .iter()
            .map(|(_, next, c)| c.saturating_add(cost[*next]))
            .min()
            .expect("unit loss always applies");
    }
    let choices = options
        .into_iter()
        .enumerate()
        .map(|(offset, opts)| {
            opts.into_iter()
                .filter(|(_, next, c)| c + cost[*next] == cost[offset])
                .map(|(event, next, _)| (event, next))
                .collect()
        })
        .collect();
    RunDp {
        choices,
        min_cost: cost[0],
    }
}

fn backtrack_run(
    dp: &RunDp,
    offset: usize,
    current: &mut Vec<Event>,
    out: &mut Vec<Vec<Event>>,
) -> Result<(), SolveError> {
    if offset == dp.choices.len() {
        if out.len() >= ARGMIN_ENUMERATION_CAP {
            return Err(SolveError::ArgminOverflow {
                cap: ARGMIN_ENUMERATION_CAP,
            });
        }
        out.push(current.clone());
        return Ok(());
    }
    for (event, next) in &dp.choices[offset] {
        current.push(event.clone());
        backtrack_run(dp, *next, current, out)?;
        current.pop();
    }
    Ok(())
}

/// Minimum cost over all coverings of the block's unmatched columns, with
/// feasibility deliberately ignored, plus every covering attaining it.
///
/// Sources may lie anywhere in the genome. Runs must not straddle the
/// block boundary; at most [`BLOCK_UNMATCHED_MAX`] unmatched columns are
/// accepted. Returned labelings are canonical and sorted.
pub fn solve_block_relaxed(
    pair: &AlignedPair,
    block: Interval,
) -> Result<(usize, Vec<Labeling>), SolveError> {
    let mut inside: Vec<(Genome, Interval)> = Vec::new();
    let mut unmatched = 0;
    for genome in [Genome::X, Genome::Y] {
        for run in pair.unmatched_runs(genome) {
            if block.contains_interval(&run) {
                inside.push((genome, run));
                unmatched += run.len();
            } else if run.overlaps(&block) {
                return Err(SolveError::RunStraddlesBlock { run, block });
            }
        }
    }
    if unmatched > BLOCK_UNMATCHED_MAX {
        return Err(SolveError::BlockTooLarge {
            unmatched,
            max: BLOCK_UNMATCHED_MAX,
        });
    }

    let mut min_cost = 0;
    let mut per_run: Vec<Vec<Vec<Event>>> = Vec::new();
    for &(genome, run) in &inside {
        let dp = run_dp(pair, genome, run);
        min_cost += dp.min_cost;
        let mut out = Vec::new();
        backtrack_run(&dp, 0, &mut Vec::new(), &mut out)?;
        per_run.push(out);
    }

    // Cartesian product of the per-run minimum coverings.
    let mut labelings: Vec<Vec<Event>> = vec![Vec::new()];
    for run_labelings in per_run {
        let mut next = Vec::new();
        for prefix in &labelings {
            for suffix in &run_labelings {
                if next.len() >= ARGMIN_ENUMERATION_CAP {
                    return Err(SolveError::ArgminOverflow {
                        cap: ARGMIN_ENUMERATION_CAP,
                    });
                }
                let mut events = prefix.clone();
                events.extend(suffix.iter().cloned());
                next.push(events);
            }
        }
        labelings = next;
    }
    let mut canonical: Vec<Labeling> = labelings
        .into_iter()
        .map(|events| Labeling::new(events).canonicalize())
        .collect();
    canonical.sort_by_key(|l| l.canonical_serialization());
    canonical.dedup();
    Ok((min_cost, canonical))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_k4;
    use crate::labeling::{labeling_cost, validate_cover};
    use crate::model::{plain_pair, Cell};
    use crate::reduction::{
        build_aux_blocks, build_edge_block, build_vertex_block, reduce_graph, BlockName,
    };

    /// Vertex gadget of K4's vertex 1 with everything except the vertex
    /// block fully matched: the one toy where the block's labeling is the
    /// whole problem.
    fn vertex_gadget_toy() -> (AlignedPair, Interval, Interval, Interval) {
        let incident = [(1, 2), (1, 3), (1, 4)];
        let (vx, vy) = build_vertex_block(1, &incident);
        let mut row_x: Vec<Cell> = vx.into_iter().map(Some).collect();
        let mut row_y: Vec<Cell> = vy;
        for (t, &edge) in incident.iter().enumerate() {
            let (ex, _) = build_edge_block(edge, t as u32 + 1, 1);
            let cells: Vec<Cell> = ex.into_iter().map(Some).collect();
            row_x.extend(cells.clone());
            row_y.extend(cells);
        }
        let (aux1, aux2) = build_aux_blocks(1, &incident);
        for token in aux1.into_iter().chain(aux2) {
            row_x.push(Some(token.clone()));
            row_y.push(Some(token));
        }
        let pair = AlignedPair::new(row_x, row_y).unwrap();
        let vertex_block = Interval::new(0, 18);
        let edge_part = Interval::new(18, 33);
        let aux1_part = Interval::new(33, 45);
        (pair, vertex_block, edge_part, aux1_part)
    }

    #[test]
    fn candidates_empty_on_fully_matched_pair() {
        let pair = plain_pair(&["a", "b"], &["a", "b"]).unwrap();
        assert!(enumerate_candidates(&pair, Genome::X).is_empty());
        assert!(enumerate_candidates(&pair, Genome::Y).is_empty());
    }

    #[test]
    fn lone_symbol_without_sources_gets_only_a_loss() {
        let pair = plain_pair(&["a", "b", "a"], &["a", "-", "a"]).unwrap();
        let candidates = enumerate_candidates(&pair, Genome::X);
        assert_eq!(candidates.runs.len(), 1);
        assert_eq!(
            candidates.runs[0].events,
            vec![Event::Loss(LossEvent {
                genome: Genome::X,
                target: Interval::new(1, 2),
            })]
        );
    }

    #[test]
    fn edge_block_run_offers_both_vertex_sourced_triples() {
        let (pair, blockmap) = reduce_graph(&gen_k4()).unwrap();
        let e12 = blockmap.get(BlockName::EdgeVe(1, 2)).unwrap();
        let candidates = enumerate_candidates(&pair, Genome::X);
        let run = Interval::new(e12.interval.start + 1, e12.interval.end);
        let run_candidates = candidates
            .runs
            .iter()
            .find(|r| r.run == run)
            .expect("edge block run present");
        let v1_enc = blockmap
            .anchor(BlockName::VertexVe(1), "enc:e:1:2")
            .unwrap();
        let v2_enc = blockmap
            .anchor(BlockName::VertexVe(2), "enc:e:1:2")
            .unwrap();
        let triple_sources: Vec<Interval> = run_candidates
            .events
            .iter()
            .filter_map(|e| e.as_dup())
            .filter(|d| d.target.len() == 3)
            .map(|d| d.source)
            .collect();
        assert!(triple_sources.contains(&v1_enc));
        assert!(triple_sources.contains(&v2_enc));
    }

    #[test]
    fn exact_solver_handles_trivial_pairs() {
        let pair = plain_pair(&["a", "b"], &["a", "b"]).unwrap();
        let result = solve_exact(&pair, 1_000).unwrap();
        assert_eq!(result.cost, 0);
        assert!(result.proven_optimal);
        assert!(result.best.events.is_empty());
    }

    #[test]
    fn exact_solver_agrees_with_oracle_on_mutual_runs() {
        // Two identical runs can each copy the other, but not both.
        let pair = plain_pair(
            &["a", "b", "m", "m", "m", "a", "b"],
            &["-", "-", "m", "m", "m", "-", "-"],
        )
        .unwrap();
        let exact = solve_exact(&pair, 100_000).unwrap();
        let oracle = brute_force_oracle(&pair).unwrap();
        assert!(exact.proven_optimal);
        assert_eq!(exact.cost, oracle.cost);
        assert_eq!(exact.cost, 3);
        assert!(validate_cover(&pair, &exact.best).is_ok());
        assert!(is_feasible(&exact.best));
    }

    #[test]
    fn oracle_prices_sourceless_run_as_all_losses() {
        let pair = plain_pair(&["m", "a", "b", "c", "m"], &["m", "-", "-", "-", "m"]).unwrap();
        let oracle = brute_force_oracle(&pair).unwrap();
        assert_eq!(oracle.cost, 3);
        assert_eq!(oracle.best.events.len(), 1);
    }

    #[test]
    fn oracle_rejects_oversized_instances() {
        let tokens: Vec<String> = (0..21).map(|i| format!("t{i}")).collect();
        let row_x: Vec<&str> = tokens.iter().map(String::as_str).collect();
        let row_y: Vec<&str> = vec!["-"; 21];
        let pair = plain_pair(&row_x, &row_y).unwrap();
        assert!(matches!(
            brute_force_oracle(&pair),
            Err(SolveError::OracleCapExceeded { .. })
        ));
    }

    #[test]
    fn vertex_gadget_optimum_is_seven_dups() {
        let (pair, vertex_block, edge_part, aux1_part) = vertex_gadget_toy();
        assert_eq!(pair.columns(), 66);
        assert_eq!(pair.unmatched_count(Genome::X), 17);

        let result = solve_exact(&pair, 10_000_000).unwrap();
        assert!(result.proven_optimal);
        assert_eq!(result.cost, 7);
        assert!(validate_cover(&pair, &result.best).is_ok());
        assert!(is_feasible(&result.best));
        let dups: Vec<&DupEvent> = result
            .best
            .events
            .iter()
            .filter_map(Event::as_dup)
            .collect();
        assert_eq!(dups.len(), 7);
        let pad_dups = dups
            .iter()
            .filter(|d| aux1_part.contains_interval(&d.source))
            .count();
        let enc_dups = dups
            .iter()
            .filter(|d| edge_part.contains_interval(&d.source))
            .count();
        assert_eq!((pad_dups, enc_dups), (4, 3));
        for dup in &dups {
            assert!(vertex_block.contains_interval(&dup.target));
            assert!(crate::labeling::is_maximal_dup(&pair, dup));
        }

        // The relaxed block minimum is attained by the same labeling, and
        // summed block minima lower-bound the exact cost.
        let (min_cost, argmins) = solve_block_relaxed(&pair, vertex_block).unwrap();
        assert_eq!(min_cost, 7);
        assert_eq!(argmins, vec![result.best.clone()]);
    }

    #[test]
    fn restricted_edge_block_instance_costs_two() {
        // Full K4 rows with every column outside the (1,2) edge block
        // forced to match: only that block's four columns need labeling.
        let (full, blockmap) = reduce_graph(&gen_k4()).unwrap();
        let e12 = blockmap.get(BlockName::EdgeVe(1, 2)).unwrap().interval;
        let mut row_x: Vec<Cell> = Vec::new();
        let mut row_y: Vec<Cell> = Vec::new();
        for column in 0..full.columns() {
            let x = full.token(Genome::X, column).cloned();
            row_x.push(x.clone());
            if e12.contains(column) {
                row_y.push(full.token(Genome::Y, column).cloned());
            } else {
                row_y.push(x);
            }
        }
        let pair = AlignedPair::new(row_x, row_y).unwrap();
        assert_eq!(pair.unmatched_count(Genome::X), 4);

        let oracle = brute_force_oracle(&pair).unwrap();
        assert_eq!(oracle.cost, 2);
        let exact = solve_exact(&pair, 1_000_000).unwrap();
        assert_eq!(exact.cost, 2);
        assert_eq!(exact.best, oracle.best);
    }

    #[test]
    fn budget_exhaustion_returns_best_so_far() {
        let (pair, _, _, _) = vertex_gadget_toy();
        let result = solve_exact(&pair, 3).unwrap();
        assert!(!result.proven_optimal);
        assert!(result.cost <= 17);
        assert!(validate_cover(&pair, &result.best).is_ok());
    }

    #[test]
    fn exact_solver_rejects_oversized_instances() {
        let tokens: Vec<String> = (0..49).map(|i| format!("t{i}")).collect();
        let row_x: Vec<&str> = tokens.iter().map(String::as_str).collect();
        let row_y: Vec<&str> = vec!["-"; 49];
        let pair = plain_pair(&row_x, &row_y).unwrap();
        assert!(matches!(
            solve_exact(&pair, 1_000),
            Err(SolveError::TooLarge { .. })
        ));
    }

    #[test]
    fn relaxed_block_solver_validates_inputs() {
        let (pair, blockmap) = reduce_graph(&gen_k4()).unwrap();
        let vertex = blockmap.get(BlockName::VertexVe(1)).unwrap().interval;
        // A window cutting through the vertex block splits its run.
        let straddling = Interval::new(vertex.start, vertex.start + 5);
        assert!(matches!(
            solve_block_relaxed(&pair, straddling),
            Err(SolveError::RunStraddlesBlock { .. })
        ));
        // Two whole vertex blocks exceed the cap.
        let too_big = Interval::new(0, 36);
        assert!(matches!(
            solve_block_relaxed(&pair, too_big),
            Err(SolveError::BlockTooLarge { .. })
        ));
        // A fully matched block solves to zero with one empty labeling.
        let aux = blockmap.get(BlockName::Aux1(1)).unwrap().interval;
        let (cost, argmins) = solve_block_relaxed(&pair, aux).unwrap();
        assert_eq!(cost, 0);
        assert_eq!(argmins, vec![Labeling::empty()]);
    }

    #[test]
    fn relaxed_minimum_for_sourceless_block_is_its_length() {
        let pair = plain_pair(&["m", "a", "b", "c", "m"], &["m", "-", "-", "-", "m"]).unwrap();
        let (cost, argmins) = solve_block_relaxed(&pair, Interval::new(0, 5)).unwrap();
        assert_eq!(cost, 3);
        // All loss slicings canonicalize to the single maximal loss.
        assert_eq!(argmins.len(), 1);
        assert_eq!(labeling_cost(&argmins[0]), 3);
    }

    #[test]
    fn determinism_of_solvers() {
        let pair = plain_pair(
            &["a", "b", "m", "a", "b", "m", "a"],
            &["-", "-", "m", "a", "b", "m", "-"],
        )
        .unwrap();
        let first = solve_exact(&pair, 100_000).unwrap();
        let second = solve_exact(&pair, 100_000).unwrap();
        assert_eq!(first, second);
        let oracle_first = brute_force_oracle(&pair).unwrap();
        let oracle_second = brute_force_oracle(&pair).unwrap();
        assert_eq!(oracle_first, oracle_second);
        assert_eq!(first.cost, oracle_first.cost);
    }
}
