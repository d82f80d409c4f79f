//! Property-based invariants over random tokens, pairs and labelings.

mod common;

use mla::labeling::{
    is_feasible, labeling_cost, validate_cover, DupEvent, Event, Labeling, LossEvent,
};
use mla::model::{AlignedPair, Genome, Interval, SymbolToken};
use mla::solver::{brute_force_oracle, solve_exact};
use proptest::prelude::*;

fn token_strategy() -> impl Strategy<Value = SymbolToken> {
    prop_oneof![
        (1u32..40).prop_map(|vertex| SymbolToken::VertexSep { vertex }),
        (1u32..40, 1u32..40).prop_map(|(lo, hi)| SymbolToken::EdgeSep { lo, hi }),
        (1u32..40, 1u32..=3).prop_map(|(vertex, rank)| SymbolToken::Port { vertex, rank }),
        (1u32..40, 1u32..40, 1u32..=2).prop_map(|(lo, hi, half)| SymbolToken::EdgeCode {
            lo,
            hi,
            half
        }),
        (1u32..40, 1u32..=8).prop_map(|(vertex, k)| SymbolToken::ZPad { vertex, k }),
        (1u32..40, 1u32..=4).prop_map(|(vertex, k)| SymbolToken::WPad { vertex, k }),
        (1u32..40, 1u32..=6).prop_map(|(vertex, k)| SymbolToken::UPad { vertex, k }),
        "[a-z0-9:.]{0,8}".prop_map(SymbolToken::Plain),
    ]
}

#[derive(Clone, Debug)]
enum Column {
    Match(u8),
    UnmatchedX(u8),
    UnmatchedY(u8),
}

fn column_strategy() -> impl Strategy<Value = Column> {
    prop_oneof![
        (0u8..3).prop_map(Column::Match),
        (0u8..3).prop_map(Column::UnmatchedX),
        (0u8..3).prop_map(Column::UnmatchedY),
    ]
}

fn build_pair(columns: &[Column], max_unmatched: usize) -> AlignedPair {
    let symbol = |id: u8| Some(SymbolToken::Plain(format!("{}", (b'a' + id) as char)));
    let mut unmatched = 0;
    let mut row_x = Vec::new();
    let mut row_y = Vec::new();
    for column in columns {
        match column {
            Column::Match(id) => {
                row_x.push(symbol(*id));
                row_y.push(symbol(*id));
            }
            Column::UnmatchedX(id) if unmatched < max_unmatched => {
                row_x.push(symbol(*id));
                row_y.push(None);
                unmatched += 1;
            }
            Column::UnmatchedY(id) if unmatched < max_unmatched => {
                row_x.push(None);
                row_y.push(symbol(*id));
                unmatched += 1;
            }
            Column::UnmatchedX(id) | Column::UnmatchedY(id) => {
                row_x.push(symbol(*id));
                row_y.push(symbol(*id));
            }
        }
    }
    AlignedPair::new(row_x, row_y).expect("builder respects alignment invariants")
}

fn dup_set_strategy() -> impl Strategy<Value = Vec<DupEvent>> {
    prop::collection::vec(
        (0usize..30, 1usize..4, 0usize..30).prop_map(|(target, len, source)| DupEvent {
            genome: Genome::X,
            target: Interval::new(target, target + len),
            source: Interval::new(source, source + len),
        }),
        0..6,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn token_parse_inverts_rendering(token in token_strategy()) {
        let rendered = token.to_string();
        prop_assert_eq!(rendered.parse::<SymbolToken>().unwrap(), token);
    }

    #[test]
    fn instance_json_round_trips(columns in prop::collection::vec(column_strategy(), 0..24)) {
        let pair = build_pair(&columns, usize::MAX);
        let reparsed = AlignedPair::parse_alignment(pair.to_json().as_bytes()).unwrap();
        prop_assert_eq!(reparsed, pair);
    }

    #[test]
    fn unmatched_runs_partition_the_unmatched_columns(
        columns in prop::collection::vec(column_strategy(), 0..24),
    ) {
        let pair = build_pair(&columns, usize::MAX);
        for genome in [Genome::X, Genome::Y] {
            let runs = pair.unmatched_runs(genome);
            let mut covered = vec![false; pair.columns()];
            let mut previous_end = 0;
            for run in &runs {
                prop_assert!(run.start >= previous_end, "runs unsorted or overlapping");
                // Maximality: neighbors of the run are not unmatched.
                if run.start > 0 {
                    prop_assert!(!pair.is_unmatched(genome, run.start - 1));
                }
                if run.end < pair.columns() {
                    prop_assert!(!pair.is_unmatched(genome, run.end));
                }
                for c in run.iter() {
                    covered[c] = true;
                }
                previous_end = run.end;
            }
            for (c, &flag) in covered.iter().enumerate() {
                prop_assert_eq!(flag, pair.is_unmatched(genome, c));
            }
        }
    }

    #[test]
    fn feasibility_is_monotone_under_event_removal(
        dups in dup_set_strategy(),
        mask in prop::collection::vec(any::<bool>(), 6),
    ) {
        let full = Labeling::new(dups.iter().cloned().map(Event::Dup).collect());
        if is_feasible(&full) {
            let subset: Vec<Event> = dups
                .iter()
                .enumerate()
                .filter(|(i, _)| mask.get(*i).copied().unwrap_or(false))
                .map(|(_, d)| Event::Dup(d.clone()))
                .collect();
            prop_assert!(is_feasible(&Labeling::new(subset)));
        }
    }

    #[test]
    fn canonicalization_preserves_cost(
        dups in dup_set_strategy(),
        losses in prop::collection::vec((0usize..30, 1usize..4), 0..4),
    ) {
        let mut events: Vec<Event> = dups.into_iter().map(Event::Dup).collect();
        for (start, len) in losses {
            events.push(Event::Loss(LossEvent {
                genome: Genome::X,
                target: Interval::new(start, start + len),
            }));
        }
        let labeling = Labeling::new(events);
        let canonical = labeling.canonicalize();
        prop_assert_eq!(labeling_cost(&canonical), labeling_cost(&labeling));
        prop_assert_eq!(canonical.canonicalize(), canonical.clone());
        prop_assert_eq!(is_feasible(&canonical), is_feasible(&labeling));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_solver_agrees_with_oracle(
        columns in prop::collection::vec(column_strategy(), 0..10),
    ) {
        let pair = build_pair(&columns, 5);
        let oracle = brute_force_oracle(&pair).unwrap();
        let exact = solve_exact(&pair, 1_000_000).unwrap();
        prop_assert!(exact.proven_optimal);
        prop_assert_eq!(exact.cost, oracle.cost);
        prop_assert!(validate_cover(&pair, &exact.best).is_ok());
        prop_assert!(is_feasible(&exact.best));
        // Determinism of both engines.
        prop_assert_eq!(solve_exact(&pair, 1_000_000).unwrap(), exact);
        prop_assert_eq!(brute_force_oracle(&pair).unwrap(), oracle);
    }
}

#[test]
fn seeded_tiny_pairs_respect_their_caps() {
    for seed in 0..50 {
        let pair = common::random_tiny_pair(seed);
        assert!(pair.columns() <= 12);
        let unmatched = pair.unmatched_count(Genome::X) + pair.unmatched_count(Genome::Y);
        assert!(unmatched <= 6);
    }
}
