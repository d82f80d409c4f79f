#![allow(dead_code)] // each test binary uses a different subset of these helpers

//! Shared helpers for the integration suites.

use mla::model::{AlignedPair, SymbolToken};
use mla::CubicGraph;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Small random aligned pair over a plain alphabet: at most 12 columns,
/// at most 6 unmatched, 2..=4 distinct symbols. Deterministic per seed.
pub fn random_tiny_pair(seed: u64) -> AlignedPair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let columns = rng.random_range(1..=12);
    let alphabet = ["a", "b", "c", "d"];
    let alphabet_size = rng.random_range(2..=4);
    let mut unmatched_budget = 6usize;
    let mut row_x = Vec::with_capacity(columns);
    let mut row_y = Vec::with_capacity(columns);
    for _ in 0..columns {
        let symbol = SymbolToken::Plain(alphabet[rng.random_range(0..alphabet_size)].to_string());
        let roll: u8 = if unmatched_budget > 0 {
            rng.random_range(0..10)
        } else {
            0
        };
        if roll < 5 {
            row_x.push(Some(symbol.clone()));
            row_y.push(Some(symbol));
        } else if roll < 8 {
            row_x.push(Some(symbol));
            row_y.push(None);
            unmatched_budget -= 1;
        } else {
            row_x.push(None);
            row_y.push(Some(symbol));
            unmatched_budget -= 1;
        }
    }
    AlignedPair::new(row_x, row_y).expect("generator respects the alignment invariants")
}

/// The complete bipartite graph on 3 + 3 vertices.
pub fn k33() -> CubicGraph {
    CubicGraph::new(
        6,
        vec![
            (1, 4),
            (1, 5),
            (1, 6),
            (2, 4),
            (2, 5),
            (2, 6),
            (3, 4),
            (3, 5),
            (3, 6),
        ],
    )
    .expect("K33 is a valid cubic graph")
}
