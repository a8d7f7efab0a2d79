//! Enumerate the attainable score sequences per type and inspect their
//! arithmetic: standard scores, fiber sizes, and the parity pattern of
//! half-unit coordinates (odd in type B, even in types C and D).
//!
//! Run: `cargo run --release --example score_census`

use std::sync::Arc;

use coxeter_interchange::interchange::{enumerate_fiber, enumerate_score_set};
use coxeter_interchange::signed::{CompleteSignedGraph, RootType};

fn main() -> coxeter_interchange::Result<()> {
    for rt in [RootType::A, RootType::B, RootType::C, RootType::D] {
        let n = 3;
        let graph = Arc::new(CompleteSignedGraph::new(rt, n)?);
        let scores = enumerate_score_set(&graph, None)?;
        println!(
            "{rt}_{n}: {} games, standard score {} (half-units), {} attainable scores",
            graph.game_count(),
            graph.standard_score(),
            scores.len()
        );

        let parities: std::collections::BTreeSet<i32> = scores
            .iter()
            .flat_map(|s| s.halves().iter().map(|h| h.rem_euclid(2)))
            .collect();
        println!("  half-unit coordinate parities observed: {parities:?}");

        let mut biggest = (0usize, None);
        for s in &scores {
            let fiber = enumerate_fiber(&graph, s, None)?;
            if fiber.len() > biggest.0 {
                biggest = (fiber.len(), Some(s.clone()));
            }
        }
        if let (count, Some(s)) = biggest {
            println!("  largest fiber: {count} tournaments at score {s}");
        }
    }
    Ok(())
}
