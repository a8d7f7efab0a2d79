//! The reversing procedure step by step: pick two tournaments with the
//! same score, flip their difference through generator reversals, and
//! watch only the difference change.
//!
//! Run: `cargo run --release --example reversing_walkthrough`

use std::sync::Arc;

use coxeter_interchange::generators::{apply_generator_reversal, generator_catalog};
use coxeter_interchange::interchange::enumerate_fiber;
use coxeter_interchange::signed::{CompleteSignedGraph, RootType, SubTournament};
use coxeter_interchange::zframe::{decompose_into_irreducibles, reverse_neutral_subtournament};

fn main() -> coxeter_interchange::Result<()> {
    let graph = Arc::new(CompleteSignedGraph::new(RootType::C, 4)?);
    let m = graph.game_count();

    // two far-apart members of the center fiber
    let fiber = enumerate_fiber(&graph, &coxeter_interchange::ScoreVector::zero(4), None)?;
    let start = fiber.tournaments[0];
    let target = *fiber.tournaments.last().unwrap();
    let diff = start.bits ^ target.bits;
    println!("start : {}", start.bit_string(m));
    println!("target: {}", target.bit_string(m));

    let sub = SubTournament::restrict(start, diff);
    let comps = decompose_into_irreducibles(&graph, sub);
    println!(
        "difference has {} games in {} irreducible neutral component(s); step bound {}",
        sub.len(),
        comps.len(),
        comps.iter().map(|c| c.len() - 2).sum::<usize>()
    );

    let seq = reverse_neutral_subtournament(&graph, start, diff)?;
    let catalog = generator_catalog(RootType::C);
    let mut cur = start;
    for (i, copy) in seq.iter().enumerate() {
        cur = apply_generator_reversal(&graph, cur, copy)?;
        println!(
            "step {}: reverse {:?} on players {:?} -> {}",
            i + 1,
            catalog[copy.template].kind,
            copy.players,
            cur.bit_string(m)
        );
    }
    assert_eq!(cur, target);
    println!("reached the target in {} reversals", seq.len());
    Ok(())
}
