//! Z-frames and neutral trails: encode an oriented game set as a charged
//! bipartite graph, decompose it into neutral trails, and export DOT.
//!
//! Run: `cargo run --release --example zframe_trails`

use coxeter_interchange::signed::{CompleteSignedGraph, GameKind, RootType, SubTournament};
use coxeter_interchange::zframe::{
    build_zframe, decompose_into_irreducibles, decompose_neutral_trails, is_irreducible,
};

fn main() -> coxeter_interchange::Result<()> {
    let graph = CompleteSignedGraph::new(RootType::C, 4)?;
    let id = |kind| graph.game_id(kind).unwrap();

    // two game-disjoint neutral pieces: a clover on players {1,2} and a
    // cyclic triangle on players {2,3,4}
    let mut mask = 0u64;
    let mut wins = 0u64;
    for (kind, won) in [
        (GameKind::Loop { i: 2 }, true),
        (GameKind::Negative { i: 2, j: 1 }, false), // 1 beats 2
        (GameKind::Positive { i: 2, j: 1 }, false),
        (GameKind::Negative { i: 3, j: 2 }, true), // 3 beats 2
        (GameKind::Negative { i: 4, j: 3 }, true), // 4 beats 3
        (GameKind::Negative { i: 4, j: 2 }, false), // 2 beats 4
    ] {
        mask |= 1 << id(kind);
        if won {
            wins |= 1 << id(kind);
        }
    }
    let sub = SubTournament::new(mask, wins);
    println!(
        "game set: {} games, neutral: {}",
        sub.len(),
        graph.is_neutral(sub)
    );

    let z = build_zframe(&graph, sub);
    println!("player net charges: {:?}", &z.net_charges()[..4]);
    println!("irreducible: {}", is_irreducible(&graph, &z)?);

    let trails = decompose_neutral_trails(&z)?;
    for trail in &trails.trails {
        println!(
            "  trail: {} matches, closed: {}",
            trail.len_matches(&z),
            trail.closed
        );
    }
    let comps = decompose_into_irreducibles(&graph, sub);
    println!("irreducible components: {}", comps.len());
    for c in &comps {
        let zc = build_zframe(&graph, *c);
        println!(
            "  component of {} games, irreducible: {}",
            c.len(),
            is_irreducible(&graph, &zc)?
        );
    }
    println!("{}", z.to_dot(&graph));
    Ok(())
}
