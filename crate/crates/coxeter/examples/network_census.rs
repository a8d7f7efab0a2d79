//! Classify every two-step network of a fiber into the five diamond
//! classes and report the crystal statistics that drive the reweighted
//! metric.
//!
//! Run: `cargo run --release --example network_census`

use std::sync::Arc;

use coxeter_interchange::interchange::interchange_graph_of;
use coxeter_interchange::networks::{
    classify_network, distance_two_pairs, extended_networks_and_crystals, interchange_network,
    NetworkCensus,
};
use coxeter_interchange::signed::{CompleteSignedGraph, RootType, ScoreVector};

fn main() -> coxeter_interchange::Result<()> {
    let graph = Arc::new(CompleteSignedGraph::new(RootType::C, 4)?);
    let score = ScoreVector::from_halves(vec![2, 0, 0, 2]);
    let ig = interchange_graph_of(&graph, &score, None)?;
    println!(
        "C_4 fiber {score}: {} vertices, degree {}",
        ig.vertex_count(),
        ig.degree
    );

    let mut census = NetworkCensus::default();
    for (a, b) in distance_two_pairs(&ig) {
        let net = interchange_network(&ig, a, b)?;
        let (class, _) = classify_network(&ig, &net)?;
        census.count(class);
    }
    println!(
        "networks: {} total — single {}, double {}, quadruple {}, split {}, heavy {}",
        census.total(),
        census.single,
        census.double,
        census.quadruple,
        census.split,
        census.heavy
    );

    let (extended, stats) = extended_networks_and_crystals(&ig)?;
    println!(
        "extended networks: {} distinct, {} crystals, maximal crystal degree gamma = {}",
        extended.len(),
        stats.crystals.len(),
        stats.gamma
    );
    print!("{}", stats.to_csv(&ig));
    Ok(())
}
