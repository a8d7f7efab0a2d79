//! The three highlighted C_3 interchange graphs and their product
//! structure:
//!
//! - score (0,0,0): 16 vertices, the product of a single edge with the
//!   3-cube of double edges;
//! - score (-1,0,1): the product of a double edge with the crystal;
//! - score (2,1,1): the 6-vertex crystal itself, 4-regular.
//!
//! Run: `cargo run --release --example golden_interchange`

use std::sync::Arc;

use coxeter_interchange::interchange::{graph_metrics, interchange_graph_of};
use coxeter_interchange::iso::{isomorphic, Multigraph};
use coxeter_interchange::networks::extended_networks_and_crystals;
use coxeter_interchange::signed::{CompleteSignedGraph, RootType, ScoreVector};

fn main() -> coxeter_interchange::Result<()> {
    let graph = Arc::new(CompleteSignedGraph::new(RootType::C, 3)?);

    let crystal = interchange_graph_of(&graph, &ScoreVector::from_halves(vec![4, 2, 2]), None)?;
    let m = graph_metrics(&crystal);
    let (_, stats) = extended_networks_and_crystals(&crystal)?;
    println!(
        "score (2,1,1): {} vertices, degree {}, diameter {}, crystals: {}",
        crystal.vertex_count(),
        crystal.degree,
        m.diameter,
        stats.crystals.len()
    );
    println!("{}", crystal.to_dot());

    let center = interchange_graph_of(&graph, &ScoreVector::zero(3), None)?;
    let reference = Multigraph::edge(1).cartesian_product(&Multigraph::cube(3, 2));
    println!(
        "score (0,0,0): {} vertices, degree {}, edge x doubled-cube product: {}",
        center.vertex_count(),
        center.degree,
        isomorphic(&Multigraph::from_interchange(&center), &reference)
    );

    let drum = interchange_graph_of(&graph, &ScoreVector::from_halves(vec![-2, 0, 2]), None)?;
    let drum_ref = Multigraph::edge(2).cartesian_product(&Multigraph::from_interchange(&crystal));
    println!(
        "score (-1,0,1): {} vertices, degree {}, double-edge x crystal product: {}",
        drum.vertex_count(),
        drum.degree,
        isomorphic(&Multigraph::from_interchange(&drum), &drum_ref)
    );
    Ok(())
}
