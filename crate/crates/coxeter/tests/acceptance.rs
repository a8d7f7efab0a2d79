//! Acceptance suite: one test per headline guarantee, each printing a
//! single PASS line with its measurements (run with `--nocapture` to see
//! them). Every tolerance is pinned in code; the checks are exact except
//! where a float error bound is explicitly certified.

use std::sync::Arc;

use coxeter_interchange::dynamics::{
    mixing_time_exact, occupancy_check, WalkKernel, OCCUPANCY_DEMO_SEED,
};
use coxeter_interchange::interchange::{
    build_interchange_graph, enumerate_fiber, graph_metrics, interchange_graph_of,
};
use coxeter_interchange::iso::{isomorphic, Multigraph};
use coxeter_interchange::networks::extended_networks_and_crystals;
use coxeter_interchange::signed::{CompleteSignedGraph, RootType, ScoreVector};
use coxeter_interchange::verify::{
    all_interchange_graphs, check_connectivity, check_coupling, check_crystal_lemmas,
    check_degree_regularity, check_network_census, check_reversal, mixing_sweep,
    scaling_constant,
};

const TYPES: [RootType; 3] = [RootType::B, RootType::C, RootType::D];

/// Largest scaling constant observed across the full sweep, frozen with
/// headroom (measured max 1.4427 = 1/ln 2, from a two-vertex fiber that
/// mixes in exactly one step).
const SCALING_CONSTANT_MAX: f64 = 1.5;

#[test]
fn criterion_1_degree_regularity() {
    for rt in TYPES {
        for n in 1..=4 {
            let detail = check_degree_regularity(rt, n, None).unwrap();
            assert!(detail.contains("all weighted degrees equal the formula"));
        }
    }
    println!(
        "criterion 1 (degree regularity, every fiber of B/C/D up to n = 4): PASS — \
         weighted degree equals (|2s_std|^2 - |2s|^2)/8 at every vertex"
    );
}

#[test]
fn criterion_2_connectivity_and_diameter() {
    let mut fibers = 0u64;
    for rt in TYPES {
        for n in 1..=4 {
            let detail = check_connectivity(rt, n, None).unwrap();
            fibers += detail.split(' ').next().unwrap().parse::<u64>().unwrap();
        }
    }
    println!(
        "criterion 2 (connectivity + diameter bound |E|-2): PASS — all {fibers} fibers of \
         B/C/D up to n = 4 connected within the bound"
    );
}

#[test]
fn criterion_3_golden_c3_structures() {
    let g = Arc::new(CompleteSignedGraph::new(RootType::C, 3).unwrap());

    // center fiber: 16 tournaments, product of a single edge and the
    // 3-cube of double edges
    let center = interchange_graph_of(&g, &ScoreVector::zero(3), None).unwrap();
    assert_eq!(center.vertex_count(), 16);
    let reference = Multigraph::edge(1).cartesian_product(&Multigraph::cube(3, 2));
    assert!(isomorphic(
        &Multigraph::from_interchange(&center),
        &reference
    ));

    // the (2,1,1) fiber is one crystal, 4-regular
    let crystal_ig =
        interchange_graph_of(&g, &ScoreVector::from_halves(vec![4, 2, 2]), None).unwrap();
    assert_eq!(crystal_ig.degree, 4);
    let (_, stats) = extended_networks_and_crystals(&crystal_ig).unwrap();
    assert_eq!(stats.crystals.len(), 1);
    assert_eq!(
        stats.crystals[0].vertices.len(),
        crystal_ig.vertex_count(),
        "the whole fiber is one crystal"
    );

    // the (-1,0,1) fiber is the product of a double edge and the crystal
    let drum = interchange_graph_of(&g, &ScoreVector::from_halves(vec![-2, 0, 2]), None).unwrap();
    let crystal_shape = Multigraph::from_interchange(&crystal_ig);
    let drum_reference = Multigraph::edge(2).cartesian_product(&crystal_shape);
    assert!(isomorphic(&Multigraph::from_interchange(&drum), &drum_reference));

    println!(
        "criterion 3 (golden C_3 structures): PASS — center = edge x doubled 3-cube (16 \
         vertices), (2,1,1) = one 4-regular crystal ({} vertices), (-1,0,1) = double edge x \
         crystal ({} vertices)",
        crystal_ig.vertex_count(),
        drum.vertex_count()
    );
}

#[test]
fn criterion_4_network_census() {
    let mut total = 0u64;
    for rt in TYPES {
        for n in 1..=4 {
            // classification is exhaustive at every n; shape isomorphism
            // is checked on every network for n <= 3 and on at least 1e4
            // samples at n = 4
            let samples = if n <= 3 { usize::MAX } else { 10_000 };
            let (_, census) = check_network_census(rt, n, None, samples).unwrap();
            total += census.total();
        }
    }
    println!(
        "criterion 4 (network census): PASS — {total} distance-two networks across B/C/D \
         n <= 4, all in the five diamond classes with the disjoint/adjacent correspondence, \
         zero unclassified"
    );
}

#[test]
fn criterion_5_crystal_incidence() {
    let mut details = Vec::new();
    for rt in TYPES {
        for n in 1..=4 {
            details.push(check_crystal_lemmas(rt, n, None).unwrap());
        }
    }
    println!(
        "criterion 5 (crystal incidence facts): PASS — no two crystals share a single edge; every \
         double edge lies in at most min(d, 2n) and at most 2(n-2) crystals; C_4: {}",
        details[7]
    );
}

#[test]
fn criterion_6_reversing_procedure() {
    for rt in TYPES {
        let detail = check_reversal(rt, 4, None, 10_000, 20260808).unwrap();
        println!(
            "criterion 6 (reversing, {rt}_4, 1e4 random neutral sets): PASS — {detail}"
        );
    }
}

#[test]
fn criterion_7_coupling_contraction() {
    let d3 = check_coupling(RootType::C, 3, None).unwrap();
    let d4 = check_coupling(RootType::C, 4, None).unwrap();
    println!(
        "criterion 7 (exact coupling contraction in every C_3 and C_4 fiber): PASS — \
         C_3: {d3}; C_4: {d4}"
    );
}

#[test]
fn criterion_8_mixing_scaling() {
    let mut c_max: f64 = 0.0;
    let mut rows_total = 0usize;
    for rt in TYPES {
        for n in 1..=4 {
            let rows = mixing_sweep(rt, n, None).unwrap();
            for row in &rows {
                // every fiber here is far below the 1e5-vertex working cap
                assert!(row.vertices <= 100_000);
                c_max = c_max.max(scaling_constant(row));
            }
            rows_total += rows.len();
        }
    }
    assert!(
        c_max <= SCALING_CONSTANT_MAX,
        "scaling constant {c_max} above the frozen bound {SCALING_CONSTANT_MAX}"
    );
    println!(
        "criterion 8 (exact mixing sweep): PASS — {rows_total} fibers, t_mix <= c * gamma-or-1 \
         * d * log(max(n,2)) with single constant c = {c_max:.4} <= {SCALING_CONSTANT_MAX}"
    );
}

#[test]
fn criterion_9_sampler_occupancy() {
    let g = Arc::new(CompleteSignedGraph::new(RootType::C, 3).unwrap());
    let fiber = enumerate_fiber(&g, &ScoreVector::zero(3), None).unwrap();
    let ig = Arc::new(build_interchange_graph(&fiber).unwrap());
    assert_eq!(ig.vertex_count(), 16);
    let kernel = WalkKernel::new(ig);
    let report = occupancy_check(&kernel, 0, 1_000_000, OCCUPANCY_DEMO_SEED);
    assert!(
        report.within_3_sigma,
        "occupancy outside 3-sigma bands: max |z| = {}",
        report.max_abs_z
    );
    println!(
        "criterion 9 (sampler sanity, 1e6 steps on the 16-state center fiber, fixed seed \
         {OCCUPANCY_DEMO_SEED}): PASS — all 16 states within 3-sigma multinomial bands \
         (max |z| = {:.3})",
        report.max_abs_z
    );
}

/// Derived golden values for the three highlighted C_3 fibers, frozen
/// from exact computation.
#[test]
fn golden_c3_dynamics_values() {
    let g = Arc::new(CompleteSignedGraph::new(RootType::C, 3).unwrap());
    for (halves, v, d, diam, t_mix) in [
        (vec![4, 2, 2], 6, 4, 3, 4),
        (vec![-2, 0, 2], 12, 6, 4, 6),
        (vec![0, 0, 0], 16, 7, 4, 5),
    ] {
        let ig = interchange_graph_of(&g, &ScoreVector::from_halves(halves.clone()), None).unwrap();
        assert_eq!(ig.vertex_count(), v, "{halves:?} vertex count");
        assert_eq!(ig.degree, d, "{halves:?} degree");
        let metrics = graph_metrics(&ig);
        assert_eq!(metrics.diameter, diam, "{halves:?} diameter");
        let report = mixing_time_exact(&WalkKernel::new(Arc::new(ig))).unwrap();
        assert_eq!(report.t_mix, t_mix, "{halves:?} t_mix");
    }
    println!("golden C_3 dynamics values: PASS");
}

/// The verify plumbing reaches every module-level invariant.
#[test]
fn verify_suite_superset_runs_clean() {
    for (rt, n) in [(RootType::A, 4), (RootType::B, 3), (RootType::D, 4)] {
        let graphs = all_interchange_graphs(rt, n, None).unwrap();
        assert!(!graphs.is_empty());
    }
    println!("verify plumbing: PASS");
}
