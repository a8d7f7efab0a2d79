//! Batch verification suite: every structural claim the library rests on,
//! run exhaustively over all fibers of a type at a given player count.
//!
//! Each check reports one pass/fail line; `coxeter verify` exits nonzero
//! if any line fails. The acceptance test suite drives the same functions
//! with its own scopes and tolerances.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::coupling::verify_all_contractions;
use crate::dynamics::{mixing_time_exact, Rational, WalkKernel, WeightedMetric};
use crate::error::{Error, Result};
use crate::interchange::{
    build_interchange_graph, enumerate_fiber, enumerate_score_set, graph_metrics,
    InterchangeGraph,
};
use crate::iso::{isomorphic, Multigraph};
use crate::networks::{
    classify_network, crystal_statistics, distance_two_pairs, extended_networks_and_crystals,
    interchange_network, Network, NetworkCensus, NetworkClass,
};
use crate::rng;
use crate::signed::{CompleteSignedGraph, RootType, ScoreVector, SubTournament, Tournament};
use crate::zframe::{decompose_into_irreducibles, reverse_neutral_subtournament};

/// One line of a verification report.
#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {} — {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        out
    }

    fn record(&mut self, name: &str, result: Result<String>) -> Result<()> {
        match result {
            Ok(detail) => {
                self.checks.push(CheckOutcome {
                    name: name.to_string(),
                    passed: true,
                    detail,
                });
                Ok(())
            }
            Err(Error::Falsified(msg)) => {
                self.checks.push(CheckOutcome {
                    name: name.to_string(),
                    passed: false,
                    detail: msg,
                });
                Ok(())
            }
            Err(other) => Err(other),
        }
    }
}

/// Options for a verification run.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub cap: Option<usize>,
    pub seed: u64,
    /// Random (tournament, neutral subset) instances for the reversing
    /// check.
    pub reversal_instances: usize,
    /// Networks to shape-check by isomorphism (classification itself runs
    /// on every distance-two pair regardless).
    pub shape_samples: usize,
    /// Run the exact-mixing sweep as part of verification.
    pub mixing: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            cap: None,
            seed: 0,
            reversal_instances: 500,
            shape_samples: 10_000,
            mixing: true,
        }
    }
}

/// All nonempty fibers of a type, largest first so rayon balances well.
pub fn all_interchange_graphs(
    rt: RootType,
    n: usize,
    cap: Option<usize>,
) -> Result<Vec<InterchangeGraph>> {
    let graph = Arc::new(CompleteSignedGraph::new(rt, n)?);
    let scores = enumerate_score_set(&graph, cap)?;
    let mut graphs: Vec<InterchangeGraph> = scores
        .par_iter()
        .map(|s| {
            let fiber = enumerate_fiber(&graph, s, cap)?;
            build_interchange_graph(&fiber)
        })
        .collect::<Result<Vec<_>>>()?;
    graphs.sort_by_key(|g| std::cmp::Reverse(g.vertex_count()));
    Ok(graphs)
}

/// Degree regularity: building each graph already checks every vertex
/// against the formula, so this check succeeds exactly when every fiber
/// builds.
pub fn check_degree_regularity(rt: RootType, n: usize, cap: Option<usize>) -> Result<String> {
    let graphs = all_interchange_graphs(rt, n, cap)?;
    let fibers = graphs.len();
    let verts: usize = graphs.iter().map(|g| g.vertex_count()).sum();
    Ok(format!(
        "{fibers} fibers, {verts} tournaments, all weighted degrees equal the formula"
    ))
}

/// Connectivity and the diameter bound `|E(K_Phi)| - 2`.
pub fn check_connectivity(rt: RootType, n: usize, cap: Option<usize>) -> Result<String> {
    let graphs = all_interchange_graphs(rt, n, cap)?;
    let bound = graphs[0].graph.game_count().saturating_sub(2);
    let mut max_diam = 0;
    for ig in &graphs {
        let m = graph_metrics(ig);
        if !m.connected {
            return Err(Error::Falsified(format!(
                "fiber {} of {rt}_{n} is disconnected",
                ig.score
            )));
        }
        if ig.vertex_count() > 1 && m.diameter > bound {
            return Err(Error::Falsified(format!(
                "fiber {} has diameter {} above the bound {bound}",
                ig.score, m.diameter
            )));
        }
        max_diam = max_diam.max(m.diameter);
    }
    Ok(format!(
        "{} fibers connected, max diameter {max_diam} <= {bound}",
        graphs.len()
    ))
}

/// Golden network shapes, one exemplar multigraph per class, generated
/// from the 3-player fibers where each class first appears.
pub fn golden_network_shapes() -> &'static Vec<(NetworkClass, Multigraph)> {
    static SHAPES: OnceLock<Vec<(NetworkClass, Multigraph)>> = OnceLock::new();
    SHAPES.get_or_init(|| {
        let mut shapes: Vec<(NetworkClass, Multigraph)> = Vec::new();
        let mut harvest = |rt: RootType, halves: Vec<i32>| {
            let g = Arc::new(CompleteSignedGraph::new(rt, 3).unwrap());
            let fiber = enumerate_fiber(&g, &ScoreVector::from_halves(halves), None).unwrap();
            let ig = build_interchange_graph(&fiber).unwrap();
            for (a, b) in distance_two_pairs(&ig) {
                let net = interchange_network(&ig, a, b).unwrap();
                let (class, _) = classify_network(&ig, &net).unwrap();
                if !shapes.iter().any(|(c, _)| *c == class) {
                    shapes.push((class, network_shape(&ig, &net)));
                }
            }
        };
        // single diamonds live in D_3 / B_3; the other four in the C_3
        // product-of-double-edge-and-crystal fiber
        harvest(RootType::D, vec![0, 2, 0]);
        harvest(RootType::B, vec![1, 1, 3]);
        harvest(RootType::C, vec![-2, 0, 2]);
        harvest(RootType::C, vec![0, 0, 0]);
        assert_eq!(shapes.len(), 5, "all five network classes discovered");
        shapes
    })
}

/// Plain multigraph of a network (endpoints plus midpoints).
pub fn network_shape(ig: &InterchangeGraph, net: &Network) -> Multigraph {
    let verts = net.vertices();
    let index = |v: u32| verts.iter().position(|&x| x == v).unwrap();
    let mut g = Multigraph::new(verts.len());
    for e in net.edge_ids() {
        let rec = &ig.edges[e as usize];
        g.add_edge(index(rec.u), index(rec.v), rec.mult);
    }
    g
}

/// Network census over every distance-two pair of every fiber: every
/// network must classify (signature + the class tables, enforced inside
/// `classify_network`), and a sample of them must match the golden shape
/// of their class by explicit isomorphism.
pub fn check_network_census(
    rt: RootType,
    n: usize,
    cap: Option<usize>,
    shape_samples: usize,
) -> Result<(String, NetworkCensus)> {
    let graphs = all_interchange_graphs(rt, n, cap)?;
    let goldens = golden_network_shapes();
    let per_graph: Vec<(NetworkCensus, u64)> = graphs
        .par_iter()
        .map(|ig| {
            let pairs = distance_two_pairs(ig);
            let mut census = NetworkCensus::default();
            let mut checked = 0u64;
            let stride = (pairs.len() / shape_samples.max(1)).max(1);
            for (i, &(a, b)) in pairs.iter().enumerate() {
                let net = interchange_network(ig, a, b)?;
                let (class, _) = classify_network(ig, &net)?;
                census.count(class);
                if i % stride == 0 {
                    let shape = network_shape(ig, &net);
                    let golden = &goldens.iter().find(|(c, _)| *c == class).unwrap().1;
                    if !isomorphic(&shape, golden) {
                        return Err(Error::Falsified(format!(
                            "a {class:?} network is not isomorphic to the golden shape"
                        )));
                    }
                    checked += 1;
                }
            }
            Ok((census, checked))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut census = NetworkCensus::default();
    let mut checked = 0;
    for (c, k) in per_graph {
        census.single += c.single;
        census.double += c.double;
        census.quadruple += c.quadruple;
        census.split += c.split;
        census.heavy += c.heavy;
        checked += k;
    }
    let detail = format!(
        "{} networks classified (single {}, double {}, quadruple {}, split {}, heavy {}), {checked} shape-checked",
        census.total(),
        census.single,
        census.double,
        census.quadruple,
        census.split,
        census.heavy
    );
    Ok((detail, census))
}

/// Extended-network stability and crystal facts for every fiber: the
/// closure/sharing assertions run inside `extended_networks_and_crystals`;
/// this driver aggregates gamma.
pub fn check_crystal_lemmas(rt: RootType, n: usize, cap: Option<usize>) -> Result<String> {
    let graphs = all_interchange_graphs(rt, n, cap)?;
    let stats: Vec<(u64, usize)> = graphs
        .par_iter()
        .map(|ig| {
            let (_, s) = extended_networks_and_crystals(ig)?;
            Ok((s.gamma, s.crystals.len()))
        })
        .collect::<Result<Vec<_>>>()?;
    let gamma_max = stats.iter().map(|&(g, _)| g).max().unwrap_or(0);
    let crystals: usize = stats.iter().map(|&(_, c)| c).sum();
    if rt != RootType::C && crystals > 0 {
        return Err(Error::Falsified(format!(
            "type {rt} produced {crystals} crystals"
        )));
    }
    Ok(format!(
        "{} fibers, {crystals} crystals, gamma <= {gamma_max} (bounds min(d,2n) and 2(n-2) hold)",
        graphs.len()
    ))
}

/// Random (tournament, neutral subset) reversing instances: neutral sets
/// are sampled as differences of same-fiber pairs, which reaches every
/// neutral subset of every tournament. The procedure must flip exactly
/// the requested games using at most `l - 2` reversals per irreducible
/// component.
pub fn check_reversal(
    rt: RootType,
    n: usize,
    cap: Option<usize>,
    instances: usize,
    seed: u64,
) -> Result<String> {
    let graph = Arc::new(CompleteSignedGraph::new(rt, n)?);
    crate::interchange::check_cap(rt, n, cap)?;
    let fibers: HashMap<ScoreVector, Vec<Tournament>> = {
        let scores = enumerate_score_set(&graph, cap)?;
        scores
            .into_par_iter()
            .map(|s| {
                let f = enumerate_fiber(&graph, &s, cap)?;
                Ok((s, f.tournaments))
            })
            .collect::<Result<_>>()?
    };
    let done: Vec<(usize, usize)> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut counter = 0u64;
            loop {
                counter += 1;
                let t = Tournament::new(
                    rng::word(seed, (i as u64) << 8, counter) & graph.full_mask(),
                );
                let fiber = &fibers[&graph.score(t)];
                if fiber.len() < 2 {
                    continue;
                }
                let pick =
                    rng::bounded(seed, (i as u64) << 8 | 1, counter, fiber.len() as u64) as usize;
                let t2 = fiber[pick];
                if t2 == t {
                    continue;
                }
                let mask = t.bits ^ t2.bits;
                let comps =
                    decompose_into_irreducibles(&graph, SubTournament::restrict(t, mask));
                let bound: usize = comps.iter().map(|c| c.len() - 2).sum();
                let seq = reverse_neutral_subtournament(&graph, t, mask)?;
                if seq.len() > bound {
                    return Err(Error::Falsified(format!(
                        "reversal took {} steps, component bound is {bound}",
                        seq.len()
                    )));
                }
                return Ok((seq.len(), mask.count_ones() as usize));
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let max_games = done.iter().map(|&(_, l)| l).max().unwrap_or(0);
    let max_steps = done.iter().map(|&(s, _)| s).max().unwrap_or(0);
    Ok(format!(
        "{instances} instances on {rt}_{n}, largest set {max_games} games, longest sequence {max_steps} <= l-2 per component"
    ))
}

/// Exact coupling verification for every adjacent pair of every fiber:
/// marginals equal the lazy-walk law and the expected one-step weighted
/// distance matches the case formulas.
pub fn check_coupling(rt: RootType, n: usize, cap: Option<usize>) -> Result<String> {
    let graphs = all_interchange_graphs(rt, n, cap)?;
    let alphas: Vec<Option<Rational>> = graphs
        .par_iter()
        .map(|ig| {
            let stats = crystal_statistics(ig)?;
            verify_all_contractions(ig, &stats)
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs: usize = graphs.iter().map(|g| 2 * g.edges.len()).sum();
    let alpha_min = alphas.into_iter().flatten().min();
    Ok(format!(
        "{pairs} directed adjacent pairs verified; minimum contraction alpha = {}",
        alpha_min
            .map(|a| a.to_string())
            .unwrap_or_else(|| "n/a".into())
    ))
}

/// One row of the mixing sweep.
#[derive(Clone, Debug, Serialize)]
pub struct MixRow {
    #[serde(rename = "type")]
    pub root_type: String,
    pub n: usize,
    pub score: Vec<i32>,
    pub vertices: usize,
    pub d: u64,
    pub gamma: u64,
    pub t_mix: usize,
}

/// Exact mixing times for every fiber of a type.
pub fn mixing_sweep(rt: RootType, n: usize, cap: Option<usize>) -> Result<Vec<MixRow>> {
    let graphs = all_interchange_graphs(rt, n, cap)?;
    graphs
        .into_par_iter()
        .map(|ig| {
            let gamma = if rt == RootType::C {
                crystal_statistics(&ig)?.gamma
            } else {
                0
            };
            let d = ig.degree;
            let score = ig.score.halves().to_vec();
            let v = ig.vertex_count();
            let kernel = WalkKernel::new(Arc::new(ig));
            let report = mixing_time_exact(&kernel)?;
            Ok(MixRow {
                root_type: rt.as_str().into(),
                n,
                score,
                vertices: v,
                d,
                gamma,
                t_mix: report.t_mix,
            })
        })
        .collect()
}

/// The scaling constant of one row: `t_mix / (d log n)` for crystal-free
/// rows and `t_mix / (gamma d log n)` when crystals are present, with
/// `log` taken at `max(n, 2)`.
pub fn scaling_constant(row: &MixRow) -> f64 {
    if row.d == 0 {
        return 0.0;
    }
    let log_n = (row.n.max(2) as f64).ln();
    let denom = if row.gamma > 0 {
        row.gamma as f64 * row.d as f64 * log_n
    } else {
        row.d as f64 * log_n
    };
    row.t_mix as f64 / denom
}

pub fn check_mixing(rt: RootType, n: usize, cap: Option<usize>) -> Result<(String, Vec<MixRow>)> {
    let rows = mixing_sweep(rt, n, cap)?;
    let c = rows
        .iter()
        .map(scaling_constant)
        .fold(0.0f64, f64::max);
    let t_max = rows.iter().map(|r| r.t_mix).max().unwrap_or(0);
    Ok((
        format!(
            "{} fibers mixed exactly, max t_mix {t_max}, scaling constant c = {c:.3}",
            rows.len()
        ),
        rows,
    ))
}

/// Weighted diameters stay below `(1 + 1/gamma)` times the hop diameter.
pub fn check_weighted_diameter(rt: RootType, n: usize, cap: Option<usize>) -> Result<String> {
    let graphs = all_interchange_graphs(rt, n, cap)?;
    for ig in &graphs {
        let stats = crystal_statistics(ig)?;
        let metric = WeightedMetric::new(&stats);
        let hop = graph_metrics(ig).diameter;
        let dw = metric.weighted_diameter(ig);
        let gamma = stats.gamma.max(1) as i64;
        let bound = Rational::new((gamma + 1) * hop as i64, gamma);
        if dw > bound {
            return Err(Error::Falsified(format!(
                "weighted diameter {dw} above (1+1/gamma) * {hop}"
            )));
        }
    }
    Ok(format!("{} fibers within the weighted-diameter bound", graphs.len()))
}

/// The full suite for one (type, n).
pub fn verify_type(rt: RootType, n: usize, opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    report.record(
        &format!("degree-regularity {rt}_{n}"),
        check_degree_regularity(rt, n, opts.cap),
    )?;
    report.record(
        &format!("connectivity-diameter {rt}_{n}"),
        check_connectivity(rt, n, opts.cap),
    )?;
    report.record(
        &format!("network-census {rt}_{n}"),
        check_network_census(rt, n, opts.cap, opts.shape_samples).map(|(d, _)| d),
    )?;
    report.record(
        &format!("crystal-structure {rt}_{n}"),
        check_crystal_lemmas(rt, n, opts.cap),
    )?;
    report.record(
        &format!("reversing-procedure {rt}_{n}"),
        check_reversal(rt, n, opts.cap, opts.reversal_instances, opts.seed),
    )?;
    report.record(
        &format!("coupling-contraction {rt}_{n}"),
        check_coupling(rt, n, opts.cap),
    )?;
    report.record(
        &format!("weighted-diameter {rt}_{n}"),
        check_weighted_diameter(rt, n, opts.cap),
    )?;
    if opts.mixing {
        report.record(
            &format!("exact-mixing {rt}_{n}"),
            check_mixing(rt, n, opts.cap).map(|(d, _)| d),
        )?;
    }
    Ok(report)
}
