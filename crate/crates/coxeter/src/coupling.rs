//! Coupled lazy walks and exact one-step contraction.
//!
//! For two walks started at adjacent vertices, a bijection `psi` between
//! the incident edge slots of the two endpoints drives both chains with
//! one slot draw and one fairness coin, so each chain's marginal is
//! exactly one lazy step. The pairing depends on how the connecting edge
//! sits in the network structure:
//!
//! - connecting single edge in no crystal (and all of types B/D): `psi`
//!   fixes the connecting edge and pairs opposite edges across the
//!   single/double diamonds through it; the chains coalesce with
//!   probability `1/d` and otherwise stay adjacent by a single edge;
//! - connecting single edge in exactly one crystal: the two crystal
//!   single edges at one endpoint pair with the two slots of the other
//!   endpoint's crystal double edge (and vice versa), so the chains never
//!   coalesce in one step but convert to a double edge with probability
//!   `2/d`;
//! - connecting double edge in `gamma'` crystals: `psi` fixes both slots
//!   of the connecting edge (coalescence probability `2/d`) and, inside
//!   each crystal, pairs the two single edges at one endpoint with the
//!   two slots of the crystal's other double edge.
//!
//! Under the metric that weighs single edges `1 + 1/gamma` and double
//! edges 1, the expected distance after one coupled step contracts by the
//! exact case formulas, verified here in rational arithmetic.

use num_rational::Ratio;
use serde::Serialize;

use crate::dynamics::{Rational, WeightedMetric};
use crate::error::{Error, Result};
use crate::interchange::InterchangeGraph;
use crate::networks::CrystalStatistics;
use crate::rng;

/// Where the connecting edge of a coupled pair sits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CouplingCase {
    /// Single connecting edge in no crystal (always the case in B/D).
    SingleFree,
    /// Single connecting edge in exactly one crystal.
    SingleInCrystal { crystal: u32 },
    /// Double connecting edge, lying in `crystal_count <= gamma` crystals.
    DoubleEdge { crystal_count: u64 },
}

/// A slot is one traversable copy of an edge at a vertex.
pub type Slot = (u32, u8);

/// The edge-slot bijection between two adjacent vertices.
#[derive(Clone, Debug)]
pub struct EdgePairing {
    pub u: u32,
    pub v: u32,
    /// Edge joining `u` and `v`.
    pub edge: u32,
    pub case: CouplingCase,
    /// Slots at `u`, in deterministic order.
    pub slots_u: Vec<Slot>,
    /// `map[i]` is the slot at `v` paired with `slots_u[i]`.
    pub map: Vec<Slot>,
}

/// Edges of one crystal incident to a vertex, split by multiplicity.
fn crystal_edges_at(
    ig: &InterchangeGraph,
    stats: &CrystalStatistics,
    crystal: u32,
    vertex: u32,
) -> (Vec<u32>, Vec<u32>) {
    let mut singles = Vec::new();
    let mut doubles = Vec::new();
    for &e in &stats.crystals[crystal as usize].edge_ids {
        let rec = &ig.edges[e as usize];
        if rec.u == vertex || rec.v == vertex {
            if rec.mult == 2 {
                doubles.push(e);
            } else {
                singles.push(e);
            }
        }
    }
    singles.sort_unstable();
    doubles.sort_unstable();
    (singles, doubles)
}

/// Build the slot bijection for an adjacent pair.
pub fn edge_pairing_psi(
    ig: &InterchangeGraph,
    stats: &CrystalStatistics,
    u: u32,
    v: u32,
) -> Result<EdgePairing> {
    let edge = ig
        .edge_between(u, v)
        .ok_or_else(|| Error::BadDistance("vertices are not adjacent".into()))?;
    let mult = ig.edges[edge as usize].mult;
    let case = if mult == 2 {
        CouplingCase::DoubleEdge {
            crystal_count: stats.crystals_of_edge(edge).len() as u64,
        }
    } else {
        match stats.crystal_of_single_edge(edge) {
            None => CouplingCase::SingleFree,
            Some(c) => CouplingCase::SingleInCrystal { crystal: c },
        }
    };
    let slots_u = ig.slots(u);
    let d = slots_u.len();
    let mut map: Vec<Option<Slot>> = vec![None; d];
    let idx_of = |slot: Slot| slots_u.iter().position(|&s| s == slot).unwrap();

    // crystal-specific assignments first
    match &case {
        CouplingCase::SingleFree => {
            map[idx_of((edge, 0))] = Some((edge, 0));
        }
        CouplingCase::SingleInCrystal { crystal } => {
            let (su, du) = crystal_edges_at(ig, stats, *crystal, u);
            let (sv, dv) = crystal_edges_at(ig, stats, *crystal, v);
            if su.len() != 2 || sv.len() != 2 || du.len() != 1 || dv.len() != 1 {
                return Err(Error::Falsified(format!(
                    "crystal incidence at a single edge is not 2 singles + 1 double \
                     (u: {su:?}/{du:?}, v: {sv:?}/{dv:?})"
                )));
            }
            if !su.contains(&edge) || !sv.contains(&edge) {
                return Err(Error::Falsified(
                    "connecting single edge missing from its own crystal".into(),
                ));
            }
            // u's two crystal singles -> the two slots of v's crystal double
            let other_su = su.into_iter().find(|&e| e != edge).unwrap();
            map[idx_of((edge, 0))] = Some((dv[0], 0));
            map[idx_of((other_su, 0))] = Some((dv[0], 1));
            // u's crystal double slots -> v's two crystal singles
            let other_sv = sv.into_iter().find(|&e| e != edge).unwrap();
            map[idx_of((du[0], 0))] = Some((edge, 0));
            map[idx_of((du[0], 1))] = Some((other_sv, 0));
        }
        CouplingCase::DoubleEdge { .. } => {
            // the connecting double edge is fixed slot-wise
            map[idx_of((edge, 0))] = Some((edge, 0));
            map[idx_of((edge, 1))] = Some((edge, 1));
            for &c in stats.crystals_of_edge(edge) {
                let (su, du) = crystal_edges_at(ig, stats, c, u);
                let (sv, dv) = crystal_edges_at(ig, stats, c, v);
                // besides the connecting edge, one endpoint carries two
                // crystal singles and the other carries one crystal double
                let du: Vec<u32> = du.into_iter().filter(|&e| e != edge).collect();
                let dv: Vec<u32> = dv.into_iter().filter(|&e| e != edge).collect();
                match (su.len(), du.len(), sv.len(), dv.len()) {
                    (2, 0, 0, 1) => {
                        map[idx_of((su[0], 0))] = Some((dv[0], 0));
                        map[idx_of((su[1], 0))] = Some((dv[0], 1));
                    }
                    (0, 1, 2, 0) => {
                        map[idx_of((du[0], 0))] = Some((sv[0], 0));
                        map[idx_of((du[0], 1))] = Some((sv[1], 0));
                    }
                    shape => {
                        return Err(Error::Falsified(format!(
                            "crystal incidence at a double edge has shape {shape:?}"
                        )))
                    }
                }
            }
        }
    }

    // everything else pairs across its diamond: the network between v and
    // the far endpoint has exactly two midpoints, u and one other; the
    // paired slot is the same-position slot of the opposite edge
    for i in 0..d {
        if map[i].is_some() {
            continue;
        }
        let (e, k) = slots_u[i];
        let x = ig.other_end(e, u);
        let mids = ig.common_neighbors(v, x);
        if !mids.contains(&u) {
            return Err(Error::Falsified(
                "connecting midpoint missing from its own diamond".into(),
            ));
        }
        let others: Vec<u32> = mids.into_iter().filter(|&m| m != u).collect();
        if others.len() != 1 {
            return Err(Error::Falsified(format!(
                "expected exactly one opposite midpoint, found {}",
                others.len()
            )));
        }
        let y = others[0];
        let f = ig.edge_between(v, y).unwrap();
        if ig.edges[f as usize].mult != ig.edges[e as usize].mult {
            return Err(Error::Falsified(
                "opposite edges of a diamond differ in multiplicity".into(),
            ));
        }
        map[i] = Some((f, k));
    }

    let map: Vec<Slot> = map.into_iter().map(Option::unwrap).collect();
    // bijection check: the image must be exactly the slot set of v
    let mut image = map.clone();
    image.sort_unstable();
    let mut slots_v = ig.slots(v);
    slots_v.sort_unstable();
    if image != slots_v {
        return Err(Error::Falsified(
            "slot pairing is not a bijection onto the neighbor's slots".into(),
        ));
    }
    Ok(EdgePairing {
        u,
        v,
        edge,
        case,
        slots_u,
        map,
    })
}

impl EdgePairing {
    /// Whether a drawn slot makes the chains coalesce.
    fn coalesces(&self, slot: Slot) -> bool {
        slot.0 == self.edge && !matches!(self.case, CouplingCase::SingleInCrystal { .. })
    }
}

/// One coupled transition given the shared randomness (slot index below
/// the degree, and the fairness coin).
pub fn coupled_step_at(
    ig: &InterchangeGraph,
    pairing: &EdgePairing,
    slot_idx: usize,
    coin: bool,
) -> (u32, u32) {
    let slot = pairing.slots_u[slot_idx];
    if pairing.coalesces(slot) {
        return if coin {
            (pairing.v, pairing.v)
        } else {
            (pairing.u, pairing.u)
        };
    }
    if !coin {
        (pairing.u, pairing.v)
    } else {
        let x = ig.other_end(slot.0, pairing.u);
        let y = ig.other_end(pairing.map[slot_idx].0, pairing.v);
        (x, y)
    }
}

/// One coupled step driven by the counter-based stream of `seed`.
pub fn coupled_step(
    ig: &InterchangeGraph,
    pairing: &EdgePairing,
    seed: u64,
    step: u64,
) -> (u32, u32) {
    let d = pairing.slots_u.len() as u64;
    let slot_idx = rng::bounded(seed, 1, 2 * step, d) as usize;
    let coin = rng::coin(seed, 1, 2 * step + 1);
    coupled_step_at(ig, pairing, slot_idx, coin)
}

/// The full outcome distribution of one coupled step, with the exact
/// expected weighted distance.
#[derive(Clone, Debug)]
pub struct CouplingOutcome {
    pub outcomes: Vec<((u32, u32), Rational)>,
    pub expected_weight: Rational,
}

/// Enumerate all `2d` equally likely outcomes. Every outcome pair must be
/// equal or adjacent; anything else falsifies the pairing construction.
pub fn coupling_outcomes(
    ig: &InterchangeGraph,
    metric: &WeightedMetric,
    pairing: &EdgePairing,
) -> Result<CouplingOutcome> {
    let d = pairing.slots_u.len();
    let prob = Rational::new(1, 2 * d as i64);
    let mut acc: Vec<((u32, u32), Rational)> = Vec::new();
    let mut expected = Rational::new(0, 1);
    for slot_idx in 0..d {
        for coin in [false, true] {
            let (a, b) = coupled_step_at(ig, pairing, slot_idx, coin);
            let w = if a == b {
                Rational::new(0, 1)
            } else if let Some(e) = ig.edge_between(a, b) {
                metric.adjacent_weight(ig.edges[e as usize].mult)
            } else {
                return Err(Error::Falsified(format!(
                    "coupled step left vertices {a} and {b} non-adjacent"
                )));
            };
            expected += w * prob;
            if let Some(entry) = acc.iter_mut().find(|(pair, _)| *pair == (a, b)) {
                entry.1 += prob;
            } else {
                acc.push(((a, b), prob));
            }
        }
    }
    Ok(CouplingOutcome {
        outcomes: acc,
        expected_weight: expected,
    })
}

/// Check that each coupled chain's one-step law equals the lazy-walk law
/// exactly.
pub fn verify_marginals(ig: &InterchangeGraph, pairing: &EdgePairing) -> Result<()> {
    let d = pairing.slots_u.len();
    let prob = Rational::new(1, 2 * d as i64);
    let mut law1: std::collections::HashMap<u32, Rational> = Default::default();
    let mut law2: std::collections::HashMap<u32, Rational> = Default::default();
    for slot_idx in 0..d {
        for coin in [false, true] {
            let (a, b) = coupled_step_at(ig, pairing, slot_idx, coin);
            *law1.entry(a).or_insert_with(|| Rational::new(0, 1)) += prob;
            *law2.entry(b).or_insert_with(|| Rational::new(0, 1)) += prob;
        }
    }
    for (start, law) in [(pairing.u, law1), (pairing.v, law2)] {
        let mut expect: std::collections::HashMap<u32, Rational> = Default::default();
        expect.insert(start, Rational::new(1, 2));
        for &e in &ig.adj[start as usize] {
            let rec = &ig.edges[e as usize];
            let nbr = ig.other_end(e, start);
            *expect.entry(nbr).or_insert_with(|| Rational::new(0, 1)) +=
                Rational::new(rec.mult as i64, 2 * d as i64);
        }
        if law != expect {
            return Err(Error::Falsified(format!(
                "coupled marginal at vertex {start} differs from the lazy-walk law"
            )));
        }
    }
    Ok(())
}

/// Exact expected weighted distance after one coupled step.
pub fn expected_coupled_weight(
    ig: &InterchangeGraph,
    metric: &WeightedMetric,
    pairing: &EdgePairing,
) -> Result<Rational> {
    Ok(coupling_outcomes(ig, metric, pairing)?.expected_weight)
}

/// Contraction record of one adjacent pair.
#[derive(Clone, Debug, Serialize)]
pub struct ContractionRecord {
    pub u: u32,
    pub v: u32,
    pub case: CouplingCase,
    pub start_weight: Rational,
    pub expected_weight: Rational,
    /// One-step contraction factor `1 - E[w_1]/w_0`.
    pub alpha: Rational,
}

/// Verify the exact case formula for one adjacent pair and return the
/// contraction record. `d` is the regular degree and `gamma` the maximal
/// crystal degree of the graph:
///
/// - single edge, no crystal: `E = (1 - 1/d) w0`,
/// - single edge in one crystal: `E = (1 - 2/(d (1 + gamma))) w0`,
/// - double edge in `g'` crystals: `E = 1 - (2 gamma - g')/(d gamma)`
///   (with `gamma = 0` read as `E = 1 - 2/d`), and `E <= (1 - 1/d) w0`.
pub fn verify_contraction(
    ig: &InterchangeGraph,
    stats: &CrystalStatistics,
    metric: &WeightedMetric,
    u: u32,
    v: u32,
) -> Result<ContractionRecord> {
    let pairing = edge_pairing_psi(ig, stats, u, v)?;
    verify_marginals(ig, &pairing)?;
    let expected = expected_coupled_weight(ig, metric, &pairing)?;
    let d = ig.degree as i64;
    let gamma = stats.gamma as i64;
    let w0 = metric.adjacent_weight(ig.edges[pairing.edge as usize].mult);
    let one = Rational::new(1, 1);
    match pairing.case {
        CouplingCase::SingleFree => {
            let formula = (one - Rational::new(1, d)) * w0;
            if expected != formula {
                return Err(Error::Falsified(format!(
                    "single-edge contraction: expected {formula}, computed {expected}"
                )));
            }
        }
        CouplingCase::SingleInCrystal { .. } => {
            let formula = (one - Rational::new(2, d * (1 + gamma))) * w0;
            if expected != formula {
                return Err(Error::Falsified(format!(
                    "crystal single-edge contraction: expected {formula}, computed {expected}"
                )));
            }
        }
        CouplingCase::DoubleEdge { crystal_count } => {
            let formula = if gamma == 0 {
                one - Rational::new(2, d)
            } else {
                one - Rational::new(2 * gamma - crystal_count as i64, d * gamma)
            };
            if expected != formula {
                return Err(Error::Falsified(format!(
                    "double-edge contraction: expected {formula}, computed {expected}"
                )));
            }
            let bound = (one - Rational::new(1, d)) * w0;
            if expected > bound {
                return Err(Error::Falsified(format!(
                    "double-edge contraction {expected} exceeds (1 - 1/d) w0 = {bound}"
                )));
            }
        }
    }
    let alpha = one - expected / w0;
    Ok(ContractionRecord {
        u,
        v,
        case: pairing.case,
        start_weight: w0,
        expected_weight: expected,
        alpha,
    })
}

/// Verify contraction for every adjacent pair of a graph; returns the
/// minimum contraction factor (`None` for a single-vertex graph).
pub fn verify_all_contractions(
    ig: &InterchangeGraph,
    stats: &CrystalStatistics,
) -> Result<Option<Ratio<i64>>> {
    use rayon::prelude::*;
    let metric = WeightedMetric::new(stats);
    let alphas: Vec<Rational> = ig
        .edges
        .par_iter()
        .map(|e| {
            let fwd = verify_contraction(ig, stats, &metric, e.u, e.v)?;
            let bwd = verify_contraction(ig, stats, &metric, e.v, e.u)?;
            Ok(fwd.alpha.min(bwd.alpha))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(alphas.into_iter().min())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interchange::interchange_graph_of;
    use crate::networks::crystal_statistics;
    use crate::signed::{CompleteSignedGraph, RootType, ScoreVector};
    use std::sync::Arc;

    fn setup(rt: RootType, n: usize, halves: Vec<i32>) -> (Arc<InterchangeGraph>, CrystalStatistics) {
        let g = Arc::new(CompleteSignedGraph::new(rt, n).unwrap());
        let ig = Arc::new(interchange_graph_of(&g, &ScoreVector::from_halves(halves), None).unwrap());
        let stats = crystal_statistics(&ig).unwrap();
        (ig, stats)
    }

    #[test]
    fn bd_pairs_contract_at_one_over_d() {
        let (ig, stats) = setup(RootType::D, 3, vec![0, 2, 0]);
        let metric = WeightedMetric::new(&stats);
        assert_eq!(stats.gamma, 0);
        for e in &ig.edges {
            let rec = verify_contraction(&ig, &stats, &metric, e.u, e.v).unwrap();
            assert_eq!(rec.alpha, Rational::new(1, ig.degree as i64));
            assert_eq!(rec.case, CouplingCase::SingleFree);
        }
    }

    #[test]
    fn crystal_fiber_cases() {
        let (ig, stats) = setup(RootType::C, 3, vec![4, 2, 2]);
        assert_eq!(stats.gamma, 1);
        let metric = WeightedMetric::new(&stats);
        let mut saw_single_crystal = false;
        let mut saw_double = false;
        for e in &ig.edges {
            let rec = verify_contraction(&ig, &stats, &metric, e.u, e.v).unwrap();
            match rec.case {
                CouplingCase::SingleInCrystal { .. } => {
                    saw_single_crystal = true;
                    // E = (1 - 2/(4*2)) * 2 = 3/2, alpha = 1/4
                    assert_eq!(rec.expected_weight, Rational::new(3, 2));
                    assert_eq!(rec.alpha, Rational::new(1, 4));
                }
                CouplingCase::DoubleEdge { crystal_count } => {
                    saw_double = true;
                    assert_eq!(crystal_count, 1);
                    // E = 1 - (2 - 1)/4 = 3/4
                    assert_eq!(rec.expected_weight, Rational::new(3, 4));
                }
                CouplingCase::SingleFree => panic!("all edges lie in the crystal"),
            }
        }
        assert!(saw_single_crystal && saw_double);
    }

    #[test]
    fn tambourine_has_no_crystals_and_contracts() {
        let (ig, stats) = setup(RootType::C, 3, vec![0, 0, 0]);
        assert_eq!(stats.gamma, 0);
        let alpha = verify_all_contractions(&ig, &stats).unwrap().unwrap();
        // single edges contract at 1/d, double edges at 2/d
        assert_eq!(alpha, Rational::new(1, ig.degree as i64));
    }

    #[test]
    fn coalescence_probabilities() {
        // B/D single edge: P(coalesce) = 1/d; C double edge: 2/d
        let (ig, stats) = setup(RootType::B, 3, vec![1, 1, 3]);
        let metric = WeightedMetric::new(&stats);
        let e = &ig.edges[0];
        let pairing = edge_pairing_psi(&ig, &stats, e.u, e.v).unwrap();
        let out = coupling_outcomes(&ig, &metric, &pairing).unwrap();
        let coalesced: Rational = out
            .outcomes
            .iter()
            .filter(|((a, b), _)| a == b)
            .map(|(_, p)| *p)
            .sum();
        assert_eq!(coalesced, Rational::new(1, ig.degree as i64));

        let (ig2, stats2) = setup(RootType::C, 3, vec![4, 2, 2]);
        let metric2 = WeightedMetric::new(&stats2);
        let de = ig2.edges.iter().position(|e| e.mult == 2).unwrap();
        let e2 = &ig2.edges[de];
        let pairing2 = edge_pairing_psi(&ig2, &stats2, e2.u, e2.v).unwrap();
        let out2 = coupling_outcomes(&ig2, &metric2, &pairing2).unwrap();
        let coalesced2: Rational = out2
            .outcomes
            .iter()
            .filter(|((a, b), _)| a == b)
            .map(|(_, p)| *p)
            .sum();
        assert_eq!(coalesced2, Rational::new(2, ig2.degree as i64));

        // crystal single edge: never coalesces, converts to a double edge
        // with probability 2/d
        let se = ig2
            .edges
            .iter()
            .position(|e| e.mult == 1)
            .unwrap();
        let e3 = &ig2.edges[se];
        let pairing3 = edge_pairing_psi(&ig2, &stats2, e3.u, e3.v).unwrap();
        let out3 = coupling_outcomes(&ig2, &metric2, &pairing3).unwrap();
        let coalesced3: Rational = out3
            .outcomes
            .iter()
            .filter(|((a, b), _)| a == b)
            .map(|(_, p)| *p)
            .sum();
        assert_eq!(coalesced3, Rational::new(0, 1));
        let to_double: Rational = out3
            .outcomes
            .iter()
            .filter(|((a, b), _)| {
                a != b
                    && ig2
                        .edge_between(*a, *b)
                        .map(|e| ig2.edges[e as usize].mult == 2)
                        .unwrap_or(false)
            })
            .map(|(_, p)| *p)
            .sum();
        assert_eq!(to_double, Rational::new(2, ig2.degree as i64));
    }

    #[test]
    fn double_edges_below_maximal_crystal_degree_contract_strictly() {
        // a C_4 fiber with gamma = 2 where some double edges lie in only
        // one crystal: E = 1 - (2 gamma - gamma')/(d gamma) stays strictly
        // below the (1 - 1/d) bound there
        let (ig, stats) = setup(RootType::C, 4, vec![2, 0, 0, 2]);
        assert_eq!(stats.gamma, 2);
        let metric = WeightedMetric::new(&stats);
        let mut seen = [false; 3];
        for (eid, e) in ig.edges.iter().enumerate() {
            if e.mult != 2 {
                continue;
            }
            let gp = stats.crystals_of_edge(eid as u32).len() as i64;
            let rec = verify_contraction(&ig, &stats, &metric, e.u, e.v).unwrap();
            let d = ig.degree as i64;
            let expect = Rational::new(1, 1) - Rational::new(2 * 2 - gp, 2 * d);
            assert_eq!(rec.expected_weight, expect);
            seen[gp as usize] = true;
            if gp < 2 {
                assert!(rec.expected_weight < Rational::new(d - 1, d));
            }
        }
        assert!(seen[1] && seen[2], "both crystal degrees occur: {seen:?}");
    }

    #[test]
    fn coupled_step_is_reproducible() {
        let (ig, stats) = setup(RootType::C, 3, vec![4, 2, 2]);
        let e = &ig.edges[0];
        let pairing = edge_pairing_psi(&ig, &stats, e.u, e.v).unwrap();
        let a = coupled_step(&ig, &pairing, 5, 0);
        let b = coupled_step(&ig, &pairing, 5, 0);
        assert_eq!(a, b);
    }
}
