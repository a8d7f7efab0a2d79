//! Interchange networks: the two-step neighborhoods of the interchange
//! graph, their diamond classification, extended (antipodally closed)
//! networks, and crystals.
//!
//! For two fiber elements at distance two, the network is the union of
//! all two-step paths between them. Networks fall into exactly five
//! classes. With game-disjoint generators the class is determined by how
//! many of the two are clovers (single, double, quadruple diamond); with
//! adjacent generators the projection of the 4-game difference (square,
//! tent, fork, hanger) decides between single, split, and double-or-heavy
//! diamonds. Split and heavy diamonds close up into crystals, the only
//! unstable networks; crystal incidence drives the reweighted coupling
//! metric for type C.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interchange::InterchangeGraph;
use crate::signed::{GameKind, RootType, SubTournament};

/// The five network shapes.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum NetworkClass {
    /// Two paths, all four edges single.
    SingleDiamond,
    /// Two paths, each one single and one double edge, the single edges at
    /// opposite endpoints.
    DoubleDiamond,
    /// Two paths of double edges.
    QuadrupleDiamond,
    /// Three paths: two all-single, one all-double.
    SplitDiamond,
    /// Two paths, each one single and one double edge, with both single
    /// edges at the same endpoint.
    HeavyDiamond,
}

/// Shape of the projected 4-game difference when the two generators
/// behind a network are adjacent (share one game).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ProjectionClass {
    /// Four pair games on four players in a cycle.
    Square,
    /// Two double-bonded pairs from an apex player, three players.
    Tent,
    /// Two half edges hanging off a two-edge path (type B only).
    Fork,
    /// A loop plus a triangle of pair games (type C only).
    Hanger,
}

/// One two-step path of a network.
#[derive(Copy, Clone, Debug)]
pub struct NetworkPath {
    pub mid: u32,
    pub edge_a: u32,
    pub edge_b: u32,
    pub mult_a: u8,
    pub mult_b: u8,
}

/// The union of all two-step paths between two vertices at distance two.
#[derive(Clone, Debug)]
pub struct Network {
    pub a: u32,
    pub b: u32,
    pub paths: Vec<NetworkPath>,
}

impl Network {
    /// Edge ids of the network, sorted and deduplicated.
    pub fn edge_ids(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .paths
            .iter()
            .flat_map(|p| [p.edge_a, p.edge_b])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn vertices(&self) -> Vec<u32> {
        let mut out = vec![self.a, self.b];
        out.extend(self.paths.iter().map(|p| p.mid));
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Build the network of a distance-two pair.
pub fn interchange_network(ig: &InterchangeGraph, a: u32, b: u32) -> Result<Network> {
    if a == b {
        return Err(Error::BadDistance("identical vertices".into()));
    }
    if ig.edge_between(a, b).is_some() {
        return Err(Error::BadDistance("vertices are adjacent".into()));
    }
    let mids = ig.common_neighbors(a, b);
    if mids.is_empty() {
        return Err(Error::BadDistance("no two-step path".into()));
    }
    let paths = mids
        .into_iter()
        .map(|mid| {
            let ea = ig.edge_between(a, mid).unwrap();
            let eb = ig.edge_between(mid, b).unwrap();
            NetworkPath {
                mid,
                edge_a: ea,
                edge_b: eb,
                mult_a: ig.edges[ea as usize].mult,
                mult_b: ig.edges[eb as usize].mult,
            }
        })
        .collect();
    Ok(Network { a, b, paths })
}

/// Classify a network by its path-multiplicity signature and, when the
/// underlying generators are adjacent, return the projection class of the
/// 4-game difference as well. The combination is cross-checked against
/// the class tables; any mismatch or unrecognized signature is reported
/// as a falsification.
pub fn classify_network(
    ig: &InterchangeGraph,
    net: &Network,
) -> Result<(NetworkClass, Option<ProjectionClass>)> {
    let class = signature_class(net).ok_or_else(|| {
        Error::Falsified(format!(
            "network with path profile {:?} matches no known class",
            profile(net)
        ))
    })?;
    let graph = &ig.graph;
    let diff_bits = ig.verts[net.a as usize].bits ^ ig.verts[net.b as usize].bits;
    let diff = SubTournament::new(diff_bits, ig.verts[net.a as usize].bits & diff_bits);
    let projection = match diff.len() {
        6 => None, // game-disjoint generators
        4 => Some(projection_class(graph.root_type(), &diff_kinds(graph, diff))?),
        other => {
            return Err(Error::Falsified(format!(
                "distance-two difference has {other} games"
            )))
        }
    };
    // class-table cross-check
    match projection {
        None => {
            // count clovers among the two generators via any midpoint
            let p = &net.paths[0];
            let clovers = [p.mult_a, p.mult_b].iter().filter(|&&m| m == 2).count();
            let expect = match clovers {
                0 => NetworkClass::SingleDiamond,
                1 => NetworkClass::DoubleDiamond,
                _ => NetworkClass::QuadrupleDiamond,
            };
            if class != expect {
                return Err(Error::Falsified(format!(
                    "disjoint generators with {clovers} clovers formed {class:?}"
                )));
            }
        }
        Some(p) => {
            let rt = graph.root_type();
            let ok = match (rt, p) {
                (RootType::A | RootType::B | RootType::D, _) => {
                    class == NetworkClass::SingleDiamond
                }
                (RootType::C, ProjectionClass::Square) => class == NetworkClass::SingleDiamond,
                (RootType::C, ProjectionClass::Tent) => class == NetworkClass::SplitDiamond,
                (RootType::C, ProjectionClass::Hanger) => {
                    class == NetworkClass::DoubleDiamond || class == NetworkClass::HeavyDiamond
                }
                (RootType::C, ProjectionClass::Fork) => false,
            };
            if !ok {
                return Err(Error::Falsified(format!(
                    "adjacent generators with projection {p:?} formed {class:?} in type {rt}"
                )));
            }
        }
    }
    Ok((class, projection))
}

/// Side-aware path profile: the list of (multiplicity at `a`, at `b`)
/// pairs, canonicalized over the choice of which endpoint is `a`.
fn profile(net: &Network) -> Vec<(u8, u8)> {
    let fwd = {
        let mut v: Vec<(u8, u8)> = net.paths.iter().map(|p| (p.mult_a, p.mult_b)).collect();
        v.sort_unstable();
        v
    };
    let rev = {
        let mut v: Vec<(u8, u8)> = net.paths.iter().map(|p| (p.mult_b, p.mult_a)).collect();
        v.sort_unstable();
        v
    };
    fwd.min(rev)
}

fn signature_class(net: &Network) -> Option<NetworkClass> {
    match profile(net).as_slice() {
        [(1, 1), (1, 1)] => Some(NetworkClass::SingleDiamond),
        [(1, 2), (2, 1)] => Some(NetworkClass::DoubleDiamond),
        [(2, 2), (2, 2)] => Some(NetworkClass::QuadrupleDiamond),
        [(1, 1), (1, 1), (2, 2)] => Some(NetworkClass::SplitDiamond),
        [(1, 2), (1, 2)] => Some(NetworkClass::HeavyDiamond),
        _ => None,
    }
}

fn diff_kinds(
    graph: &crate::signed::CompleteSignedGraph,
    diff: SubTournament,
) -> Vec<GameKind> {
    diff.game_ids().map(|id| graph.games()[id].kind).collect()
}

fn projection_class(rt: RootType, kinds: &[GameKind]) -> Result<ProjectionClass> {
    if kinds.iter().any(|k| matches!(k, GameKind::Loop { .. })) {
        return Ok(ProjectionClass::Hanger);
    }
    if kinds.iter().any(|k| matches!(k, GameKind::Half { .. })) {
        return Ok(ProjectionClass::Fork);
    }
    let mut players: Vec<u8> = Vec::new();
    for k in kinds {
        let (a, b) = k.players();
        players.push(a);
        players.extend(b);
    }
    players.sort_unstable();
    players.dedup();
    match players.len() {
        3 => Ok(ProjectionClass::Tent),
        4 => Ok(ProjectionClass::Square),
        other => Err(Error::Falsified(format!(
            "adjacent difference spans {other} players in type {rt}"
        ))),
    }
}

/// Whether an extended network is one of the stable diamonds or a crystal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ExtendedClass {
    Stable(NetworkClass),
    Crystal,
}

/// Antipodal closure of a network: the union of the networks of every
/// distance-two pair inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedNetwork {
    pub vertices: Vec<u32>,
    pub edge_ids: Vec<u32>,
    pub class: ExtendedClass,
}

/// Antipodal closure of a network, iterated to a fixpoint so that every
/// antipodal pair of the result regenerates the same extended network.
/// Stable classes must reproduce themselves in the very first round;
/// split and heavy diamonds grow into crystals.
pub fn extended_network(ig: &InterchangeGraph, net: &Network) -> Result<ExtendedNetwork> {
    let (class, _) = classify_network(ig, net)?;
    let mut vertices: Vec<u32> = net.vertices();
    let mut edge_ids: HashSet<u32> = net.edge_ids().into_iter().collect();
    let stable = matches!(
        class,
        NetworkClass::SingleDiamond | NetworkClass::DoubleDiamond | NetworkClass::QuadrupleDiamond
    );
    let mut round = 0;
    loop {
        let mut next_vertices: HashSet<u32> = vertices.iter().copied().collect();
        let mut grew = false;
        for (i, &x) in vertices.iter().enumerate() {
            for &y in &vertices[i + 1..] {
                if ig.edge_between(x, y).is_some() || ig.common_neighbors(x, y).is_empty() {
                    continue;
                }
                let sub = interchange_network(ig, x, y)?;
                for v in sub.vertices() {
                    grew |= next_vertices.insert(v);
                }
                for e in sub.edge_ids() {
                    grew |= edge_ids.insert(e);
                }
            }
        }
        if stable && grew {
            return Err(Error::Falsified(format!(
                "{class:?} network is not antipodally stable"
            )));
        }
        if !grew {
            break;
        }
        vertices = next_vertices.into_iter().collect();
        vertices.sort_unstable();
        round += 1;
        if round > 16 {
            return Err(Error::Falsified(
                "antipodal closure failed to stabilize".into(),
            ));
        }
    }
    let mut edge_ids: Vec<u32> = edge_ids.into_iter().collect();
    edge_ids.sort_unstable();
    Ok(ExtendedNetwork {
        vertices,
        edge_ids,
        class: if stable {
            ExtendedClass::Stable(class)
        } else {
            ExtendedClass::Crystal
        },
    })
}

/// Crystal census of an interchange graph.
#[derive(Clone, Debug, Default)]
pub struct CrystalStatistics {
    pub crystals: Vec<ExtendedNetwork>,
    /// Crystal index containing each single edge (at most one).
    pub single_edge_crystal: HashMap<u32, u32>,
    /// Crystal indices containing each double edge.
    pub double_edge_crystals: HashMap<u32, Vec<u32>>,
    /// Maximal crystal degree: the largest number of crystals through one
    /// double edge; zero when there are no crystals.
    pub gamma: u64,
}

impl CrystalStatistics {
    pub fn crystals_of_edge(&self, edge: u32) -> &[u32] {
        self.double_edge_crystals
            .get(&edge)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn crystal_of_single_edge(&self, edge: u32) -> Option<u32> {
        self.single_edge_crystal.get(&edge).copied()
    }

    pub fn to_csv(&self, ig: &InterchangeGraph) -> String {
        let mut out = String::from("edge_u,edge_v,mult,crystal_count\n");
        for (eid, e) in ig.edges.iter().enumerate() {
            let count = if e.mult == 2 {
                self.crystals_of_edge(eid as u32).len()
            } else {
                usize::from(self.crystal_of_single_edge(eid as u32).is_some())
            };
            out.push_str(&format!("{},{},{},{}\n", e.u, e.v, e.mult, count));
        }
        out
    }
}

/// Census counts per network class over all distance-two pairs.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct NetworkCensus {
    pub single: u64,
    pub double: u64,
    pub quadruple: u64,
    pub split: u64,
    pub heavy: u64,
}

impl NetworkCensus {
    pub fn count(&mut self, class: NetworkClass) {
        match class {
            NetworkClass::SingleDiamond => self.single += 1,
            NetworkClass::DoubleDiamond => self.double += 1,
            NetworkClass::QuadrupleDiamond => self.quadruple += 1,
            NetworkClass::SplitDiamond => self.split += 1,
            NetworkClass::HeavyDiamond => self.heavy += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.single + self.double + self.quadruple + self.split + self.heavy
    }
}

/// All unordered distance-two pairs of the graph.
pub fn distance_two_pairs(ig: &InterchangeGraph) -> Vec<(u32, u32)> {
    let n = ig.vertex_count() as u32;
    (0..n)
        .into_par_iter()
        .map(|x| {
            let direct: HashSet<u32> = ig.neighbors(x).collect();
            let mut seen: HashSet<u32> = HashSet::new();
            let mut out = Vec::new();
            for u in ig.neighbors(x) {
                for w in ig.neighbors(u) {
                    if w > x && !direct.contains(&w) && seen.insert(w) {
                        out.push((x, w));
                    }
                }
            }
            out
        })
        .flatten()
        .collect()
}

/// Full extended-network and crystal computation for one graph, with the
/// structural assertions built in:
/// - stable diamonds reproduce themselves under antipodal closure,
/// - two distinct extended networks share at most one edge record,
/// - two crystals never share a single edge,
/// - every double edge lies in at most `min(d, 2n)` crystals (and in at
///   most `2(n-2)` in the cases reachable here),
/// - every single edge lies in at most one crystal.
pub fn extended_networks_and_crystals(
    ig: &InterchangeGraph,
) -> Result<(Vec<ExtendedNetwork>, CrystalStatistics)> {
    let pairs = distance_two_pairs(ig);
    let extended: Vec<ExtendedNetwork> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let net = interchange_network(ig, a, b)?;
            extended_network(ig, &net)
        })
        .collect::<Result<Vec<_>>>()?;
    // dedupe by vertex + edge sets
    let mut distinct: Vec<ExtendedNetwork> = Vec::new();
    let mut index: HashMap<(Vec<u32>, Vec<u32>), usize> = HashMap::new();
    for en in extended {
        let key = (en.vertices.clone(), en.edge_ids.clone());
        match index.entry(key) {
            std::collections::hash_map::Entry::Occupied(o) => {
                let prev = &distinct[*o.get()];
                if prev.class != en.class {
                    return Err(Error::Falsified(
                        "one extended network classified both stable and crystal".into(),
                    ));
                }
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(distinct.len());
                distinct.push(en);
            }
        }
    }
    // pairwise shared edges via per-edge inverted lists
    let mut by_edge: HashMap<u32, Vec<u32>> = HashMap::new();
    for (i, en) in distinct.iter().enumerate() {
        for &e in &en.edge_ids {
            by_edge.entry(e).or_default().push(i as u32);
        }
    }
    let mut shared: HashMap<(u32, u32), u32> = HashMap::new();
    for list in by_edge.values() {
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                *shared.entry((a, b)).or_insert(0) += 1;
            }
        }
    }
    if let Some(((a, b), k)) = shared.iter().find(|&(_, &k)| k > 1) {
        return Err(Error::Falsified(format!(
            "extended networks {a} and {b} share {k} edges"
        )));
    }
    // collect crystals and their edge incidences
    let mut stats = CrystalStatistics::default();
    for en in &distinct {
        if en.class == ExtendedClass::Crystal {
            stats.crystals.push(en.clone());
        }
    }
    for (ci, crystal) in stats.crystals.iter().enumerate() {
        for &e in &crystal.edge_ids {
            if ig.edges[e as usize].mult == 2 {
                stats.double_edge_crystals.entry(e).or_default().push(ci as u32);
            } else if let Some(prev) = stats.single_edge_crystal.insert(e, ci as u32) {
                return Err(Error::Falsified(format!(
                    "single edge {e} lies in crystals {prev} and {ci}"
                )));
            }
        }
    }
    stats.gamma = stats
        .double_edge_crystals
        .values()
        .map(|v| v.len() as u64)
        .max()
        .unwrap_or(0);
    let n = ig.graph.n() as u64;
    let bound = ig.degree.min(2 * n);
    let sharp = if n >= 2 { 2 * (n - 2) } else { 0 };
    for (e, list) in &stats.double_edge_crystals {
        let k = list.len() as u64;
        if k > bound {
            return Err(Error::Falsified(format!(
                "double edge {e} lies in {k} crystals, above min(d, 2n) = {bound}"
            )));
        }
        if k > sharp {
            return Err(Error::Falsified(format!(
                "double edge {e} lies in {k} crystals, above 2(n-2) = {sharp}"
            )));
        }
    }
    Ok((distinct, stats))
}

/// Crystal statistics only (the common case for couplings).
pub fn crystal_statistics(ig: &InterchangeGraph) -> Result<CrystalStatistics> {
    Ok(extended_networks_and_crystals(ig)?.1)
}
