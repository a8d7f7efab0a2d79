//! Fibers, score sets, and interchange multigraphs.
//!
//! The fiber of a score vector is the set of tournaments attaining it.
//! The interchange graph puts one vertex per fiber element and one edge
//! per generator reversal; clover reversals are double edges, which makes
//! the graph degree-regular with degree `(|2s_Phi|^2 - |2s|^2) / 8`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::copies_in;
use crate::signed::{
    CompleteSignedGraph, RootType, ScoreVector, Tournament, Vect, MAX_PLAYERS,
};

/// Enumeration guard: exhaustive sweeps refuse player counts beyond the
/// per-type default unless an explicit cap override raises it.
pub fn check_cap(root_type: RootType, n: usize, cap: Option<usize>) -> Result<()> {
    let limit = cap.unwrap_or_else(|| root_type.default_cap());
    if n > limit {
        return Err(Error::CapExceeded {
            root_type: root_type.as_str(),
            requested: n,
            cap: limit,
        });
    }
    Ok(())
}

/// All tournaments with a given score, in bit-vector order.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub graph: Arc<CompleteSignedGraph>,
    pub score: ScoreVector,
    pub tournaments: Vec<Tournament>,
}

impl Fiber {
    pub fn len(&self) -> usize {
        self.tournaments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tournaments.is_empty()
    }

    pub fn index_of(&self, t: Tournament) -> Option<usize> {
        self.tournaments.binary_search(&t).ok()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "type": self.graph.root_type().as_str(),
            "n": self.graph.n(),
            "score": self.score.halves(),
            "count": self.len(),
            "tournaments": self.tournaments.iter()
                .map(|t| t.bit_string(self.graph.game_count()))
                .collect::<Vec<_>>(),
        })
    }
}

/// Exhaustively enumerate the fiber of a score by depth-first assignment
/// of orientation bits with per-coordinate feasibility pruning: a partial
/// assignment survives only if the remaining games can still bridge the
/// gap to the target in value and parity. An empty result means the score
/// is not attained by any tournament.
pub fn enumerate_fiber(
    graph: &Arc<CompleteSignedGraph>,
    score: &ScoreVector,
    cap: Option<usize>,
) -> Result<Fiber> {
    check_cap(graph.root_type(), graph.n(), cap)?;
    if score.len() != graph.n() {
        return Err(Error::InvalidInput(format!(
            "score has {} entries, expected {}",
            score.len(),
            graph.n()
        )));
    }
    let m = graph.game_count();
    let vects = graph.vects();
    // abs_suffix[k][i] = sum over games k.. of |v[i]|; parity_suffix the same mod 2
    let mut abs_suffix = vec![[0i32; MAX_PLAYERS]; m + 1];
    for k in (0..m).rev() {
        let mut row = abs_suffix[k + 1];
        for i in 0..MAX_PLAYERS {
            row[i] += vects[k][i].abs();
        }
        abs_suffix[k] = row;
    }
    let target = score.to_vect();
    let mut out = Vec::new();
    let mut partial = [0i32; MAX_PLAYERS];
    dfs_fiber(graph, &abs_suffix, &target, 0, 0, &mut partial, &mut out);
    out.sort_unstable();
    Ok(Fiber {
        graph: Arc::clone(graph),
        score: score.clone(),
        tournaments: out,
    })
}

fn dfs_fiber(
    graph: &CompleteSignedGraph,
    abs_suffix: &[Vect],
    target: &Vect,
    k: usize,
    bits: u64,
    partial: &mut Vect,
    out: &mut Vec<Tournament>,
) {
    let n = graph.n();
    for i in 0..n {
        let gap = target[i] - partial[i];
        let reach = abs_suffix[k][i];
        if gap.abs() > reach || (gap - reach).rem_euclid(2) != 0 {
            return;
        }
    }
    if k == graph.game_count() {
        out.push(Tournament::new(bits));
        return;
    }
    let v = graph.vects()[k];
    for won in [false, true] {
        for i in 0..n {
            partial[i] += if won { v[i] } else { -v[i] };
        }
        dfs_fiber(
            graph,
            abs_suffix,
            target,
            k + 1,
            bits | (won as u64) << k,
            partial,
            out,
        );
        for i in 0..n {
            partial[i] -= if won { v[i] } else { -v[i] };
        }
    }
}

/// The set of all attainable scores, by full enumeration of the 2^|E|
/// orientations (a stand-in for the closed-form characterization).
pub fn enumerate_score_set(
    graph: &Arc<CompleteSignedGraph>,
    cap: Option<usize>,
) -> Result<Vec<ScoreVector>> {
    check_cap(graph.root_type(), graph.n(), cap)?;
    let m = graph.game_count();
    let shards: u64 = if m >= 16 { 256 } else { 1 };
    let per = (1u64 << m) / shards;
    let mut sets: Vec<HashSet<ScoreVector>> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut set = HashSet::new();
            for bits in shard * per..(shard + 1) * per {
                set.insert(graph.score(Tournament::new(bits)));
            }
            set
        })
        .collect();
    let mut all = sets.pop().unwrap_or_default();
    for s in sets {
        all.extend(s);
    }
    let mut scores: Vec<ScoreVector> = all.into_iter().collect();
    scores.sort_unstable();
    Ok(scores)
}

/// One interchange-multigraph edge: a generator reversal between fiber
/// members `u < v`, with multiplicity 2 when the generator is a clover.
#[derive(Copy, Clone, Debug, Serialize)]
pub struct IEdge {
    pub u: u32,
    pub v: u32,
    pub mult: u8,
    #[serde(skip)]
    pub copy_mask: u64,
}

/// The interchange multigraph of a fiber.
pub struct InterchangeGraph {
    pub graph: Arc<CompleteSignedGraph>,
    pub score: ScoreVector,
    pub verts: Vec<Tournament>,
    pub edges: Vec<IEdge>,
    /// Per-vertex incident edge ids, sorted by neighbor index.
    pub adj: Vec<Vec<u32>>,
    /// Common regular degree, counted with multiplicity.
    pub degree: u64,
}

impl InterchangeGraph {
    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn other_end(&self, edge: u32, from: u32) -> u32 {
        let e = &self.edges[edge as usize];
        if e.u == from {
            e.v
        } else {
            debug_assert_eq!(e.v, from);
            e.u
        }
    }

    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.adj[v as usize].iter().map(move |&e| self.other_end(e, v))
    }

    /// The edge joining `u` and `v`, if adjacent.
    pub fn edge_between(&self, u: u32, v: u32) -> Option<u32> {
        self.adj[u as usize]
            .iter()
            .copied()
            .find(|&e| self.other_end(e, u) == v)
    }

    /// Incident edge slots: double edges contribute two slots, so the slot
    /// count equals the regular degree.
    pub fn slots(&self, v: u32) -> Vec<(u32, u8)> {
        let mut out = Vec::with_capacity(self.degree as usize);
        for &e in &self.adj[v as usize] {
            for k in 0..self.edges[e as usize].mult {
                out.push((e, k));
            }
        }
        out
    }

    /// Sorted common neighbors of two vertices.
    pub fn common_neighbors(&self, a: u32, b: u32) -> Vec<u32> {
        let na: Vec<u32> = self.neighbors(a).collect();
        let nb: HashSet<u32> = self.neighbors(b).collect();
        let mut out: Vec<u32> = na.into_iter().filter(|x| nb.contains(x)).collect();
        out.sort_unstable();
        out
    }
}

/// Build the interchange multigraph of a nonempty fiber. Every vertex is
/// checked against the regular-degree formula; a mismatch is reported as
/// a falsification rather than silently accepted.
pub fn build_interchange_graph(fiber: &Fiber) -> Result<InterchangeGraph> {
    if fiber.is_empty() {
        return Err(Error::InfeasibleScore);
    }
    let graph = &fiber.graph;
    let verts = fiber.tournaments.clone();
    let expected = graph.degree_for(&fiber.score)?;
    let mut edges: Vec<IEdge> = Vec::new();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); verts.len()];
    for (ui, &t) in verts.iter().enumerate() {
        for copy in copies_in(graph, t) {
            let t2 = Tournament::new(t.bits ^ copy.sub.mask);
            if t2.bits < t.bits {
                continue; // counted from the smaller endpoint
            }
            let vi = fiber.index_of(t2).ok_or_else(|| {
                Error::Falsified("generator reversal left the fiber".into())
            })?;
            let id = edges.len() as u32;
            edges.push(IEdge {
                u: ui as u32,
                v: vi as u32,
                mult: copy.multiplicity,
                copy_mask: copy.sub.mask,
            });
            adj[ui].push(id);
            adj[vi as usize].push(id);
        }
    }
    let ig = InterchangeGraph {
        graph: Arc::clone(graph),
        score: fiber.score.clone(),
        verts,
        edges,
        adj,
        degree: expected,
    };
    for v in 0..ig.verts.len() {
        let d: u64 = ig.adj[v]
            .iter()
            .map(|&e| ig.edges[e as usize].mult as u64)
            .sum();
        if d != expected {
            return Err(Error::Falsified(format!(
                "vertex {v} has weighted degree {d}, formula gives {expected}"
            )));
        }
    }
    let mut ig = ig;
    for v in 0..ig.verts.len() {
        let mut order: Vec<u32> = ig.adj[v].clone();
        order.sort_unstable_by_key(|&e| ig.other_end(e, v as u32));
        ig.adj[v] = order;
    }
    Ok(ig)
}

/// Connectivity, diameter, and the regular degree of an interchange graph.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GraphMetrics {
    pub connected: bool,
    pub diameter: usize,
    pub regular_degree: u64,
}

/// All-pairs BFS. Multiplicities do not affect hop distance.
pub fn graph_metrics(ig: &InterchangeGraph) -> GraphMetrics {
    let n = ig.vertex_count();
    let results: Vec<(bool, usize)> = (0..n)
        .into_par_iter()
        .map(|start| {
            let (dist, reached) = bfs(ig, start as u32);
            let ecc = dist.iter().filter(|&&d| d != usize::MAX).max().copied().unwrap_or(0);
            (reached == n, ecc)
        })
        .collect();
    GraphMetrics {
        connected: results.iter().all(|&(c, _)| c),
        diameter: results.iter().map(|&(_, e)| e).max().unwrap_or(0),
        regular_degree: ig.degree,
    }
}

pub(crate) fn bfs(ig: &InterchangeGraph, start: u32) -> (Vec<usize>, usize) {
    let n = ig.vertex_count();
    let mut dist = vec![usize::MAX; n];
    dist[start as usize] = 0;
    let mut queue = std::collections::VecDeque::from([start]);
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        for w in ig.neighbors(u) {
            if dist[w as usize] == usize::MAX {
                dist[w as usize] = du + 1;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    (dist, reached)
}

/// Hop distances from one vertex.
pub fn bfs_distances(ig: &InterchangeGraph, start: u32) -> Vec<usize> {
    bfs(ig, start).0
}

impl InterchangeGraph {
    /// DOT export; a double edge is drawn as two parallel edges.
    pub fn to_dot(&self) -> String {
        let m = self.graph.game_count();
        let mut out = String::from("graph interchange {\n");
        for (i, t) in self.verts.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{}\"];", t.bit_string(m));
        }
        for e in &self.edges {
            for _ in 0..e.mult {
                let _ = writeln!(out, "  v{} -- v{};", e.u, e.v);
            }
        }
        out.push_str("}\n");
        out
    }

    /// JSON export: `{vertices: [bitstrings], edges: [[u, v, mult]]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let m = self.graph.game_count();
        serde_json::json!({
            "type": self.graph.root_type().as_str(),
            "n": self.graph.n(),
            "score": self.score.halves(),
            "vertices": self.verts.iter().map(|t| t.bit_string(m)).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| (e.u, e.v, e.mult)).collect::<Vec<_>>(),
        })
    }
}

/// Convenience: enumerate the fiber of a score and build its graph.
pub fn interchange_graph_of(
    graph: &Arc<CompleteSignedGraph>,
    score: &ScoreVector,
    cap: Option<usize>,
) -> Result<InterchangeGraph> {
    let fiber = enumerate_fiber(graph, score, cap)?;
    build_interchange_graph(&fiber)
}
