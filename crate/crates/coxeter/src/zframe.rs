//! Z-frame encoding of tournaments, neutral-trail decomposition, and the
//! constructive reversing procedure.
//!
//! The Z-frame of an oriented game set is a directed bipartite multigraph
//! between players and matches (one match per game). Each half-point
//! contribution becomes one charged edge at its player: +1 when directed
//! away from the player, -1 when directed toward it, so a player's net
//! charge equals its half-unit score and a game set is neutral exactly
//! when the frame is.
//!
//! Neutral frames decompose into edge-disjoint neutral trails (charges
//! alternating at every player). Irreducible neutral game sets are single
//! trails with player degrees in {0, 2, 4}, and the reversing procedure
//! below flips any neutral set inside a tournament on the full complete
//! signed graph using at most `l - 2` generator reversals per irreducible
//! component of `l` games.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::generators::{
    apply_generator_reversal, potential_copies, relabel_game, GeneratorCopy,
};
use crate::signed::{
    CompleteSignedGraph, GameId, GameKind, RootType, SubTournament, Tournament, Vect, MAX_PLAYERS,
};

/// One charged edge of a Z-frame: `charge = +1` means directed away from
/// the player (a won half point), `-1` toward it.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ZEdge {
    pub player: u8,
    pub game: GameId,
    pub charge: i8,
}

/// Z-frame of an oriented game set.
#[derive(Clone, Debug)]
pub struct ZFrame {
    n: usize,
    sub: SubTournament,
    edges: Vec<ZEdge>,
}

/// Build the Z-frame: competitive games give opposing charges at the two
/// players, collaborative games aligned charges, a half edge one charged
/// edge, a loop two same-charge edges at its player.
pub fn build_zframe(graph: &CompleteSignedGraph, sub: SubTournament) -> ZFrame {
    let mut edges = Vec::with_capacity(2 * sub.len());
    for id in sub.game_ids() {
        let won = sub.wins >> id & 1 == 1;
        let sign: i8 = if won { 1 } else { -1 };
        match graph.games()[id].kind {
            GameKind::Negative { i, j } => {
                edges.push(ZEdge { player: i, game: id, charge: sign });
                edges.push(ZEdge { player: j, game: id, charge: -sign });
            }
            GameKind::Positive { i, j } => {
                edges.push(ZEdge { player: i, game: id, charge: sign });
                edges.push(ZEdge { player: j, game: id, charge: sign });
            }
            GameKind::Half { i } => {
                edges.push(ZEdge { player: i, game: id, charge: sign });
            }
            GameKind::Loop { i } => {
                edges.push(ZEdge { player: i, game: id, charge: sign });
                edges.push(ZEdge { player: i, game: id, charge: sign });
            }
        }
    }
    ZFrame {
        n: graph.n(),
        sub,
        edges,
    }
}

impl ZFrame {
    pub fn sub(&self) -> SubTournament {
        self.sub
    }

    pub fn edges(&self) -> &[ZEdge] {
        &self.edges
    }

    /// Net charge per player; equals the half-unit score of the game set.
    pub fn net_charges(&self) -> Vect {
        let mut v = [0i32; MAX_PLAYERS];
        for e in &self.edges {
            v[e.player as usize - 1] += e.charge as i32;
        }
        v
    }

    /// Edge count per player.
    pub fn degrees(&self) -> [u32; MAX_PLAYERS] {
        let mut d = [0u32; MAX_PLAYERS];
        for e in &self.edges {
            d[e.player as usize - 1] += 1;
        }
        d
    }

    pub fn is_neutral(&self) -> bool {
        self.net_charges() == [0i32; MAX_PLAYERS]
    }

    fn require_neutral(&self) -> Result<()> {
        let charges = self.net_charges();
        for (p, &c) in charges.iter().enumerate().take(self.n) {
            if c != 0 {
                return Err(Error::NotNeutral {
                    player: p + 1,
                    charge: c as i64,
                });
            }
        }
        Ok(())
    }

    /// DOT digraph: players as filled nodes, matches as hollow nodes.
    pub fn to_dot(&self, graph: &CompleteSignedGraph) -> String {
        let mut out = String::from("digraph zframe {\n");
        let mut players: Vec<u8> = self.edges.iter().map(|e| e.player).collect();
        players.sort_unstable();
        players.dedup();
        for p in &players {
            let _ = writeln!(
                out,
                "  p{p} [label=\"{p}\", shape=circle, style=filled, fillcolor=black, fontcolor=white];"
            );
        }
        let mut games: Vec<GameId> = self.sub.game_ids().collect();
        games.sort_unstable();
        for id in &games {
            let label = match graph.games()[*id].kind {
                GameKind::Negative { i, j } => format!("m-[{i},{j}]"),
                GameKind::Positive { i, j } => format!("m+[{i},{j}]"),
                GameKind::Half { i } => format!("mh[{i}]"),
                GameKind::Loop { i } => format!("ml[{i}]"),
            };
            let _ = writeln!(out, "  m{id} [label=\"{label}\", shape=circle];");
        }
        for e in &self.edges {
            if e.charge > 0 {
                let _ = writeln!(out, "  p{} -> m{};", e.player, e.game);
            } else {
                let _ = writeln!(out, "  m{} -> p{};", e.game, e.player);
            }
        }
        out.push_str("}\n");
        out
    }
}

/// A trail through a Z-frame: an ordered list of edge indices in which
/// consecutive edges alternately share a match and a player, no edge
/// repeats, and the charges at every interior player alternate.
#[derive(Clone, Debug)]
pub struct Trail {
    pub edges: Vec<usize>,
    pub closed: bool,
}

impl Trail {
    /// Number of matches (games) on the trail.
    pub fn len_matches(&self, z: &ZFrame) -> usize {
        self.game_mask(z).count_ones() as usize
    }

    pub fn game_mask(&self, z: &ZFrame) -> u64 {
        let mut m = 0u64;
        for &e in &self.edges {
            m |= 1 << z.edges[e].game;
        }
        m
    }

    /// Final matches of an open trail (its first and last games).
    pub fn final_matches(&self, z: &ZFrame) -> Option<(GameId, GameId)> {
        if self.closed {
            None
        } else {
            Some((
                z.edges[*self.edges.first().unwrap()].game,
                z.edges[*self.edges.last().unwrap()].game,
            ))
        }
    }
}

/// An edge-disjoint partition of a neutral Z-frame into neutral trails,
/// no two open trails sharing a final match.
#[derive(Clone, Debug)]
pub struct TrailDecomposition {
    pub trails: Vec<Trail>,
}

/// Decompose a neutral Z-frame into neutral trails. Players are processed
/// in index order and opposite-charge edges paired in edge order, so the
/// result is deterministic. Rejects non-neutral input naming the player.
pub fn decompose_neutral_trails(z: &ZFrame) -> Result<TrailDecomposition> {
    z.require_neutral()?;
    let ne = z.edges.len();
    // partner across the match: the other edge of the same game
    let mut match_partner: Vec<Option<usize>> = vec![None; ne];
    let mut last_of_game: HashMap<GameId, usize> = HashMap::new();
    for (idx, e) in z.edges.iter().enumerate() {
        if let Some(&prev) = last_of_game.get(&e.game) {
            match_partner[prev] = Some(idx);
            match_partner[idx] = Some(prev);
        } else {
            last_of_game.insert(e.game, idx);
        }
    }
    // partner at the player: pair k-th positive with k-th negative edge
    let mut player_partner: Vec<usize> = vec![usize::MAX; ne];
    for p in 1..=z.n as u8 {
        let pos: Vec<usize> = (0..ne)
            .filter(|&i| z.edges[i].player == p && z.edges[i].charge > 0)
            .collect();
        let neg: Vec<usize> = (0..ne)
            .filter(|&i| z.edges[i].player == p && z.edges[i].charge < 0)
            .collect();
        debug_assert_eq!(pos.len(), neg.len());
        for (a, b) in pos.iter().zip(neg.iter()) {
            player_partner[*a] = *b;
            player_partner[*b] = *a;
        }
    }

    let mut visited = vec![false; ne];
    let mut trails = Vec::new();
    let walk = |start: usize, visited: &mut Vec<bool>| -> (Vec<usize>, bool) {
        let mut path = vec![start];
        visited[start] = true;
        let mut cur = start;
        let mut cross_player = true;
        loop {
            let next = if cross_player {
                Some(player_partner[cur])
            } else {
                match_partner[cur]
            };
            match next {
                None => return (path, false),
                Some(nxt) if nxt == start => return (path, true),
                Some(nxt) => {
                    debug_assert!(!visited[nxt]);
                    visited[nxt] = true;
                    path.push(nxt);
                    cur = nxt;
                    cross_player = !cross_player;
                }
            }
        }
    };
    // open trails first: seeds are edges of degree-1 matches (half edges)
    for start in 0..ne {
        if !visited[start] && match_partner[start].is_none() {
            let (path, closed) = walk(start, &mut visited);
            debug_assert!(!closed);
            trails.push(Trail { edges: path, closed: false });
        }
    }
    for start in 0..ne {
        if !visited[start] {
            let (path, closed) = walk(start, &mut visited);
            debug_assert!(closed);
            trails.push(Trail { edges: path, closed: true });
        }
    }
    Ok(TrailDecomposition { trails })
}

/// Some proper nonempty neutral game-subset, if one exists; found by
/// meet-in-the-middle over the subset sums of oriented contributions.
pub fn find_proper_neutral_subset(
    graph: &CompleteSignedGraph,
    sub: SubTournament,
) -> Option<SubTournament> {
    let ids: Vec<GameId> = sub.game_ids().collect();
    let l = ids.len();
    if l < 2 {
        return None;
    }
    let contrib: Vec<Vect> = ids
        .iter()
        .map(|&id| {
            let v = graph.games()[id].kind.vect();
            if sub.wins >> id & 1 == 1 {
                v
            } else {
                let mut w = v;
                for x in w.iter_mut() {
                    *x = -*x;
                }
                w
            }
        })
        .collect();
    let lo = l / 2;
    let sum_of = |bits: u32, offset: usize| -> Vect {
        let mut acc = [0i32; MAX_PLAYERS];
        let mut b = bits;
        while b != 0 {
            let k = b.trailing_zeros() as usize;
            b &= b - 1;
            for (i, x) in acc.iter_mut().enumerate() {
                *x += contrib[offset + k][i];
            }
        }
        acc
    };
    let mut table: HashMap<Vect, Vec<u32>> = HashMap::new();
    for s in 0..1u32 << lo {
        table.entry(sum_of(s, 0)).or_default().push(s);
    }
    let full_lo = (1u32 << lo) - 1;
    let hi = l - lo;
    let full_hi = (1u32 << hi) - 1;
    for s2 in 0..1u32 << hi {
        let mut target = sum_of(s2, lo);
        for x in target.iter_mut() {
            *x = -*x;
        }
        if let Some(list) = table.get(&target) {
            for &s1 in list {
                if s1 == 0 && s2 == 0 {
                    continue;
                }
                if s1 == full_lo && s2 == full_hi {
                    continue;
                }
                let mut mask = 0u64;
                for (k, &id) in ids.iter().enumerate() {
                    let hit = if k < lo {
                        s1 >> k & 1 == 1
                    } else {
                        s2 >> (k - lo) & 1 == 1
                    };
                    if hit {
                        mask |= 1 << id;
                    }
                }
                return Some(SubTournament::new(mask, sub.wins & mask));
            }
        }
    }
    None
}

/// True iff the neutral frame has no proper nonempty neutral game-subset.
/// Degree > 4 at any player is an immediate rejection (irreducible neutral
/// frames are single trails with degrees in {0, 2, 4}); otherwise the
/// subset search decides exactly.
pub fn is_irreducible(graph: &CompleteSignedGraph, z: &ZFrame) -> Result<bool> {
    z.require_neutral()?;
    if z.degrees().iter().any(|&d| d > 4) {
        return Ok(false);
    }
    Ok(find_proper_neutral_subset(graph, z.sub()).is_none())
}

/// Split a neutral game set into irreducible neutral components.
pub fn decompose_into_irreducibles(
    graph: &CompleteSignedGraph,
    sub: SubTournament,
) -> Vec<SubTournament> {
    let mut out = Vec::new();
    let mut stack = vec![sub];
    while let Some(cur) = stack.pop() {
        if cur.is_empty() {
            continue;
        }
        match find_proper_neutral_subset(graph, cur) {
            None => out.push(cur),
            Some(j) => {
                let rest = SubTournament::new(cur.mask ^ j.mask, cur.wins & !j.mask);
                stack.push(rest);
                stack.push(j);
            }
        }
    }
    out.sort_unstable_by_key(|s| s.mask);
    out
}

/// Reverse a neutral sub-tournament `I` (given by its game mask) inside a
/// tournament on the full complete signed graph, as an ordered list of
/// generator reversals. Applying the list flips exactly the games of `I`
/// and restores everything else; the list has at most `l - 2` entries per
/// irreducible component with `l` games.
pub fn reverse_neutral_subtournament(
    graph: &CompleteSignedGraph,
    t: Tournament,
    mask: u64,
) -> Result<Vec<GeneratorCopy>> {
    if mask & !graph.full_mask() != 0 {
        return Err(Error::UnknownGame(63 - mask.leading_zeros() as usize));
    }
    let sub = SubTournament::restrict(t, mask);
    build_zframe(graph, sub).require_neutral()?;
    if sub.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "neutral set has {} games; at least 3 required",
            sub.len()
        )));
    }
    let seq = reverse_neutral(graph, t, mask)?;
    let mut cur = t;
    for copy in &seq {
        cur = apply_generator_reversal(graph, cur, copy)?;
    }
    if cur.bits != t.bits ^ mask {
        return Err(Error::Falsified(
            "reversal sequence does not flip exactly the requested games".into(),
        ));
    }
    Ok(seq)
}

fn reverse_neutral(
    graph: &CompleteSignedGraph,
    t: Tournament,
    mask: u64,
) -> Result<Vec<GeneratorCopy>> {
    let comps = decompose_into_irreducibles(graph, SubTournament::restrict(t, mask));
    let mut out = Vec::new();
    let mut cur = t;
    for comp in comps {
        let seq = reverse_irreducible(graph, cur, comp.mask)?;
        for copy in &seq {
            cur = apply_generator_reversal(graph, cur, copy)?;
        }
        out.extend(seq);
    }
    Ok(out)
}

fn copy_for_sub<'a>(
    graph: &'a CompleteSignedGraph,
    sub: SubTournament,
) -> Option<&'a GeneratorCopy> {
    let copies = potential_copies(graph);
    copies
        .binary_search_by_key(&(sub.mask, sub.wins), |c| (c.sub.mask, c.sub.wins))
        .ok()
        .map(|i| &copies[i])
}

fn reverse_irreducible(
    graph: &CompleteSignedGraph,
    t: Tournament,
    mask: u64,
) -> Result<Vec<GeneratorCopy>> {
    let sub = SubTournament::restrict(t, mask);
    if sub.len() == 3 {
        let copy = copy_for_sub(graph, sub).ok_or_else(|| {
            Error::Falsified("three-game neutral set is not a generator copy".into())
        })?;
        return Ok(vec![copy.clone()]);
    }
    let z = build_zframe(graph, sub);
    let decomp = decompose_neutral_trails(&z)?;
    if decomp.trails.len() != 1 {
        return Err(Error::Falsified(
            "irreducible neutral set decomposed into several trails".into(),
        ));
    }
    let trail = decomp.trails[0].clone();
    if trail.closed {
        reverse_closed_trail(graph, t, &z, &trail)
    } else {
        reverse_open_trail(graph, t, &z, &trail)
    }
}

/// Player crossings of a trail: positions where consecutive edges (cyclic
/// for closed trails) belong to different games and so share their player.
fn player_crossings(z: &ZFrame, trail: &Trail) -> Vec<(usize, u8)> {
    let e = &trail.edges;
    let m = e.len();
    let upto = if trail.closed { m } else { m - 1 };
    let mut out = Vec::new();
    for i in 0..upto {
        let a = z.edges[e[i]];
        let b = z.edges[e[(i + 1) % m]];
        if a.game != b.game {
            debug_assert_eq!(a.player, b.player);
            out.push((i, a.player));
        }
    }
    out
}

/// Reverse an open neutral trail (type B): pick a crossing player whose
/// half-edge game lies outside the trail, reverse the side of the trail
/// that the game's current orientation completes to a neutral set, then
/// the other side using the reversed game.
fn reverse_open_trail(
    graph: &CompleteSignedGraph,
    t: Tournament,
    z: &ZFrame,
    trail: &Trail,
) -> Result<Vec<GeneratorCopy>> {
    let mask = trail.game_mask(z);
    let mut best: Option<(usize, u64, u64)> = None; // (first_len, first, second)
    for (pos, u) in player_crossings(z, trail) {
        let Some(h) = graph.game_id(GameKind::Half { i: u }) else {
            continue;
        };
        if mask >> h & 1 == 1 {
            continue;
        }
        let h_bit = 1u64 << h;
        let mut a_games = 0u64;
        for &e in &trail.edges[..=pos] {
            a_games |= 1 << z.edges[e].game;
        }
        let b_games = mask & !a_games;
        let a_end_charge = z.edges[trail.edges[pos]].charge;
        let h_charge: i8 = if t.won(h) { 1 } else { -1 };
        let (first, second) = if h_charge == -a_end_charge {
            (a_games | h_bit, b_games | h_bit)
        } else {
            (b_games | h_bit, a_games | h_bit)
        };
        let fl = first.count_ones() as usize;
        if best.map_or(true, |(bl, bf, _)| (fl, first) < (bl, bf)) {
            best = Some((fl, first, second));
        }
    }
    let Some((_, first, second)) = best else {
        return Err(Error::Falsified(
            "open neutral trail has no interior player with a free half-edge game".into(),
        ));
    };
    split_and_recurse(graph, t, first, second)
}

/// Reverse a closed neutral trail: on at most three players fall back to
/// the search-derived base table; otherwise cut the trail at two players
/// that play no game with each other inside the trail, and use the pair
/// game between them whose charges complete one arc to a neutral set.
fn reverse_closed_trail(
    graph: &CompleteSignedGraph,
    t: Tournament,
    z: &ZFrame,
    trail: &Trail,
) -> Result<Vec<GeneratorCopy>> {
    let mask = trail.game_mask(z);
    let crossings = player_crossings(z, trail);
    let mut players: Vec<u8> = crossings.iter().map(|&(_, p)| p).collect();
    players.sort_unstable();
    players.dedup();
    if players.len() <= 3 {
        return reverse_base_case(graph, t, mask);
    }
    let e = &trail.edges;
    let m = e.len();
    let mut best: Option<(usize, u64, u64)> = None;
    for (ci, &(p1, u)) in crossings.iter().enumerate() {
        for &(p2, v) in &crossings[ci + 1..] {
            if u == v {
                continue;
            }
            let (hi, lo) = if u > v { (u, v) } else { (v, u) };
            let neg = graph.game_id(GameKind::Negative { i: hi, j: lo }).unwrap();
            let pos = graph.game_id(GameKind::Positive { i: hi, j: lo });
            if mask >> neg & 1 == 1 || pos.is_some_and(|p| mask >> p & 1 == 1) {
                continue;
            }
            // arc P: edges p1+1..=p2, from u to v
            let mut p_games = 0u64;
            let mut i = (p1 + 1) % m;
            loop {
                p_games |= 1 << z.edges[e[i]].game;
                if i == p2 {
                    break;
                }
                i = (i + 1) % m;
            }
            let q_games = mask & !p_games;
            let a = z.edges[e[(p1 + 1) % m]].charge; // P's end charge at u
            let b = z.edges[e[p2]].charge; // P's end charge at v
            // aligned arc ends need the collaborative game; in type A
            // charges alternate along all-competitive trails, so the
            // aligned case never arises there
            let g = if a == b {
                match pos {
                    Some(p) => p,
                    None => continue,
                }
            } else {
                neg
            };
            let (g_u, g_v) = pair_game_charges(graph, t, g, u, v);
            let (first, second) = if (g_u, g_v) == (-a, -b) {
                (p_games | 1 << g, q_games | 1 << g)
            } else {
                debug_assert_eq!((g_u, g_v), (a, b));
                (q_games | 1 << g, p_games | 1 << g)
            };
            let fl = first.count_ones() as usize;
            if best.map_or(true, |(bl, bf, _)| (fl, first) < (bl, bf)) {
                best = Some((fl, first, second));
            }
        }
    }
    let Some((_, first, second)) = best else {
        return Err(Error::Falsified(
            "closed neutral trail on four or more players has no non-playing pair".into(),
        ));
    };
    split_and_recurse(graph, t, first, second)
}

/// Charges of a pair game at players (u, v) under its current orientation.
fn pair_game_charges(
    graph: &CompleteSignedGraph,
    t: Tournament,
    g: GameId,
    u: u8,
    v: u8,
) -> (i8, i8) {
    let won = t.won(g);
    match graph.games()[g].kind {
        GameKind::Positive { .. } => {
            let c = if won { 1 } else { -1 };
            (c, c)
        }
        GameKind::Negative { i, j } => {
            debug_assert!((u, v) == (i, j) || (u, v) == (j, i));
            let ci = if won { 1 } else { -1 };
            if u == i {
                (ci, -ci)
            } else {
                (-ci, ci)
            }
        }
        _ => unreachable!("pair game expected"),
    }
}

fn split_and_recurse(
    graph: &CompleteSignedGraph,
    t: Tournament,
    first: u64,
    second: u64,
) -> Result<Vec<GeneratorCopy>> {
    debug_assert!(graph.is_neutral(SubTournament::restrict(t, first)));
    let mut seq = reverse_neutral(graph, t, first)?;
    let t1 = Tournament::new(t.bits ^ first);
    debug_assert!(graph.is_neutral(SubTournament::restrict(t1, second)));
    seq.extend(reverse_neutral(graph, t1, second)?);
    Ok(seq)
}

/// Base table for trails on at most three players: reversal sequences are
/// found once per (type, orientation, target) by breadth-first search over
/// the induced tournament universe on the trail's players, cached, and
/// replayed. Every entry respects the `l - 2` bound.
fn reverse_base_case(
    graph: &CompleteSignedGraph,
    t: Tournament,
    mask: u64,
) -> Result<Vec<GeneratorCopy>> {
    static TABLE: OnceLock<Mutex<HashMap<(RootType, u8, u32, u32), Vec<GeneratorCopy>>>> =
        OnceLock::new();
    let support = graph.support(mask);
    let k = support.len();
    debug_assert!(k <= 3);
    let local = CompleteSignedGraph::new(graph.root_type(), k)?;
    // monotone player map: local label p -> support[p-1]; game bits keep
    // their orientation because the map preserves player order
    let to_global = |p: u8| support[p as usize - 1];
    let to_local = |p: u8| (support.iter().position(|&s| s == p).unwrap() + 1) as u8;
    let mut local_of_global: HashMap<GameId, GameId> = HashMap::new();
    for game in local.games() {
        let (kind, _) = relabel_game(game.kind, true, &to_global);
        let gid = graph.game_id(kind).unwrap();
        local_of_global.insert(gid, game.id);
    }
    let mut local_t: u32 = 0;
    let mut local_mask: u32 = 0;
    for (gid, lid) in &local_of_global {
        if t.won(*gid) {
            local_t |= 1 << lid;
        }
        if mask >> gid & 1 == 1 {
            local_mask |= 1 << lid;
        }
    }
    let key = (graph.root_type(), k as u8, local_t, local_mask);
    let table = TABLE.get_or_init(|| Mutex::new(HashMap::new()));
    let local_seq = {
        let mut guard = table.lock().unwrap();
        if let Some(seq) = guard.get(&key) {
            seq.clone()
        } else {
            let seq = bfs_reversal(&local, local_t, local_mask)?;
            guard.insert(key, seq.clone());
            seq
        }
    };
    // lift the local copies back to the host players
    let mut out = Vec::with_capacity(local_seq.len());
    for copy in &local_seq {
        let template = copy.template;
        let mut gmask = 0u64;
        let mut gwins = 0u64;
        for id in copy.sub.game_ids() {
            let (kind, w) = relabel_game(
                local.games()[id].kind,
                copy.sub.wins >> id & 1 == 1,
                &to_global,
            );
            let gid = graph.game_id(kind).unwrap();
            gmask |= 1 << gid;
            if w {
                gwins |= 1 << gid;
            }
        }
        out.push(GeneratorCopy {
            template,
            players: copy.players.iter().map(|&p| to_global(p)).collect(),
            sub: SubTournament::new(gmask, gwins),
            multiplicity: copy.multiplicity,
        });
    }
    let _ = to_local;
    Ok(out)
}

fn bfs_reversal(
    local: &CompleteSignedGraph,
    start: u32,
    mask: u32,
) -> Result<Vec<GeneratorCopy>> {
    let target = start ^ mask;
    if start == target {
        return Ok(Vec::new());
    }
    let copies = potential_copies(local);
    let mut prev: HashMap<u32, (u32, usize)> = HashMap::new();
    let mut frontier = vec![start];
    prev.insert(start, (start, usize::MAX));
    'bfs: while !frontier.is_empty() {
        let mut next = Vec::new();
        for &state in &frontier {
            for (ci, copy) in copies.iter().enumerate() {
                if state as u64 & copy.sub.mask == copy.sub.wins {
                    let to = state ^ copy.sub.mask as u32;
                    if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(to) {
                        e.insert((state, ci));
                        if to == target {
                            break 'bfs;
                        }
                        next.push(to);
                    }
                }
            }
        }
        frontier = next;
    }
    if !prev.contains_key(&target) {
        return Err(Error::Falsified(
            "induced fiber is disconnected on at most three players".into(),
        ));
    }
    let mut path = Vec::new();
    let mut cur = target;
    while cur != start {
        let (p, ci) = prev[&cur];
        path.push(copies[ci].clone());
        cur = p;
    }
    path.reverse();
    let l = mask.count_ones() as usize;
    if path.len() > l.saturating_sub(2) {
        return Err(Error::Falsified(format!(
            "base-case reversal of {l} games took {} steps (bound is {})",
            path.len(),
            l - 2
        )));
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signed::ScoreVector;

    fn graph(rt: RootType, n: usize) -> CompleteSignedGraph {
        CompleteSignedGraph::new(rt, n).unwrap()
    }

    #[test]
    fn zframe_single_competitive_game() {
        let g = graph(RootType::D, 2);
        let id = g.game_id(GameKind::Negative { i: 2, j: 1 }).unwrap();
        let z = build_zframe(&g, SubTournament::new(1 << id, 1 << id));
        assert_eq!(
            z.edges(),
            &[
                ZEdge { player: 2, game: id, charge: 1 },
                ZEdge { player: 1, game: id, charge: -1 }
            ]
        );
    }

    #[test]
    fn zframe_won_loop_is_two_positive_edges() {
        let g = graph(RootType::C, 2);
        let id = g.game_id(GameKind::Loop { i: 1 }).unwrap();
        let z = build_zframe(&g, SubTournament::new(1 << id, 1 << id));
        assert_eq!(z.edges().len(), 2);
        assert!(z.edges().iter().all(|e| e.player == 1 && e.charge == 1));
    }

    #[test]
    fn empty_zframe() {
        let g = graph(RootType::C, 3);
        let z = build_zframe(&g, SubTournament::new(0, 0));
        assert!(z.edges().is_empty());
        assert!(z.is_neutral());
        assert!(decompose_neutral_trails(&z).unwrap().trails.is_empty());
    }

    #[test]
    fn net_charges_equal_half_unit_scores() {
        let g = graph(RootType::C, 3);
        for bits in (0..1u64 << 9).step_by(11) {
            let sub = SubTournament::new(0b101_110_011, bits & 0b101_110_011);
            let z = build_zframe(&g, sub);
            assert_eq!(z.net_charges(), g.sub_score_vect(sub));
        }
    }

    fn clover_sub(g: &CompleteSignedGraph) -> SubTournament {
        // loop at 2 won, competitive 2-1 won by 1, collaborative 2-1 lost
        let neg = g.game_id(GameKind::Negative { i: 2, j: 1 }).unwrap();
        let pos = g.game_id(GameKind::Positive { i: 2, j: 1 }).unwrap();
        let lp = g.game_id(GameKind::Loop { i: 2 }).unwrap();
        SubTournament::new(1 << neg | 1 << pos | 1 << lp, 1 << lp)
    }

    #[test]
    fn clover_is_one_closed_trail_of_length_three() {
        let g = graph(RootType::C, 3);
        let sub = clover_sub(&g);
        assert!(g.is_neutral(sub));
        let z = build_zframe(&g, sub);
        let d = decompose_neutral_trails(&z).unwrap();
        assert_eq!(d.trails.len(), 1);
        assert!(d.trails[0].closed);
        assert_eq!(d.trails[0].len_matches(&z), 3);
    }

    fn cyclic_triangle_sub(g: &CompleteSignedGraph, p: [u8; 3]) -> SubTournament {
        // p[1] beats p[0], p[2] beats p[1], p[0] beats p[2]
        let id = |a: u8, b: u8| {
            let (hi, lo) = if a > b { (a, b) } else { (b, a) };
            (
                g.game_id(GameKind::Negative { i: hi, j: lo }).unwrap(),
                a > b,
            )
        };
        let mut mask = 0u64;
        let mut wins = 0u64;
        for (winner, loser) in [(p[1], p[0]), (p[2], p[1]), (p[0], p[2])] {
            let (gid, w) = id(winner, loser);
            mask |= 1 << gid;
            if w {
                wins |= 1 << gid;
            }
        }
        SubTournament::new(mask, wins)
    }

    #[test]
    fn disjoint_triangles_decompose_into_two_closed_trails() {
        let g = graph(RootType::D, 6);
        let s1 = cyclic_triangle_sub(&g, [1, 2, 3]);
        let s2 = cyclic_triangle_sub(&g, [4, 5, 6]);
        let sub = SubTournament::new(s1.mask | s2.mask, s1.wins | s2.wins);
        let z = build_zframe(&g, sub);
        let d = decompose_neutral_trails(&z).unwrap();
        assert_eq!(d.trails.len(), 2);
        assert!(d.trails.iter().all(|t| t.closed));
    }

    #[test]
    fn neutral_pair_is_open_trail_with_half_edge_finals() {
        let g = graph(RootType::B, 3);
        // half 1 won, half 2 lost, competitive 2-1 won by 2
        let h1 = g.game_id(GameKind::Half { i: 1 }).unwrap();
        let h2 = g.game_id(GameKind::Half { i: 2 }).unwrap();
        let neg = g.game_id(GameKind::Negative { i: 2, j: 1 }).unwrap();
        let sub = SubTournament::new(1 << h1 | 1 << h2 | 1 << neg, 1 << h1 | 1 << neg);
        assert!(g.is_neutral(sub));
        let z = build_zframe(&g, sub);
        let d = decompose_neutral_trails(&z).unwrap();
        assert_eq!(d.trails.len(), 1);
        let trail = &d.trails[0];
        assert!(!trail.closed);
        assert_eq!(trail.len_matches(&z), 3);
        let (a, b) = trail.final_matches(&z).unwrap();
        let mut finals = [a, b];
        finals.sort_unstable();
        let mut expect = [h1, h2];
        expect.sort_unstable();
        assert_eq!(finals, expect);
    }

    #[test]
    fn non_neutral_rejected_with_player() {
        let g = graph(RootType::C, 3);
        let lp = g.game_id(GameKind::Loop { i: 2 }).unwrap();
        let z = build_zframe(&g, SubTournament::new(1 << lp, 1 << lp));
        match decompose_neutral_trails(&z) {
            Err(Error::NotNeutral { player: 2, charge: 2 }) => {}
            other => panic!("expected NotNeutral for player 2, got {other:?}"),
        }
    }

    #[test]
    fn irreducibility_examples() {
        let g = graph(RootType::C, 3);
        let clover = clover_sub(&g);
        let z = build_zframe(&g, clover);
        assert!(is_irreducible(&g, &z).unwrap());

        let gd = graph(RootType::D, 6);
        let s1 = cyclic_triangle_sub(&gd, [1, 2, 3]);
        let s2 = cyclic_triangle_sub(&gd, [4, 5, 6]);
        let both = SubTournament::new(s1.mask | s2.mask, s1.wins | s2.wins);
        let z2 = build_zframe(&gd, both);
        assert!(!is_irreducible(&gd, &z2).unwrap());

        // a 4-regular neutral D_4 structure is reducible: a competitive
        // 4-cycle plus a collaborative 4-cycle with alternating outcomes
        let g4 = graph(RootType::D, 4);
        let neg = |i, j| g4.game_id(GameKind::Negative { i, j }).unwrap();
        let pos = |i, j| g4.game_id(GameKind::Positive { i, j }).unwrap();
        let mut mask = 0u64;
        let mut wins = 0u64;
        for (gid, w) in [
            (neg(2, 1), true),  // 2 beats 1
            (neg(3, 2), true),  // 3 beats 2
            (neg(4, 3), true),  // 4 beats 3
            (neg(4, 1), false), // 1 beats 4
            (pos(2, 1), true),
            (pos(3, 2), false),
            (pos(4, 3), true),
            (pos(4, 1), false),
        ] {
            mask |= 1 << gid;
            if w {
                wins |= 1 << gid;
            }
        }
        let sub = SubTournament::new(mask, wins);
        assert!(g4.is_neutral(sub));
        let z3 = build_zframe(&g4, sub);
        assert_eq!(z3.degrees()[..4], [4, 4, 4, 4]);
        assert!(!is_irreducible(&g4, &z3).unwrap());
    }

    #[test]
    fn reverse_single_triangle_is_one_step() {
        let g = graph(RootType::D, 4);
        let tri = cyclic_triangle_sub(&g, [1, 2, 3]);
        // host tournament containing the triangle
        let t = Tournament::new(tri.wins);
        let seq = reverse_neutral_subtournament(&g, t, tri.mask).unwrap();
        assert_eq!(seq.len(), 1);
    }

    #[test]
    fn reverse_tent_difference_takes_two_steps() {
        // two triangles on three players sharing one game: 4 games, l-2 = 2
        let g = graph(RootType::D, 3);
        let n21 = g.game_id(GameKind::Negative { i: 2, j: 1 }).unwrap();
        let n31 = g.game_id(GameKind::Negative { i: 3, j: 1 }).unwrap();
        let p21 = g.game_id(GameKind::Positive { i: 2, j: 1 }).unwrap();
        let p31 = g.game_id(GameKind::Positive { i: 3, j: 1 }).unwrap();
        // n21 lost, n31 won, p21 won, p31 lost:
        // (1,-1,0) + (-1,0,1) + (1,1,0) + (-1,0,-1) = 0
        let mask = 1u64 << n21 | 1 << n31 | 1 << p21 | 1 << p31;
        let sub = SubTournament::new(mask, (1 << n31) | (1 << p21));
        assert!(g.is_neutral(sub));
        for host_extra in 0..1u64 << g.game_count() {
            let t = Tournament::new((host_extra & !mask) | sub.wins);
            let seq = reverse_neutral_subtournament(&g, t, mask).unwrap();
            assert!(seq.len() <= 2, "took {} steps", seq.len());
            assert_eq!(seq.len(), 2);
        }
    }

    #[test]
    fn reverse_random_neutral_subsets() {
        for rt in [RootType::B, RootType::C, RootType::D] {
            let g = graph(rt, 4);
            let m = g.game_count();
            let mut tried = 0;
            let mut counter = 0u64;
            while tried < 60 {
                counter += 1;
                let t = Tournament::new(crate::rng::word(99, 1, counter) & g.full_mask());
                let mask = crate::rng::word(99, 2, counter) & g.full_mask();
                let sub = SubTournament::restrict(t, mask);
                if sub.len() < 3 || !g.is_neutral(sub) {
                    continue;
                }
                tried += 1;
                let comps = decompose_into_irreducibles(&g, sub);
                let bound: usize = comps.iter().map(|c| c.len() - 2).sum();
                let seq = reverse_neutral_subtournament(&g, t, mask).unwrap();
                assert!(seq.len() <= bound, "{} > {}", seq.len(), bound);
            }
            let _ = m;
        }
    }

    #[test]
    fn reverse_rejects_bad_input() {
        let g = graph(RootType::C, 3);
        let t = Tournament::new(0);
        // non-neutral mask
        let lp = g.game_id(GameKind::Loop { i: 1 }).unwrap();
        assert!(matches!(
            reverse_neutral_subtournament(&g, t, 1 << lp),
            Err(Error::NotNeutral { .. })
        ));
        // too small: empty set
        assert!(reverse_neutral_subtournament(&g, t, 0).is_err());
        // unknown game
        assert!(reverse_neutral_subtournament(&g, t, 1 << 63).is_err());
    }

    #[test]
    fn exhaustive_small_irreducibility_census() {
        // over every oriented game subset of every 3-player graph:
        // irreducible neutral sets are single trails with degrees in
        // {0, 2, 4}, and every 3-game neutral set is a generator copy
        use crate::generators::potential_copies;
        for rt in RootType::ALL {
            let g = graph(rt, 3);
            let m = g.game_count();
            let copies: std::collections::HashSet<(u64, u64)> = potential_copies(&g)
                .iter()
                .map(|c| (c.sub.mask, c.sub.wins))
                .collect();
            for mask in 0u64..1 << m {
                let mut wins = mask;
                loop {
                    let sub = SubTournament::new(mask, wins);
                    if !sub.is_empty() && g.is_neutral(sub) {
                        assert!(sub.len() >= 3, "no neutral set below three games");
                        if sub.len() == 3 {
                            assert!(copies.contains(&(mask, wins)), "{rt}: 3-game neutral set is a generator copy");
                        }
                        let z = build_zframe(&g, sub);
                        if is_irreducible(&g, &z).unwrap() {
                            let d = decompose_neutral_trails(&z).unwrap();
                            assert_eq!(d.trails.len(), 1, "{rt}: irreducible = single trail");
                            assert!(z.degrees().iter().all(|&x| matches!(x, 0 | 2 | 4)));
                        }
                    }
                    if wins == 0 {
                        break;
                    }
                    wins = (wins - 1) & mask;
                }
            }
        }
    }

    #[test]
    fn score_set_parity_discovered() {
        // half-unit scores: all coordinates odd in B, all even in C and D
        for (rt, parity) in [(RootType::B, 1), (RootType::C, 0), (RootType::D, 0)] {
            let g = graph(rt, 3);
            for bits in 0..1u64 << g.game_count() {
                let s = g.score(Tournament::new(bits));
                for &h in s.halves() {
                    assert_eq!(h.rem_euclid(2), parity, "{rt} parity");
                }
            }
        }
    }

    #[test]
    fn dot_export_shape() {
        let g = graph(RootType::C, 3);
        let z = build_zframe(&g, clover_sub(&g));
        let dot = z.to_dot(&g);
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("fillcolor=black"));
        assert!(dot.matches("->").count() >= 6);
    }

    #[test]
    fn score_vector_sanity() {
        let g = graph(RootType::B, 2);
        let all: Vec<ScoreVector> = (0..1u64 << g.game_count())
            .map(|b| g.score(Tournament::new(b)))
            .collect();
        assert!(all.contains(&ScoreVector::from_halves(vec![1, 1])));
    }
}
