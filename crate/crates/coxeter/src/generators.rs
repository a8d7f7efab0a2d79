//! Generator catalog and generator copies.
//!
//! Generators are the minimal neutral oriented sub-tournaments: reversing
//! one inside a tournament moves along an edge of the interchange graph
//! while keeping the score fixed. The catalog per type is *discovered* by
//! exhaustive search over all oriented game subsets of the 3-player
//! complete signed graph, deduplicated up to player relabeling; a test
//! freezes the resulting census as golden data.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::signed::{
    CompleteSignedGraph, GameKind, RootType, SubTournament, Tournament, MAX_PLAYERS,
};

/// Structural family of a generator template.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TemplateKind {
    /// Three competitive games forming a directed cycle.
    CyclicTriangle,
    /// One competitive and two collaborative games on three players.
    BalancedTriangle,
    /// Two half-edge games and one pair game on two players (type B).
    NeutralPair,
    /// A loop and both pair games on two players (type C); reversing one
    /// is a double edge in the interchange graph.
    NeutralClover,
}

impl TemplateKind {
    pub fn multiplicity(self) -> u8 {
        if self == TemplateKind::NeutralClover {
            2
        } else {
            1
        }
    }
}

/// A generator up to player relabeling: an orientation class of a neutral,
/// irreducible oriented game set with canonical players `1..=player_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorTemplate {
    pub id: usize,
    pub kind: TemplateKind,
    pub player_count: usize,
    /// Canonically labeled games with required orientations, sorted.
    pub games: Vec<(GameKind, bool)>,
}

impl GeneratorTemplate {
    pub fn multiplicity(&self) -> u8 {
        self.kind.multiplicity()
    }
}

/// A concrete embedding of a template into a tournament: the game set
/// `sub.mask` must be oriented exactly as `sub.wins` in the host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorCopy {
    pub template: usize,
    pub players: Vec<u8>,
    pub sub: SubTournament,
    pub multiplicity: u8,
}

impl GeneratorCopy {
    /// The same embedding with every orientation flipped; present in the
    /// host right after this copy is reversed.
    pub fn reversed_sub(&self) -> SubTournament {
        SubTournament::new(self.sub.mask, self.sub.mask ^ self.sub.wins)
    }
}

/// Canonical encoding of an oriented game set up to relabeling of its
/// support players. Negative games flip their orientation bit when the
/// relabeling inverts the player order, because the stored bit always
/// refers to the higher-numbered player winning.
fn canonical_form(games: &[(GameKind, bool)]) -> Vec<(GameKind, bool)> {
    let mut support: Vec<u8> = Vec::new();
    for (kind, _) in games {
        let (a, b) = kind.players();
        if !support.contains(&a) {
            support.push(a);
        }
        if let Some(b) = b {
            if !support.contains(&b) {
                support.push(b);
            }
        }
    }
    support.sort_unstable();
    let k = support.len();
    let mut perm: Vec<u8> = (1..=k as u8).collect();
    let mut best: Option<Vec<(GameKind, bool)>> = None;
    permute(&mut perm, 0, &mut |perm| {
        let map = |p: u8| -> u8 {
            let idx = support.iter().position(|&s| s == p).unwrap();
            perm[idx]
        };
        let mut relabeled: Vec<(GameKind, bool)> = games
            .iter()
            .map(|&(kind, w)| relabel_game(kind, w, &map))
            .collect();
        relabeled.sort_unstable();
        if best.as_ref().map_or(true, |b| relabeled < *b) {
            best = Some(relabeled);
        }
    });
    best.unwrap()
}

/// Apply a player relabeling to one oriented game.
pub(crate) fn relabel_game(kind: GameKind, w: bool, map: &dyn Fn(u8) -> u8) -> (GameKind, bool) {
    match kind {
        GameKind::Negative { i, j } => {
            let (p, q) = (map(i), map(j));
            let winner = if w { p } else { q };
            let (hi, lo) = if p > q { (p, q) } else { (q, p) };
            (GameKind::Negative { i: hi, j: lo }, winner == hi)
        }
        GameKind::Positive { i, j } => {
            let (p, q) = (map(i), map(j));
            let (hi, lo) = if p > q { (p, q) } else { (q, p) };
            (GameKind::Positive { i: hi, j: lo }, w)
        }
        GameKind::Half { i } => (GameKind::Half { i: map(i) }, w),
        GameKind::Loop { i } => (GameKind::Loop { i: map(i) }, w),
    }
}

fn permute(perm: &mut Vec<u8>, k: usize, f: &mut impl FnMut(&[u8])) {
    if k == perm.len() {
        f(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, f);
        perm.swap(k, i);
    }
}

fn classify_kind(games: &[(GameKind, bool)]) -> TemplateKind {
    if games.iter().any(|(k, _)| matches!(k, GameKind::Loop { .. })) {
        TemplateKind::NeutralClover
    } else if games.iter().any(|(k, _)| matches!(k, GameKind::Half { .. })) {
        TemplateKind::NeutralPair
    } else if games
        .iter()
        .all(|(k, _)| matches!(k, GameKind::Negative { .. }))
    {
        TemplateKind::CyclicTriangle
    } else {
        TemplateKind::BalancedTriangle
    }
}

/// Exhaustive discovery of the generator catalog for a type: every neutral
/// oriented game set of minimum size in the 3-player complete signed
/// graph, up to relabeling. No neutral set has fewer than three games
/// (asserted below), so these are the smallest neutral structures and in
/// particular irreducible.
pub fn discover_templates(root_type: RootType) -> Vec<GeneratorTemplate> {
    let n = 3.min(MAX_PLAYERS);
    let graph = CompleteSignedGraph::new(root_type, n).unwrap();
    let m = graph.game_count();
    let mut canon: HashSet<Vec<(GameKind, bool)>> = HashSet::new();
    let mut minimal: Vec<Vec<(GameKind, bool)>> = Vec::new();
    for mask in 1u64..1 << m {
        let size = mask.count_ones();
        if size > 3 {
            continue;
        }
        // enumerate all win-subsets of the mask
        let mut wins = mask;
        loop {
            if graph.is_neutral(SubTournament::new(mask, wins)) {
                assert_eq!(size, 3, "no neutral game set smaller than three games");
                let games: Vec<(GameKind, bool)> = SubTournament::new(mask, wins)
                    .game_ids()
                    .map(|id| (graph.games()[id].kind, wins >> id & 1 == 1))
                    .collect();
                let c = canonical_form(&games);
                if canon.insert(c.clone()) {
                    minimal.push(c);
                }
            }
            if wins == 0 {
                break;
            }
            wins = (wins - 1) & mask;
        }
    }
    minimal.sort_unstable_by(|a, b| (classify_kind(a), a).cmp(&(classify_kind(b), b)));
    minimal
        .into_iter()
        .enumerate()
        .map(|(id, games)| {
            let kind = classify_kind(&games);
            let player_count = games
                .iter()
                .map(|(k, _)| {
                    let (a, b) = k.players();
                    a.max(b.unwrap_or(0))
                })
                .max()
                .unwrap() as usize;
            GeneratorTemplate {
                id,
                kind,
                player_count,
                games,
            }
        })
        .collect()
}

/// The generator catalog of a type (computed once, then cached).
pub fn generator_catalog(root_type: RootType) -> &'static [GeneratorTemplate] {
    static CATALOGS: OnceLock<HashMap<RootType, Vec<GeneratorTemplate>>> = OnceLock::new();
    let map = CATALOGS.get_or_init(|| {
        RootType::ALL
            .iter()
            .map(|&rt| (rt, discover_templates(rt)))
            .collect()
    });
    &map[&root_type]
}

/// All embeddings of catalog templates into `K_Phi` on `n` players, as
/// oriented game sets. Cached on the graph.
pub fn potential_copies(graph: &CompleteSignedGraph) -> &[GeneratorCopy] {
    graph.copies_cell().get_or_init(|| {
        let catalog = generator_catalog(graph.root_type());
        let n = graph.n() as u8;
        let mut seen: HashSet<(u64, u64)> = HashSet::new();
        let mut out = Vec::new();
        for template in catalog {
            let k = template.player_count;
            if k > n as usize {
                continue;
            }
            let mut tuple = vec![0u8; k];
            embed(graph, template, &mut tuple, 0, &mut seen, &mut out);
        }
        out.sort_unstable_by_key(|c| (c.sub.mask, c.sub.wins));
        out
    })
}

fn embed(
    graph: &CompleteSignedGraph,
    template: &GeneratorTemplate,
    tuple: &mut Vec<u8>,
    depth: usize,
    seen: &mut HashSet<(u64, u64)>,
    out: &mut Vec<GeneratorCopy>,
) {
    let n = graph.n() as u8;
    if depth == tuple.len() {
        let map = |p: u8| tuple[p as usize - 1];
        let mut mask = 0u64;
        let mut wins = 0u64;
        for &(kind, w) in &template.games {
            let (kind2, w2) = relabel_game(kind, w, &map);
            let id = graph
                .game_id(kind2)
                .expect("template game valid for its own type");
            mask |= 1 << id;
            if w2 {
                wins |= 1 << id;
            }
        }
        if seen.insert((mask, wins)) {
            out.push(GeneratorCopy {
                template: template.id,
                players: tuple.clone(),
                sub: SubTournament::new(mask, wins),
                multiplicity: template.multiplicity(),
            });
        }
        return;
    }
    for p in 1..=n {
        if !tuple[..depth].contains(&p) {
            tuple[depth] = p;
            embed(graph, template, tuple, depth + 1, seen, out);
        }
    }
}

/// Generator copies present in a tournament (oriented exactly as required).
pub fn find_generator_copies(graph: &CompleteSignedGraph, t: Tournament) -> Vec<GeneratorCopy> {
    copies_in(graph, t).cloned().collect()
}

/// Borrowing variant for hot loops.
pub(crate) fn copies_in(
    graph: &CompleteSignedGraph,
    t: Tournament,
) -> impl Iterator<Item = &GeneratorCopy> {
    potential_copies(graph)
        .iter()
        .filter(move |c| t.bits & c.sub.mask == c.sub.wins)
}

/// Total copy count weighted by reversal multiplicity (2 for clovers).
/// Always equals the interchange-graph degree of the tournament's fiber.
pub fn weighted_copy_count(graph: &CompleteSignedGraph, t: Tournament) -> u64 {
    copies_in(graph, t).map(|c| c.multiplicity as u64).sum()
}

/// Reverse one generator copy in place.
pub fn apply_generator_reversal(
    graph: &CompleteSignedGraph,
    t: Tournament,
    copy: &GeneratorCopy,
) -> Result<Tournament> {
    if t.bits & copy.sub.mask != copy.sub.wins {
        return Err(Error::InvalidInput(
            "generator copy is not oriented as required in the host tournament".into(),
        ));
    }
    graph.reverse_mask(t, copy.sub.mask)
}

/// JSON dump of a catalog for documentation.
pub fn catalog_json(root_type: RootType) -> serde_json::Value {
    let catalog = generator_catalog(root_type);
    serde_json::json!(catalog
        .iter()
        .map(|t| {
            serde_json::json!({
                "id": t.id,
                "kind": format!("{:?}", t.kind),
                "players": t.player_count,
                "multiplicity": t.multiplicity(),
                "games": t.games.iter().map(|(k, w)| {
                    serde_json::json!({"game": format!("{k:?}"), "won": w})
                }).collect::<Vec<_>>(),
            })
        })
        .collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signed::ScoreVector;

    #[test]
    fn census_counts() {
        let count = |rt| generator_catalog(rt).len();
        assert_eq!(count(RootType::A), 1);
        assert_eq!(count(RootType::D), 2);
        assert_eq!(count(RootType::B), 5);
        assert_eq!(count(RootType::C), 4);

        let kinds = |rt: RootType| -> Vec<TemplateKind> {
            generator_catalog(rt).iter().map(|t| t.kind).collect()
        };
        assert_eq!(kinds(RootType::A), vec![TemplateKind::CyclicTriangle]);
        assert_eq!(
            kinds(RootType::D),
            vec![TemplateKind::CyclicTriangle, TemplateKind::BalancedTriangle]
        );
        assert_eq!(
            kinds(RootType::B),
            vec![
                TemplateKind::CyclicTriangle,
                TemplateKind::BalancedTriangle,
                TemplateKind::NeutralPair,
                TemplateKind::NeutralPair,
                TemplateKind::NeutralPair,
            ]
        );
        assert_eq!(
            kinds(RootType::C),
            vec![
                TemplateKind::CyclicTriangle,
                TemplateKind::BalancedTriangle,
                TemplateKind::NeutralClover,
                TemplateKind::NeutralClover,
            ]
        );
    }

    #[test]
    fn every_template_is_neutral_and_minimal() {
        for rt in RootType::ALL {
            let graph = CompleteSignedGraph::new(rt, 3).unwrap();
            for template in generator_catalog(rt) {
                let mut mask = 0u64;
                let mut wins = 0u64;
                for &(kind, w) in &template.games {
                    let id = graph.game_id(kind).unwrap();
                    mask |= 1 << id;
                    if w {
                        wins |= 1 << id;
                    }
                }
                let sub = SubTournament::new(mask, wins);
                assert!(graph.is_neutral(sub), "{rt} template {} not neutral", template.id);
                assert_eq!(template.games.len(), 3, "all generators have three games");
            }
        }
    }

    #[test]
    fn transitive_tournament_has_no_copies() {
        for rt in RootType::ALL {
            for n in 1..=4 {
                let graph = CompleteSignedGraph::new(rt, n).unwrap();
                let copies = find_generator_copies(&graph, graph.all_wins());
                assert!(copies.is_empty(), "{rt}_{n} all-wins contains a copy");
            }
        }
    }

    #[test]
    fn weighted_copy_count_matches_degree_formula() {
        for rt in RootType::ALL {
            for n in 1..=3usize {
                let graph = CompleteSignedGraph::new(rt, n).unwrap();
                for bits in 0..1u64 << graph.game_count() {
                    let t = Tournament::new(bits);
                    let d = graph.degree_for(&graph.score(t)).unwrap();
                    assert_eq!(
                        weighted_copy_count(&graph, t),
                        d,
                        "{rt}_{n} bits={bits:b}"
                    );
                }
            }
        }
    }

    #[test]
    fn apply_reversal_involution_and_score() {
        let graph = CompleteSignedGraph::new(RootType::C, 3).unwrap();
        let mut checked = 0;
        for bits in 0..1u64 << graph.game_count() {
            let t = Tournament::new(bits);
            if let Some(copy) = copies_in(&graph, t).next() {
                let t2 = apply_generator_reversal(&graph, t, copy).unwrap();
                assert_eq!(graph.score(t2), graph.score(t));
                // the reversed copy is present at the same embedding
                assert_eq!(t2.bits & copy.sub.mask, copy.reversed_sub().wins);
                let back = graph.reverse_mask(t2, copy.sub.mask).unwrap();
                assert_eq!(back, t);
                checked += 1;
            }
        }
        assert!(checked > 100);
        // mismatched orientation is an error
        let t = Tournament::new(0);
        let bad = potential_copies(&graph)
            .iter()
            .find(|c| c.sub.wins != 0)
            .unwrap();
        assert!(apply_generator_reversal(&graph, t, bad).is_err());
    }

    #[test]
    fn distinct_copies_share_at_most_one_game() {
        // checked over copies co-present in actual tournaments: n = 3
        // exhaustively, n = 4 on a deterministic sample
        for rt in [RootType::B, RootType::C, RootType::D] {
            for (n, step) in [(3usize, 7usize), (4, 997)] {
                let graph = CompleteSignedGraph::new(rt, n).unwrap();
                for bits in (0..1u64 << graph.game_count()).step_by(step) {
                    let t = Tournament::new(bits);
                    let copies: Vec<&GeneratorCopy> = copies_in(&graph, t).collect();
                    for (a, ca) in copies.iter().enumerate() {
                        for cb in &copies[a + 1..] {
                            let shared = (ca.sub.mask & cb.sub.mask).count_ones();
                            assert!(shared <= 1, "{rt}_{n}: copies share {shared} games");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fiber_degree_examples_c3() {
        // weighted copy count in the two highlighted C_3 fibers
        let graph = CompleteSignedGraph::new(RootType::C, 3).unwrap();
        let mut seen7 = 0;
        let mut seen4 = 0;
        for bits in 0..1u64 << 9 {
            let t = Tournament::new(bits);
            let s = graph.score(t);
            if s == ScoreVector::from_halves(vec![0, 0, 0]) {
                assert_eq!(weighted_copy_count(&graph, t), 7);
                seen7 += 1;
            } else if s == ScoreVector::from_halves(vec![4, 2, 2]) {
                assert_eq!(weighted_copy_count(&graph, t), 4);
                seen4 += 1;
            }
        }
        assert_eq!(seen7, 16);
        assert!(seen4 > 0);
    }
}
