//! Complete signed graphs, Coxeter tournaments, and score arithmetic.
//!
//! A complete signed graph of type `B_n`, `C_n` or `D_n` carries every
//! competitive (negative) and collaborative (positive) game between
//! distinct players; type `B_n` adds one half-edge solitaire game per
//! player and type `C_n` one loop solitaire game per player. Type `A`
//! is the classical complete graph (negative games only).
//!
//! A tournament orients every game; its score sequence is the sum of
//! +/- half-point contributions. All scores are kept in *half-units*
//! (twice the score), so everything stays in exact integer arithmetic:
//!
//! | game          | won (w = 1)        | per-win half-units     |
//! |---------------|--------------------|------------------------|
//! | negative i,j  | i gains, j loses   | +1 at i, -1 at j       |
//! | positive i,j  | both gain          | +1 at i, +1 at j       |
//! | half edge i   | i gains            | +1 at i                |
//! | loop i        | i gains a full pt  | +2 at i                |
//!
//! Losing a game contributes the negation.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::GeneratorCopy;

/// Hard limit on player count; every supported configuration has at most
/// 64 games, so orientation bit vectors fit in a `u64`.
pub const MAX_PLAYERS: usize = 8;

/// Fixed-width half-unit vector used in hot loops.
pub(crate) type Vect = [i32; MAX_PLAYERS];

pub(crate) fn vect_add(a: &mut Vect, b: &Vect) {
    for i in 0..MAX_PLAYERS {
        a[i] += b[i];
    }
}

pub(crate) fn vect_sub(a: &mut Vect, b: &Vect) {
    for i in 0..MAX_PLAYERS {
        a[i] -= b[i];
    }
}

/// Root-system family of the complete signed graph.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RootType {
    /// Classical tournaments: negative games only.
    A,
    /// Negative + positive + half-edge solitaire games.
    B,
    /// Negative + positive + loop solitaire games.
    C,
    /// Negative + positive games only.
    D,
}

impl RootType {
    pub const ALL: [RootType; 4] = [RootType::A, RootType::B, RootType::C, RootType::D];

    pub fn has_positive(self) -> bool {
        self != RootType::A
    }

    pub fn has_half_edges(self) -> bool {
        self == RootType::B
    }

    pub fn has_loops(self) -> bool {
        self == RootType::C
    }

    /// Default exhaustive-enumeration cap on the player count.
    pub fn default_cap(self) -> usize {
        match self {
            RootType::A => 6,
            RootType::B | RootType::C => 4,
            RootType::D => 5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RootType::A => "A",
            RootType::B => "B",
            RootType::C => "C",
            RootType::D => "D",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(RootType::A),
            "B" | "b" => Ok(RootType::B),
            "C" | "c" => Ok(RootType::C),
            "D" | "d" => Ok(RootType::D),
            other => Err(Error::InvalidInput(format!(
                "unknown type {other:?} (expected A, B, C or D)"
            ))),
        }
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One signed edge. Players are 1-based; pair games store `i > j`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GameKind {
    /// Competitive game between `i` and `j`: one wins, the other loses.
    Negative { i: u8, j: u8 },
    /// Collaborative game: `i` and `j` both win or both lose.
    Positive { i: u8, j: u8 },
    /// Half-edge solitaire game of player `i` (type B), worth a half point.
    Half { i: u8 },
    /// Loop solitaire game of player `i` (type C), worth a full point.
    Loop { i: u8 },
}

impl GameKind {
    /// Players touched by the game, in decreasing order for pair games.
    pub fn players(self) -> (u8, Option<u8>) {
        match self {
            GameKind::Negative { i, j } | GameKind::Positive { i, j } => (i, Some(j)),
            GameKind::Half { i } | GameKind::Loop { i } => (i, None),
        }
    }

    pub fn is_pair(self) -> bool {
        matches!(self, GameKind::Negative { .. } | GameKind::Positive { .. })
    }

    /// Per-win contribution in half-units.
    pub(crate) fn vect(self) -> Vect {
        let mut v = [0i32; MAX_PLAYERS];
        match self {
            GameKind::Negative { i, j } => {
                v[i as usize - 1] = 1;
                v[j as usize - 1] = -1;
            }
            GameKind::Positive { i, j } => {
                v[i as usize - 1] = 1;
                v[j as usize - 1] = 1;
            }
            GameKind::Half { i } => v[i as usize - 1] = 1,
            GameKind::Loop { i } => v[i as usize - 1] = 2,
        }
        v
    }
}

/// Index of a game in the canonical ordering of a [`CompleteSignedGraph`].
pub type GameId = usize;

/// A game together with its dense id.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Game {
    pub id: GameId,
    pub kind: GameKind,
}

/// Integer score vector in half-units (stores twice the score).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScoreVector {
    halves: Vec<i32>,
}

impl ScoreVector {
    pub fn from_halves(halves: Vec<i32>) -> Self {
        ScoreVector { halves }
    }

    pub fn zero(n: usize) -> Self {
        ScoreVector {
            halves: vec![0; n],
        }
    }

    pub fn halves(&self) -> &[i32] {
        &self.halves
    }

    pub fn len(&self) -> usize {
        self.halves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halves.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.halves.iter().all(|&h| h == 0)
    }

    pub fn negated(&self) -> Self {
        ScoreVector {
            halves: self.halves.iter().map(|&h| -h).collect(),
        }
    }

    /// Squared Euclidean norm of the half-unit vector, i.e. `|2s|^2`.
    pub fn norm2_halves(&self) -> i64 {
        self.halves.iter().map(|&h| (h as i64) * (h as i64)).sum()
    }

    pub(crate) fn to_vect(&self) -> Vect {
        let mut v = [0i32; MAX_PLAYERS];
        v[..self.halves.len()].copy_from_slice(&self.halves);
        v
    }

    pub(crate) fn from_vect(v: &Vect, n: usize) -> Self {
        ScoreVector {
            halves: v[..n].to_vec(),
        }
    }
}

impl fmt::Display for ScoreVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.halves.iter().map(|h| h.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A Coxeter tournament: one orientation bit per game, bit `i` is the
/// outcome of game id `i` under the canonical ordering. Two tournaments
/// are equal exactly when their bit vectors are equal.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tournament {
    pub bits: u64,
}

impl Tournament {
    pub fn new(bits: u64) -> Self {
        Tournament { bits }
    }

    #[inline]
    pub fn won(self, id: GameId) -> bool {
        self.bits >> id & 1 == 1
    }

    /// Bit string, game id 0 first.
    pub fn bit_string(self, game_count: usize) -> String {
        (0..game_count)
            .map(|id| if self.won(id) { '1' } else { '0' })
            .collect()
    }

    pub fn from_bit_string(s: &str) -> Result<Self> {
        if s.len() > 64 {
            return Err(Error::InvalidInput("bit string longer than 64".into()));
        }
        let mut bits = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => bits |= 1 << i,
                '0' => {}
                other => {
                    return Err(Error::InvalidInput(format!(
                        "bad character {other:?} in bit string"
                    )))
                }
            }
        }
        Ok(Tournament { bits })
    }
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tournament({:b})", self.bits)
    }
}

/// A subset of games together with orientations (`wins` is a subset of
/// `mask`). Used for neutral sub-tournaments, differences and generators.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubTournament {
    pub mask: u64,
    pub wins: u64,
}

impl SubTournament {
    pub fn new(mask: u64, wins: u64) -> Self {
        debug_assert_eq!(wins & !mask, 0);
        SubTournament { mask, wins }
    }

    /// The games of `mask` oriented as in `t`.
    pub fn restrict(t: Tournament, mask: u64) -> Self {
        SubTournament {
            mask,
            wins: t.bits & mask,
        }
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    pub fn game_ids(self) -> impl Iterator<Item = GameId> {
        let mut m = self.mask;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let id = m.trailing_zeros() as GameId;
                m &= m - 1;
                Some(id)
            }
        })
    }
}

/// JSON form of a tournament: `{"type":"C","n":3,"w":"010110011"}`.
#[derive(Serialize, Deserialize)]
pub struct TournamentJson {
    #[serde(rename = "type")]
    pub root_type: RootType,
    pub n: usize,
    pub w: String,
}

/// The complete signed graph `K_Phi` on `n` players with its canonical
/// game ordering: negative games lex by (i, j) with i > j, then positive
/// games in the same order, then half edges or loops by player. The
/// ordering is fixed so that game ids are stable across runs and files.
pub struct CompleteSignedGraph {
    root_type: RootType,
    n: usize,
    games: Vec<Game>,
    vects: Vec<Vect>,
    standard_halves: Vect,
    copies: OnceLock<Vec<GeneratorCopy>>,
}

impl fmt::Debug for CompleteSignedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CompleteSignedGraph({}_{})", self.root_type, self.n)
    }
}

impl CompleteSignedGraph {
    pub fn new(root_type: RootType, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("player count must be at least 1".into()));
        }
        if n > MAX_PLAYERS {
            return Err(Error::InvalidInput(format!(
                "player count {n} exceeds the supported maximum {MAX_PLAYERS}"
            )));
        }
        let mut games = Vec::new();
        let push = |kind: GameKind, games: &mut Vec<Game>| {
            let id = games.len();
            games.push(Game { id, kind });
        };
        for i in 2..=n as u8 {
            for j in 1..i {
                push(GameKind::Negative { i, j }, &mut games);
            }
        }
        if root_type.has_positive() {
            for i in 2..=n as u8 {
                for j in 1..i {
                    push(GameKind::Positive { i, j }, &mut games);
                }
            }
        }
        if root_type.has_half_edges() {
            for i in 1..=n as u8 {
                push(GameKind::Half { i }, &mut games);
            }
        }
        if root_type.has_loops() {
            for i in 1..=n as u8 {
                push(GameKind::Loop { i }, &mut games);
            }
        }
        debug_assert!(games.len() <= 64);
        let vects: Vec<Vect> = games.iter().map(|g| g.kind.vect()).collect();
        let mut standard_halves = [0i32; MAX_PLAYERS];
        for v in &vects {
            vect_add(&mut standard_halves, v);
        }
        Ok(CompleteSignedGraph {
            root_type,
            n,
            games,
            vects,
            standard_halves,
            copies: OnceLock::new(),
        })
    }

    pub fn root_type(&self) -> RootType {
        self.root_type
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn game_count(&self) -> usize {
        self.games.len()
    }

    pub fn games(&self) -> &[Game] {
        &self.games
    }

    pub fn game(&self, id: GameId) -> Result<&Game> {
        self.games.get(id).ok_or(Error::UnknownGame(id))
    }

    pub fn full_mask(&self) -> u64 {
        if self.games.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.games.len()) - 1
        }
    }

    /// Dense id of a game kind under the canonical ordering.
    pub fn game_id(&self, kind: GameKind) -> Option<GameId> {
        let pairs = self.n * (self.n - 1) / 2;
        let pair_index = |i: u8, j: u8| -> Option<usize> {
            let (i, j) = (i as usize, j as usize);
            if i > j && j >= 1 && i <= self.n {
                Some((i - 1) * (i - 2) / 2 + (j - 1))
            } else {
                None
            }
        };
        let id = match kind {
            GameKind::Negative { i, j } => pair_index(i, j)?,
            GameKind::Positive { i, j } => {
                if !self.root_type.has_positive() {
                    return None;
                }
                pairs + pair_index(i, j)?
            }
            GameKind::Half { i } => {
                if !self.root_type.has_half_edges() || i as usize > self.n || i == 0 {
                    return None;
                }
                2 * pairs + i as usize - 1
            }
            GameKind::Loop { i } => {
                if !self.root_type.has_loops() || i as usize > self.n || i == 0 {
                    return None;
                }
                2 * pairs + i as usize - 1
            }
        };
        debug_assert_eq!(self.games[id].kind, kind);
        Some(id)
    }

    /// Per-win contribution of a game in half-units.
    pub fn game_vector(&self, id: GameId) -> Result<ScoreVector> {
        let game = self.game(id)?;
        Ok(ScoreVector::from_vect(&game.kind.vect(), self.n))
    }

    pub(crate) fn vects(&self) -> &[Vect] {
        &self.vects
    }

    /// Score of the all-wins tournament (the standard score sequence).
    pub fn standard_score(&self) -> ScoreVector {
        ScoreVector::from_vect(&self.standard_halves, self.n)
    }

    pub fn all_wins(&self) -> Tournament {
        Tournament::new(self.full_mask())
    }

    pub(crate) fn score_vect(&self, t: Tournament) -> Vect {
        // score = 2 * (sum over won games) - standard
        let mut acc = [0i32; MAX_PLAYERS];
        let mut bits = t.bits & self.full_mask();
        while bits != 0 {
            let id = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            vect_add(&mut acc, &self.vects[id]);
        }
        for x in acc.iter_mut() {
            *x *= 2;
        }
        vect_sub(&mut acc, &self.standard_halves);
        acc
    }

    /// Score sequence of a tournament, in half-units.
    pub fn score(&self, t: Tournament) -> ScoreVector {
        ScoreVector::from_vect(&self.score_vect(t), self.n)
    }

    /// Oriented half-unit contribution of one sub-tournament, i.e. the sum
    /// of per-win vectors signed by the orientation. Zero means neutral.
    pub(crate) fn sub_score_vect(&self, sub: SubTournament) -> Vect {
        let mut acc = [0i32; MAX_PLAYERS];
        for id in sub.game_ids() {
            if sub.wins >> id & 1 == 1 {
                vect_add(&mut acc, &self.vects[id]);
            } else {
                vect_sub(&mut acc, &self.vects[id]);
            }
        }
        acc
    }

    pub fn sub_score(&self, sub: SubTournament) -> ScoreVector {
        ScoreVector::from_vect(&self.sub_score_vect(sub), self.n)
    }

    pub fn is_neutral(&self, sub: SubTournament) -> bool {
        self.sub_score_vect(sub) == [0i32; MAX_PLAYERS]
    }

    /// Flip the orientation of every game in the set. Applying the same
    /// set twice restores the tournament; reversing a neutral set keeps
    /// the score fixed.
    pub fn reverse_subset(&self, t: Tournament, game_ids: &[GameId]) -> Result<Tournament> {
        let mut mask = 0u64;
        for &id in game_ids {
            if id >= self.games.len() {
                return Err(Error::UnknownGame(id));
            }
            mask |= 1 << id;
        }
        Ok(Tournament::new(t.bits ^ mask))
    }

    pub fn reverse_mask(&self, t: Tournament, mask: u64) -> Result<Tournament> {
        if mask & !self.full_mask() != 0 {
            return Err(Error::UnknownGame(mask.leading_zeros() as usize));
        }
        Ok(Tournament::new(t.bits ^ mask))
    }

    /// Global reversal: every game flipped.
    pub fn reversal(&self, t: Tournament) -> Tournament {
        Tournament::new(t.bits ^ self.full_mask())
    }

    /// Players touched by a game set, ascending.
    pub fn support(&self, mask: u64) -> Vec<u8> {
        let mut seen = [false; MAX_PLAYERS];
        let mut m = mask;
        while m != 0 {
            let id = m.trailing_zeros() as usize;
            m &= m - 1;
            let (a, b) = self.games[id].kind.players();
            seen[a as usize - 1] = true;
            if let Some(b) = b {
                seen[b as usize - 1] = true;
            }
        }
        (0..self.n as u8)
            .filter(|&p| seen[p as usize])
            .map(|p| p + 1)
            .collect()
    }

    pub(crate) fn copies_cell(&self) -> &OnceLock<Vec<GeneratorCopy>> {
        &self.copies
    }

    pub fn to_json(&self, t: Tournament) -> TournamentJson {
        TournamentJson {
            root_type: self.root_type,
            n: self.n,
            w: t.bit_string(self.game_count()),
        }
    }

    pub fn from_json(json: &TournamentJson) -> Result<(Self, Tournament)> {
        let graph = CompleteSignedGraph::new(json.root_type, json.n)?;
        if json.w.len() != graph.game_count() {
            return Err(Error::InvalidInput(format!(
                "bit string length {} does not match the {} games of {}_{}",
                json.w.len(),
                graph.game_count(),
                json.root_type,
                json.n
            )));
        }
        let t = Tournament::from_bit_string(&json.w)?;
        Ok((graph, t))
    }
}

/// Regular degree of the interchange graph of the fiber of `score`:
/// `(|2s_Phi|^2 - |2s|^2) / 8` in half-units. A negative or non-integer
/// value proves the score is infeasible (a necessary condition only).
pub fn degree_formula(root_type: RootType, n: usize, score: &ScoreVector) -> Result<u64> {
    let graph = CompleteSignedGraph::new(root_type, n)?;
    graph.degree_for(score)
}

impl CompleteSignedGraph {
    pub fn degree_for(&self, score: &ScoreVector) -> Result<u64> {
        if score.len() != self.n {
            return Err(Error::InvalidInput(format!(
                "score has {} entries, expected {}",
                score.len(),
                self.n
            )));
        }
        let diff = self.standard_score().norm2_halves() - score.norm2_halves();
        if diff < 0 || diff % 8 != 0 {
            return Err(Error::InfeasibleScore);
        }
        Ok((diff / 8) as u64)
    }
}
