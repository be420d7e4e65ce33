use std::collections::{BTreeMap, HashSet};

use dashmap::DashMap;
use msgames_core::linear::{cap_gaps, reflect};
use msgames_core::{canonical_key, partial_iso_unchecked, Board, Budget, CanonicalKey, Selection, Side, Winner};
use rayon::prelude::*;

use crate::certificate::{extract, SpoilerCertificate};
use crate::state::{alive_pairs_idx, duplicator_expand, prune_dead, GameState, Variant};
use crate::MsError;

#[derive(Debug, Clone)]
pub struct MsVerdict {
    pub winner: Winner,
    /// Present iff Spoiler wins and a certificate was requested.
    pub certificate: Option<SpoilerCertificate>,
    /// An alive pair, for Duplicator wins with no rounds left.
    pub witness_pair: Option<(Board, Board)>,
    /// Search nodes used.
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct MemoKey {
    a: Vec<CanonicalKey>,
    b: Vec<CanonicalKey>,
    constraints: Vec<u8>,
    variant: u8,
}

/// Spoiler's move in one round: a side and one selection per board on it,
/// aligned with the board order handed to [`MsSolver::choose`].
#[derive(Debug, Clone)]
pub(crate) struct Choice {
    pub side: Side,
    pub picks: Vec<Selection>,
}

/// One-player search for Spoiler against the oblivious Duplicator.
///
/// Only exact values enter the transposition table, so a solver may be
/// reused across games and shared between threads.
#[derive(Debug, Default)]
pub struct MsSolver {
    memo: DashMap<MemoKey, bool>,
}

fn code(c: Option<Side>) -> u8 {
    match c {
        None => 0,
        Some(Side::A) => 1,
        Some(Side::B) => 2,
    }
}

pub(crate) fn allowed(c: Option<Side>) -> Vec<Side> {
    match c {
        Some(s) => vec![s],
        None => vec![Side::A, Side::B],
    }
}

/// Whether gap capping is sound for this variant. Without play on top the
/// rank-equivalence argument behind capping does not apply.
fn caps(v: Variant) -> bool {
    !v.no_play_on_top
}

/// Board normalised for `k` rounds left, with its embedding.
pub(crate) fn normalise_one(b: &Board, k: usize, v: Variant) -> (Board, Option<Vec<usize>>) {
    if caps(v) && b.is_linear() {
        let (c, e) = cap_gaps(b, k as u32);
        (c, Some(e))
    } else {
        (b.clone(), None)
    }
}

/// Normalised, deduplicated boards sorted by canonical key.
pub(crate) fn normalise(boards: &[Board], k: usize, v: Variant) -> Vec<Board> {
    let mut m = BTreeMap::new();
    for b in boards {
        let (c, _) = normalise_one(b, k, v);
        m.entry(canonical_key(&c)).or_insert(c);
    }
    m.into_values().collect()
}

fn sorted_keys(boards: &[Board], f: impl Fn(&Board) -> CanonicalKey) -> Vec<CanonicalKey> {
    let mut k: Vec<CanonicalKey> = boards.iter().map(f).collect();
    k.sort();
    k.dedup();
    k
}

fn orient<'x>(side: Side, a: &'x [Board], b: &'x [Board]) -> (&'x [Board], &'x [Board]) {
    match side {
        Side::A => (a, b),
        Side::B => (b, a),
    }
}

impl MsSolver {
    pub fn new() -> MsSolver {
        MsSolver::default()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Winner and, for Spoiler wins, a certificate.
    pub fn solve(&self, state: &GameState, budget: &Budget) -> Result<MsVerdict, MsError> {
        let mut v = self.solve_winner(state, budget)?;
        if v.winner == Winner::Spoiler {
            v.certificate = Some(extract(self, state, budget)?);
            v.nodes = budget.nodes();
        }
        Ok(v)
    }

    /// Winner without a certificate.
    pub fn winner(&self, state: &GameState, budget: &Budget) -> Result<Winner, MsError> {
        Ok(self.solve_winner(state, budget)?.winner)
    }

    fn solve_winner(&self, state: &GameState, budget: &Budget) -> Result<MsVerdict, MsError> {
        let spoiler = self.wins(state.side_a(), state.side_b(), state.constraints(), state.variant(), budget)?;
        let witness_pair = if !spoiler && state.rounds_left() == 0 {
            alive_pairs_idx(state.side_a(), state.side_b())
                .first()
                .map(|&(i, j)| (state.side_a()[i].clone(), state.side_b()[j].clone()))
        } else {
            None
        };
        Ok(MsVerdict {
            winner: if spoiler { Winner::Spoiler } else { Winner::Duplicator },
            certificate: None,
            witness_pair,
            nodes: budget.nodes(),
        })
    }

    fn memo_key(&self, a: &[Board], b: &[Board], cons: &[Option<Side>], v: Variant) -> MemoKey {
        let ka = sorted_keys(a, canonical_key);
        let kb = sorted_keys(b, canonical_key);
        let constraints = cons.iter().map(|&c| code(c)).collect();
        let variant = v.code();
        if a.iter().chain(b).all(Board::is_linear) {
            let ra = sorted_keys(a, |x| canonical_key(&reflect(x)));
            let rb = sorted_keys(b, |x| canonical_key(&reflect(x)));
            if (&ra, &rb) < (&ka, &kb) {
                return MemoKey { a: ra, b: rb, constraints, variant };
            }
        }
        MemoKey { a: ka, b: kb, constraints, variant }
    }

    /// Whether Spoiler wins from boards `a` vs `b` with round constraints
    /// `cons` (one entry per round left).
    pub(crate) fn wins(
        &self,
        a: &[Board],
        b: &[Board],
        cons: &[Option<Side>],
        v: Variant,
        budget: &Budget,
    ) -> Result<bool, MsError> {
        budget.tick()?;
        let (a, b) = prune_dead(a, b);
        if a.is_empty() || b.is_empty() {
            return Ok(true);
        }
        let k = cons.len();
        if k == 0 {
            return Ok(false);
        }
        let a = normalise(&a, k, v);
        let b = normalise(&b, k, v);
        let key = self.memo_key(&a, &b, cons, v);
        if let Some(r) = self.memo.get(&key) {
            return Ok(*r);
        }
        let r = self.choose(&a, &b, cons, v, budget)?.is_some();
        self.memo.insert(key, r);
        Ok(r)
    }

    fn wins_oriented(
        &self,
        side: Side,
        moved: &[Board],
        expanded: &[Board],
        rest: &[Option<Side>],
        v: Variant,
        budget: &Budget,
    ) -> Result<bool, MsError> {
        match side {
            Side::A => self.wins(moved, expanded, rest, v, budget),
            Side::B => self.wins(expanded, moved, rest, v, budget),
        }
    }

    /// A winning Spoiler move for pruned boards `a` vs `b`, if any, with at
    /// least one round left.
    pub(crate) fn choose(
        &self,
        a: &[Board],
        b: &[Board],
        cons: &[Option<Side>],
        v: Variant,
        budget: &Budget,
    ) -> Result<Option<Choice>, MsError> {
        let k = cons.len();
        let rest = &cons[1..];
        for side in allowed(cons[0]) {
            let (mover, other) = orient(side, a, b);
            let expanded = normalise(&duplicator_expand(other, v), k - 1, v);
            let moves: Vec<Vec<(Selection, Board)>> = mover.iter().map(|x| distinct_moves(x, k, v)).collect();
            if moves.iter().any(Vec::is_empty) {
                // a board with no legal move under the no-play-on-top rule
                continue;
            }
            if k == 1 {
                if let Some(picks) = last_round(&moves, &expanded) {
                    return Ok(Some(Choice { side, picks }));
                }
                continue;
            }
            let flat: Vec<(usize, usize)> = moves
                .iter()
                .enumerate()
                .flat_map(|(i, m)| (0..m.len()).map(move |j| (i, j)))
                .collect();
            let ok: Vec<bool> = flat
                .par_iter()
                .map(|&(i, j)| {
                    let child = std::slice::from_ref(&moves[i][j].1);
                    self.wins_oriented(side, child, &expanded, rest, v, budget)
                })
                .collect::<Result<_, _>>()?;
            let mut cand: Vec<Vec<usize>> = vec![Vec::new(); moves.len()];
            for (&(i, j), ok) in flat.iter().zip(ok) {
                if ok {
                    cand[i].push(j);
                }
            }
            if cand.iter().any(Vec::is_empty) {
                continue;
            }
            let mut order: Vec<usize> = (0..moves.len()).collect();
            order.sort_by_key(|&i| cand[i].len());
            let mut search = Dfs {
                solver: self,
                side,
                order: &order,
                cand: &cand,
                moves: &moves,
                expanded: &expanded,
                rest,
                v,
                budget,
                chosen: Vec::new(),
                chosen_keys: HashSet::new(),
                picks: vec![None; moves.len()],
            };
            if search.run(0)? {
                let picks = search.picks.into_iter().map(|p| p.expect("assigned")).collect();
                return Ok(Some(Choice { side, picks }));
            }
        }
        Ok(None)
    }
}

/// Legal Spoiler moves on `x` with `k` rounds left, one per distinct
/// normalised child.
fn distinct_moves(x: &Board, k: usize, v: Variant) -> Vec<(Selection, Board)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in x.spoiler_moves(v.atoms, v.no_play_on_top) {
        let (child, _) = normalise_one(&x.extend_unchecked(s), k - 1, v);
        if seen.insert(canonical_key(&child)) {
            out.push((s, child));
        }
    }
    out
}

/// Final round: each board independently needs a move that kills every
/// partner.
fn last_round(moves: &[Vec<(Selection, Board)>], expanded: &[Board]) -> Option<Vec<Selection>> {
    moves
        .iter()
        .map(|m| {
            m.iter()
                .find(|(_, c)| expanded.iter().all(|y| !partial_iso_unchecked(c, y)))
                .map(|(s, _)| *s)
        })
        .collect()
}

struct Dfs<'s> {
    solver: &'s MsSolver,
    side: Side,
    order: &'s [usize],
    cand: &'s [Vec<usize>],
    moves: &'s [Vec<(Selection, Board)>],
    expanded: &'s [Board],
    rest: &'s [Option<Side>],
    v: Variant,
    budget: &'s Budget,
    chosen: Vec<Board>,
    chosen_keys: HashSet<CanonicalKey>,
    picks: Vec<Option<Selection>>,
}

impl Dfs<'_> {
    /// Assigns boards `order[pos..]`. Every prefix of the assignment is
    /// checked: Spoiler wins are antitone in the board set, so a losing
    /// partial set cannot be completed.
    fn run(&mut self, pos: usize) -> Result<bool, MsError> {
        if pos == self.order.len() {
            return Ok(true);
        }
        let i = self.order[pos];
        for &j in &self.cand[i] {
            let (s, child) = &self.moves[i][j];
            let key = canonical_key(child);
            if self.chosen_keys.contains(&key) {
                self.picks[i] = Some(*s);
                if self.run(pos + 1)? {
                    return Ok(true);
                }
                continue;
            }
            self.chosen.push(child.clone());
            let ok = self
                .solver
                .wins_oriented(self.side, &self.chosen, self.expanded, self.rest, self.v, self.budget)?;
            if ok {
                self.chosen_keys.insert(key.clone());
                self.picks[i] = Some(*s);
                if self.run(pos + 1)? {
                    return Ok(true);
                }
                self.chosen_keys.remove(&key);
            }
            self.chosen.pop();
        }
        self.picks[i] = None;
        Ok(false)
    }
}

/// Winner of `state` with a fresh solver, certificate included.
pub fn ms_winner(state: &GameState, budget: &Budget) -> Result<MsVerdict, MsError> {
    MsSolver::new().solve(state, budget)
}
