//! Exact solver for Ehrenfeucht-Fraisse games on pairs of boards.
//!
//! Positions on plain linear orders are normalised before lookup: gaps are
//! capped for the rounds left and a pair is identified with its mirror
//! image. Moves and replies that lead to the same normalised board are
//! tried once.

use dashmap::DashMap;
use msgames_core::linear::{cap_gaps, reflect};
use msgames_core::{
    canonical_key, partial_iso, partial_iso_unchecked, Board, Budget, BudgetExceeded, CanonicalKey, CoreError,
    Quantifier, Selection, Side, Winner,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EfError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// A Spoiler strategy from one position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// The selections so far already fail to be a partial isomorphism.
    Dead,
    /// Spoiler plays `selection` on `side`; one subtree per Duplicator reply
    /// that keeps the position alive. Replies not listed lose at once.
    Move {
        side: Side,
        selection: Selection,
        replies: Vec<(Selection, Witness)>,
    },
}

impl Witness {
    /// Longest Spoiler line in the tree.
    pub fn depth(&self) -> usize {
        match self {
            Witness::Dead => 0,
            Witness::Move { replies, .. } => 1 + replies.iter().map(|(_, w)| w.depth()).max().unwrap_or(0),
        }
    }

    /// Renders the tree as indented lines, 1-based.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, indent: usize, out: &mut String) {
        match self {
            Witness::Dead => {}
            Witness::Move { side, selection, replies } => {
                out.push_str(&format!("{:indent$}S {side} {selection}\n", ""));
                for (t, w) in replies {
                    out.push_str(&format!("{:w$}D {} {t}\n", "", side.other(), w = indent + 2));
                    w.render_into(indent + 4, out);
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfVerdict {
    pub winner: Winner,
    /// Present iff Spoiler wins.
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct MemoKey {
    a: CanonicalKey,
    b: CanonicalKey,
    sides: Vec<u8>,
}

/// Minimax search with a transposition table. The table only ever stores
/// exact values, so one solver can be shared across calls and threads.
#[derive(Debug, Default)]
pub struct EfSolver {
    memo: DashMap<MemoKey, bool>,
}

fn side_code(s: Option<Side>) -> u8 {
    match s {
        None => 0,
        Some(Side::A) => 1,
        Some(Side::B) => 2,
    }
}

impl EfSolver {
    pub fn new() -> EfSolver {
        EfSolver::default()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Winner of the `r`-round game from `(a, b)`, with a Spoiler witness.
    pub fn solve(&self, a: &Board, b: &Board, r: usize, budget: &Budget) -> Result<EfVerdict, EfError> {
        self.solve_constrained(a, b, &vec![None; r], budget)
    }

    /// Winner only; skips building the witness.
    pub fn winner(&self, a: &Board, b: &Board, r: usize, budget: &Budget) -> Result<Winner, EfError> {
        partial_iso(a, b)?;
        let sides = vec![None; r];
        Ok(if self.wins(a, b, &sides, budget)? { Winner::Spoiler } else { Winner::Duplicator })
    }

    /// Game where round `i` must be played on side `sides[i]` when set.
    pub fn solve_constrained(
        &self,
        a: &Board,
        b: &Board,
        sides: &[Option<Side>],
        budget: &Budget,
    ) -> Result<EfVerdict, EfError> {
        partial_iso(a, b)?;
        if self.wins(a, b, sides, budget)? {
            let w = self.witness(a, b, sides, budget)?;
            Ok(EfVerdict { winner: Winner::Spoiler, witness: Some(w) })
        } else {
            Ok(EfVerdict { winner: Winner::Duplicator, witness: None })
        }
    }

    fn key(&self, a: &Board, b: &Board, sides: &[Option<Side>]) -> MemoKey {
        let sides: Vec<u8> = sides.iter().map(|&s| side_code(s)).collect();
        let (ka, kb) = (canonical_key(a), canonical_key(b));
        if a.is_linear() && b.is_linear() {
            let (ra, rb) = (canonical_key(&reflect(a)), canonical_key(&reflect(b)));
            if (&ra, &rb) < (&ka, &kb) {
                return MemoKey { a: ra, b: rb, sides };
            }
        }
        MemoKey { a: ka, b: kb, sides }
    }

    fn wins(&self, a: &Board, b: &Board, sides: &[Option<Side>], budget: &Budget) -> Result<bool, EfError> {
        budget.tick()?;
        if !partial_iso_unchecked(a, b) {
            return Ok(true);
        }
        let k = sides.len();
        if k == 0 {
            return Ok(false);
        }
        let (a, _) = cap_gaps(a, k as u32);
        let (b, _) = cap_gaps(b, k as u32);
        let key = self.key(&a, &b, sides);
        if let Some(v) = self.memo.get(&key) {
            return Ok(*v);
        }
        let result = self.search(&a, &b, sides, budget)?;
        self.memo.insert(key, result);
        Ok(result)
    }

    fn search(&self, a: &Board, b: &Board, sides: &[Option<Side>], budget: &Budget) -> Result<bool, EfError> {
        let k = sides.len();
        let rest = &sides[1..];
        for side in allowed(sides[0]) {
            let (mover, other) = match side {
                Side::A => (a, b),
                Side::B => (b, a),
            };
            let replies = distinct_children(other, k);
            for (_, moved) in distinct_children(mover, k) {
                let mut all = true;
                for (_, replied) in &replies {
                    let (x, y) = match side {
                        Side::A => (&moved, replied),
                        Side::B => (replied, &moved),
                    };
                    if !self.wins(x, y, rest, budget)? {
                        all = false;
                        break;
                    }
                }
                if all {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    fn witness(&self, a: &Board, b: &Board, sides: &[Option<Side>], budget: &Budget) -> Result<Witness, EfError> {
        if !partial_iso_unchecked(a, b) {
            return Ok(Witness::Dead);
        }
        let rest = &sides[1..];
        for side in allowed(sides[0]) {
            let (mover, other) = match side {
                Side::A => (a, b),
                Side::B => (b, a),
            };
            'moves: for s in mover.extensions(false) {
                let moved = mover.extend_unchecked(s);
                let mut alive = Vec::new();
                for t in other.extensions(false) {
                    let replied = other.extend_unchecked(t);
                    let (x, y) = match side {
                        Side::A => (&moved, &replied),
                        Side::B => (&replied, &moved),
                    };
                    if !self.wins(x, y, rest, budget)? {
                        continue 'moves;
                    }
                    if partial_iso_unchecked(x, y) {
                        alive.push((t, x.clone(), y.clone()));
                    }
                }
                let mut replies = Vec::with_capacity(alive.len());
                for (t, x, y) in alive {
                    replies.push((t, self.witness(&x, &y, rest, budget)?));
                }
                return Ok(Witness::Move { side, selection: s, replies });
            }
        }
        unreachable!("witness requested for a Duplicator position")
    }
}

fn allowed(c: Option<Side>) -> Vec<Side> {
    match c {
        Some(s) => vec![s],
        None => vec![Side::A, Side::B],
    }
}

/// Single-selection extensions of `board`, one per normalised child for
/// `k - 1` rounds left.
fn distinct_children(board: &Board, k: usize) -> Vec<(Selection, Board)> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for s in board.extensions(false) {
        let child = board.extend_unchecked(s);
        let (capped, _) = cap_gaps(&child, (k - 1) as u32);
        if seen.insert(canonical_key(&capped)) {
            out.push((s, capped));
        }
    }
    out
}

/// Winner of the `r`-round game with a fresh solver.
pub fn ef_winner(a: &Board, b: &Board, r: usize, budget: &Budget) -> Result<EfVerdict, EfError> {
    EfSolver::new().solve(a, b, r, budget)
}

/// Winner of the game whose round `i` is played in `a` for `Exists` and in
/// `b` for `Forall`.
pub fn ef_prefix_winner(a: &Board, b: &Board, prefix: &[Quantifier], budget: &Budget) -> Result<EfVerdict, EfError> {
    if prefix.is_empty() {
        return Err(CoreError::Usage("empty quantifier prefix".into()).into());
    }
    let sides: Vec<Option<Side>> = prefix.iter().map(|q| Some(q.side())).collect();
    EfSolver::new().solve_constrained(a, b, &sides, budget)
}
