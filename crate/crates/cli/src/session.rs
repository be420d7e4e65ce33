//! One interactive game between a human and the engine.

use std::collections::{BTreeMap, HashSet};

use msgames_core::{canonical_key, Board, Budget, BudgetExceeded, Selection, Side, Winner};
use msgames_lab::Trace;
use msgames_ms::doc::{format_board_spec, parse_board_spec};
use msgames_ms::{alive_pairs_idx, GameState, MsError, MsSolver, Variant};

use crate::api::{BoardView, CreateSession, HintView, MoveRequest, ReplyDoc, Role, SessionView, SpoilerMoveView};

/// Default board limit for the engine's Duplicator.
pub const DEFAULT_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SessionError {
    /// Malformed or illegal move: 400.
    BadRequest(String),
    /// Move out of turn or on a finished game: 409.
    OutOfTurn(String),
    /// Budget ran out computing a hint: 422.
    Budget(String),
}

impl From<BudgetExceeded> for SessionError {
    fn from(e: BudgetExceeded) -> Self {
        SessionError::Budget(e.to_string())
    }
}

impl From<MsError> for SessionError {
    fn from(e: MsError) -> Self {
        match e {
            MsError::Budget(b) => b.into(),
            e => SessionError::BadRequest(e.to_string()),
        }
    }
}

fn bad(msg: impl Into<String>) -> SessionError {
    SessionError::BadRequest(msg.into())
}

/// Engine Spoiler move: a side and one selection per alive board on it.
#[derive(Debug, Clone)]
struct Pending {
    side: Side,
    /// Indices into the current boards of `side`, with selections.
    moves: Vec<(usize, Selection)>,
}

#[derive(Debug, Clone)]
struct Saved {
    lines: usize,
    a: Vec<Board>,
    b: Vec<Board>,
}

#[derive(Debug, Clone)]
pub struct Session {
    pub id: String,
    pub human: Role,
    cap: usize,
    trace: Trace,
    a: Vec<Board>,
    b: Vec<Board>,
    pending: Option<Pending>,
    undo: Vec<Saved>,
    heuristic: bool,
}

pub fn parse_constraints(text: &str, rounds: usize) -> Result<Vec<Option<Side>>, SessionError> {
    if text.chars().count() != rounds {
        return Err(bad(format!("constraints `{text}` must have one character per round")));
    }
    text.chars()
        .map(|c| match c {
            'A' | 'a' => Ok(Some(Side::A)),
            'B' | 'b' => Ok(Some(Side::B)),
            '-' => Ok(None),
            _ => Err(bad(format!("constraint `{c}` is not A, B or -"))),
        })
        .collect()
}

fn parse_selection(s: &str) -> Result<Selection, SessionError> {
    s.parse::<Selection>().map_err(|e| bad(e.to_string()))
}

/// Alive board indices per side.
fn alive(a: &[Board], b: &[Board]) -> (Vec<usize>, Vec<usize>) {
    let pairs = alive_pairs_idx(a, b);
    let mut ia: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let mut ib: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    ia.sort_unstable();
    ia.dedup();
    ib.sort_unstable();
    ib.dedup();
    (ia, ib)
}

fn pick<'x>(side: Side, a: &'x [Board], b: &'x [Board]) -> (&'x [Board], &'x [Board]) {
    match side {
        Side::A => (a, b),
        Side::B => (b, a),
    }
}

/// Side and per-board choices of a winning Spoiler round.
type SpoilerRound = (Side, BTreeMap<msgames_core::CanonicalKey, Selection>);

fn solver_spoiler(st: &GameState, budget: &Budget) -> Result<Option<SpoilerRound>, MsError> {
    let v = MsSolver::new().solve(st, budget)?;
    Ok(v.certificate.and_then(|c| c.rounds.into_iter().next()).map(|r| (r.side, r.choices)))
}

/// Centre-out first legal move, for positions Spoiler cannot win.
fn fallback_move(x: &Board, v: Variant) -> Selection {
    let n = x.base().size();
    let mut m = x.spoiler_moves(v.atoms, v.no_play_on_top);
    m.sort_by_key(|s| match *s {
        Selection::Element(e) => (0, (2 * e).abs_diff(n.saturating_sub(1)), e),
        Selection::Atom(a) => (1, 0, a),
    });
    m[0]
}

fn verdict(st: &GameState, budget: &Budget) -> Result<Winner, MsError> {
    MsSolver::new().winner(st, budget)
}

impl Session {
    pub fn create(id: String, req: &CreateSession, cap: usize, budget: &Budget) -> Result<Session, SessionError> {
        let boards = |specs: &[String]| -> Result<Vec<Board>, SessionError> {
            specs.iter().map(|s| parse_board_spec(s).map_err(|e| bad(e.to_string()))).collect()
        };
        let cons = match &req.constraints {
            Some(c) => parse_constraints(c, req.rounds)?,
            None => vec![None; req.rounds],
        };
        let v = Variant { atoms: req.atoms, no_play_on_top: req.no_play_on_top };
        let st = GameState::new(boards(&req.a)?, boards(&req.b)?, cons, v).map_err(|e| bad(e.to_string()))?;
        let mut s = Session {
            id,
            human: req.human,
            cap: cap.max(1),
            trace: Trace::new(&st),
            a: st.side_a().to_vec(),
            b: st.side_b().to_vec(),
            pending: None,
            undo: Vec::new(),
            heuristic: false,
        };
        s.trace.meta.insert("session".into(), s.id.clone());
        s.trace.meta.insert("human".into(), role_name(req.human).into());
        s.engine_turn(budget);
        Ok(s)
    }

    /// Restores a session from its trace file.
    pub fn restore(text: &str, cap: usize, budget: &Budget) -> Result<Session, SessionError> {
        let trace = Trace::parse(text).map_err(|e| bad(e.to_string()))?;
        let id = trace.meta.get("session").cloned().ok_or_else(|| bad("trace has no session id"))?;
        let human = match trace.meta.get("human").map(String::as_str) {
            Some("spoiler") => Role::Spoiler,
            Some("duplicator") => Role::Duplicator,
            _ => return Err(bad("trace has no human role")),
        };
        let snaps = trace.replay().map_err(|e| bad(e.to_string()))?;
        let mut undo = Vec::new();
        let mut lines = 0;
        for (round, snap) in snaps.iter().enumerate().take(snaps.len() - 1) {
            undo.push(Saved { lines, a: snap.a.clone(), b: snap.b.clone() });
            lines += trace.lines.iter().filter(|l| l.round == round + 1).count();
        }
        let last = snaps.last().expect("initial snapshot");
        let mut s = Session {
            id,
            human,
            cap: cap.max(1),
            a: last.a.clone(),
            b: last.b.clone(),
            trace,
            pending: None,
            undo,
            heuristic: false,
        };
        s.engine_turn(budget);
        Ok(s)
    }

    /// Trace text with the session id and role, for persistence.
    pub fn to_trace_text(&self) -> String {
        self.trace.render()
    }

    fn variant(&self) -> Variant {
        self.trace.variant
    }

    fn played(&self) -> usize {
        self.trace.rounds_played()
    }

    pub fn rounds_left(&self) -> usize {
        self.trace.rounds - self.played()
    }

    fn rest(&self) -> Vec<Option<Side>> {
        self.trace.constraints[self.played()..].to_vec()
    }

    pub fn finished(&self) -> bool {
        self.rounds_left() == 0 || alive_pairs_idx(&self.a, &self.b).is_empty()
    }

    pub fn winner(&self) -> Option<Winner> {
        if !self.finished() {
            return None;
        }
        Some(if alive_pairs_idx(&self.a, &self.b).is_empty() { Winner::Spoiler } else { Winner::Duplicator })
    }

    fn turn(&self) -> &'static str {
        if self.finished() {
            "finished"
        } else if self.pending.is_some() {
            "duplicator"
        } else {
            "spoiler"
        }
    }

    /// State of the alive boards with the rounds still to play.
    fn alive_state(&self) -> (GameState, Vec<usize>, Vec<usize>) {
        let (ia, ib) = alive(&self.a, &self.b);
        let a = ia.iter().map(|&i| self.a[i].clone()).collect();
        let b = ib.iter().map(|&i| self.b[i].clone()).collect();
        let st = GameState::new(a, b, self.rest(), self.variant()).expect("alive boards form a valid state");
        (st, ia, ib)
    }

    /// Plays the engine's Spoiler move when the human is Duplicator.
    fn engine_turn(&mut self, budget: &Budget) {
        self.pending = None;
        if self.human != Role::Duplicator || self.finished() {
            return;
        }
        let (mv, heuristic) = self.best_spoiler(budget);
        self.heuristic = heuristic;
        self.pending = Some(mv);
    }

    /// A winning Spoiler move if the solver finds one, otherwise a fallback.
    /// The flag is set when the budget ran out.
    fn best_spoiler(&self, budget: &Budget) -> (Pending, bool) {
        let (st, ia, ib) = self.alive_state();
        let v = self.variant();
        let (found, heuristic) = match solver_spoiler(&st, budget) {
            Ok(f) => (f, false),
            Err(_) => (None, true),
        };
        let side = found.as_ref().map(|f| f.0).or(self.rest()[0]).unwrap_or(Side::A);
        let (boards, idx) = match side {
            Side::A => (&self.a, &ia),
            Side::B => (&self.b, &ib),
        };
        let moves = idx
            .iter()
            .map(|&i| {
                let x = &boards[i];
                let s = found.as_ref().and_then(|f| f.1.get(&canonical_key(x)).copied()).unwrap_or_else(|| fallback_move(x, v));
                (i, s)
            })
            .collect();
        (Pending { side, moves }, heuristic)
    }

    /// Alive oblivious replies, trimmed to the board cap where that keeps
    /// the verdict. Returns `(other index, selection)` pairs and whether
    /// the trim could not be verified.
    fn duplicator_replies(&self, side: Side, moved: &[Board], budget: &Budget) -> (Vec<(usize, Selection)>, bool) {
        let v = self.variant();
        let (ia, ib) = alive(&self.a, &self.b);
        let (other, oidx) = match side {
            Side::A => (&self.b, ib),
            Side::B => (&self.a, ia),
        };
        let mut seen = HashSet::new();
        let mut out: Vec<(usize, Selection, Board)> = Vec::new();
        for &j in &oidx {
            for t in other[j].extensions(v.atoms) {
                let c = other[j].extend_unchecked(t);
                let live = moved.iter().any(|x| msgames_core::partial_iso_unchecked(x, &c));
                if live && seen.insert(canonical_key(&c)) {
                    out.push((j, t, c));
                }
            }
        }
        let mut heuristic = false;
        if out.len() > self.cap {
            let rest = self.trace.constraints[self.played() + 1..].to_vec();
            let state_of = |keep: &[(usize, Selection, Board)]| {
                let replies: Vec<Board> = keep.iter().map(|k| k.2.clone()).collect();
                let (a, b) = match side {
                    Side::A => (moved.to_vec(), replies),
                    Side::B => (replies, moved.to_vec()),
                };
                GameState::new(a, b, rest.clone(), v)
            };
            match state_of(&out).map(|st| verdict(&st, budget)) {
                Ok(Ok(Winner::Duplicator)) => {
                    let mut k = out.len();
                    while k > 0 && out.len() > self.cap {
                        k -= 1;
                        let mut trial = out.clone();
                        trial.remove(k);
                        if trial.is_empty() {
                            continue;
                        }
                        match state_of(&trial).map(|st| verdict(&st, budget)) {
                            Ok(Ok(Winner::Duplicator)) => out = trial,
                            Ok(Ok(Winner::Spoiler)) => {}
                            _ => {
                                heuristic = true;
                                break;
                            }
                        }
                    }
                    if out.len() > self.cap {
                        heuristic = true;
                    }
                }
                Ok(Ok(Winner::Spoiler)) => {}
                _ => heuristic = true,
            }
            out.truncate(self.cap);
        }
        (out.into_iter().map(|(j, t, _)| (j, t)).collect(), heuristic)
    }

    fn save(&mut self) {
        self.undo.push(Saved { lines: self.trace.lines.len(), a: self.a.clone(), b: self.b.clone() });
    }

    /// Records one round and moves to the new boards.
    fn commit(&mut self, side: Side, spoiler: &[(usize, Selection)], duplicator: &[(usize, Selection)]) {
        self.trace.push_round(side, spoiler, duplicator);
        let (mover, other) = pick(side, &self.a, &self.b);
        let moved: Vec<Board> = spoiler.iter().map(|&(i, s)| mover[i].extend_unchecked(s)).collect();
        let replies: Vec<Board> = duplicator.iter().map(|&(j, t)| other[j].extend_unchecked(t)).collect();
        (self.a, self.b) = match side {
            Side::A => (moved, replies),
            Side::B => (replies, moved),
        };
    }

    pub fn apply(&mut self, req: &MoveRequest, budget: &Budget) -> Result<(), SessionError> {
        if self.finished() {
            return Err(SessionError::OutOfTurn("the game is over".into()));
        }
        match (&req.side, &req.selections, &req.replies) {
            (Some(side), Some(sel), None) => {
                if self.human != Role::Spoiler {
                    return Err(SessionError::OutOfTurn("the human plays Duplicator in this session".into()));
                }
                let side: Side = side.parse().map_err(|_| bad(format!("unknown side `{side}`")))?;
                let sels = sel
                    .iter()
                    .map(|(k, v)| Ok((k.parse::<usize>().map_err(|_| bad(format!("bad board id `{k}`")))?, parse_selection(v)?)))
                    .collect::<Result<BTreeMap<usize, Selection>, SessionError>>()?;
                self.spoiler_move(side, &sels, budget)
            }
            (None, None, Some(replies)) => {
                if self.human != Role::Duplicator {
                    return Err(SessionError::OutOfTurn("the human plays Spoiler in this session".into()));
                }
                let r = replies
                    .iter()
                    .map(|d| Ok((d.board, parse_selection(&d.selection)?)))
                    .collect::<Result<Vec<_>, SessionError>>()?;
                self.duplicator_move(&r, budget)
            }
            _ => Err(bad("a move is either `side` with `selections`, or `replies`")),
        }
    }

    /// Human Spoiler move; `sels` maps 1-based board ids to selections and
    /// must cover exactly the alive boards of `side`.
    pub fn spoiler_move(&mut self, side: Side, sels: &BTreeMap<usize, Selection>, budget: &Budget) -> Result<(), SessionError> {
        if self.finished() {
            return Err(SessionError::OutOfTurn("the game is over".into()));
        }
        if let Some(c) = self.rest()[0] {
            if c != side {
                return Err(bad(format!("this round must be played on side {c}")));
            }
        }
        let (ia, ib) = alive(&self.a, &self.b);
        let idx = if side == Side::A { ia } else { ib };
        let wanted: Vec<usize> = idx.iter().map(|i| i + 1).collect();
        let given: Vec<usize> = sels.keys().copied().collect();
        if wanted != given {
            return Err(bad(format!("selections must cover exactly the alive boards {wanted:?} of side {side}")));
        }
        let v = self.variant();
        let (mover, _) = pick(side, &self.a, &self.b);
        let mut moves = Vec::new();
        for &i in &idx {
            let s = sels[&(i + 1)];
            if !mover[i].spoiler_moves(v.atoms, v.no_play_on_top).contains(&s) {
                return Err(bad(format!("{s} is not a legal Spoiler move on board {side}{}", i + 1)));
            }
            moves.push((i, s));
        }
        let moved: Vec<Board> = moves.iter().map(|&(i, s)| mover[i].extend_unchecked(s)).collect();
        let (replies, heuristic) = self.duplicator_replies(side, &moved, budget);
        self.save();
        self.heuristic = heuristic;
        self.commit(side, &moves, &replies);
        Ok(())
    }

    /// Human Duplicator reply to the pending engine move; `replies` are
    /// 1-based ids of alive boards on the other side with selections.
    pub fn duplicator_move(&mut self, replies: &[(usize, Selection)], budget: &Budget) -> Result<(), SessionError> {
        let p = self.pending.clone().ok_or_else(|| SessionError::OutOfTurn("no Spoiler move to answer".into()))?;
        if replies.len() > self.cap {
            return Err(bad(format!("at most {} boards per reply", self.cap)));
        }
        let (ia, ib) = alive(&self.a, &self.b);
        let oidx = if p.side == Side::A { ib } else { ia };
        let (_, other) = pick(p.side, &self.a, &self.b);
        let v = self.variant();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for &(id, t) in replies {
            let j = id.checked_sub(1).filter(|j| oidx.contains(j)).ok_or_else(|| bad(format!("board {}{id} is not alive", p.side.other())))?;
            if !other[j].extensions(v.atoms).contains(&t) {
                return Err(bad(format!("{t} is not a legal selection on board {}{id}", p.side.other())));
            }
            if seen.insert((j, t)) {
                out.push((j, t));
            }
        }
        self.save();
        self.commit(p.side, &p.moves, &out);
        self.engine_turn(budget);
        Ok(())
    }

    pub fn undo(&mut self, budget: &Budget) -> Result<(), SessionError> {
        let s = self.undo.pop().ok_or_else(|| SessionError::OutOfTurn("nothing to undo".into()))?;
        self.trace.lines.truncate(s.lines);
        self.a = s.a;
        self.b = s.b;
        self.heuristic = false;
        self.engine_turn(budget);
        Ok(())
    }

    /// A move for the human's role: winning if one exists within the
    /// budget, else a best-effort move flagged `losing`.
    pub fn hint(&self, budget: &Budget) -> Result<HintView, SessionError> {
        if self.finished() {
            return Err(SessionError::OutOfTurn("the game is over".into()));
        }
        match self.human {
            Role::Spoiler => {
                let (st, ia, ib) = self.alive_state();
                let found = solver_spoiler(&st, budget)?;
                let (p, _) = self.best_spoiler(&Budget::new(0, None));
                let (side, moves) = match &found {
                    Some((side, choices)) => {
                        let (boards, idx) = if *side == Side::A { (&self.a, &ia) } else { (&self.b, &ib) };
                        (*side, idx.iter().map(|&i| (i, choices[&canonical_key(&boards[i])])).collect())
                    }
                    None => (p.side, p.moves),
                };
                Ok(HintView { role: Role::Spoiler, spoiler: Some(spoiler_view(side, &moves)), replies: None, losing: found.is_none() })
            }
            Role::Duplicator => {
                let p = self.pending.as_ref().expect("Duplicator to move");
                let (mover, _) = pick(p.side, &self.a, &self.b);
                let moved: Vec<Board> = p.moves.iter().map(|&(i, s)| mover[i].extend_unchecked(s)).collect();
                let (replies, _) = self.duplicator_replies(p.side, &moved, budget);
                let (other, rest) = (p.side, self.trace.constraints[self.played() + 1..].to_vec());
                let boards: Vec<Board> = {
                    let (_, o) = pick(other, &self.a, &self.b);
                    replies.iter().map(|&(j, t)| o[j].extend_unchecked(t)).collect()
                };
                let (a, b) = match p.side {
                    Side::A => (moved, boards),
                    Side::B => (boards, moved),
                };
                let losing = if a.is_empty() || b.is_empty() {
                    true
                } else {
                    verdict(&GameState::new(a, b, rest, self.variant()).map_err(|e| bad(e.to_string()))?, budget)? == Winner::Spoiler
                };
                let docs = replies.iter().map(|&(j, t)| ReplyDoc { board: j + 1, selection: t.to_string() }).collect();
                Ok(HintView { role: Role::Duplicator, spoiler: None, replies: Some(docs), losing })
            }
        }
    }

    pub fn view(&self) -> SessionView {
        let pairs = alive_pairs_idx(&self.a, &self.b);
        let (ia, ib) = alive(&self.a, &self.b);
        let boards = |bs: &[Board], live: &[usize]| {
            bs.iter()
                .enumerate()
                .map(|(i, b)| BoardView {
                    id: i + 1,
                    spec: format_board_spec(b),
                    size: b.base().size(),
                    history: b.history().iter().map(|s| s.to_string()).collect(),
                    alive: live.contains(&i),
                })
                .collect()
        };
        let v = self.variant();
        SessionView {
            id: self.id.clone(),
            human: self.human,
            rounds: self.trace.rounds,
            rounds_left: self.rounds_left(),
            atoms: v.atoms,
            no_play_on_top: v.no_play_on_top,
            turn: self.turn().into(),
            winner: self.winner().map(|w| w.to_string()),
            a: boards(&self.a, &ia),
            b: boards(&self.b, &ib),
            alive_pairs: pairs.iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
            pending: self.pending.as_ref().map(|p| spoiler_view(p.side, &p.moves)),
            heuristic: self.heuristic,
            log: self.trace.render(),
        }
    }
}

fn spoiler_view(side: Side, moves: &[(usize, Selection)]) -> SpoilerMoveView {
    SpoilerMoveView { side: side.to_string(), selections: moves.iter().map(|&(i, s)| ((i + 1).to_string(), s.to_string())).collect() }
}

fn role_name(r: Role) -> &'static str {
    match r {
        Role::Spoiler => "spoiler",
        Role::Duplicator => "duplicator",
    }
}
