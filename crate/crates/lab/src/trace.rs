//! Line-oriented game traces.
//!
//! ```text
//! # trace v1
//! # a lo:10
//! # b lo:9
//! # rounds 4
//! # variant plain
//! 1 S B 1 5
//! 1 D A 1 1
//! 1 D A 2 2 1
//! ```
//!
//! Header lines name the starting boards of each side (ids `1..`), the
//! round count, the variant (`plain`, or any of `atoms`, `no-play-on-top`)
//! and optionally per-round side constraints (`# constraints AB-`). Other
//! `# key value` lines are kept as metadata.
//!
//! A move line `<round> <S|D> <A|B> <id> <selection> [<parent>]` creates
//! board `id` of the given side for that round by extending board
//! `parent` of the previous round (default: `id`). Selections are 1-based
//! positions or `aN` for atom `N`. The boards of a side after a round are
//! exactly those created in it, so a dropped board is simply not extended.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use msgames_core::{Board, Selection, Side};
use msgames_ms::doc::{format_board_spec, parse_board_spec};
use msgames_ms::{GameState, Variant};

use crate::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Actor {
    Spoiler,
    Duplicator,
}

impl Actor {
    fn letter(self) -> char {
        match self {
            Actor::Spoiler => 'S',
            Actor::Duplicator => 'D',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLine {
    /// 1-based round number.
    pub round: usize,
    pub actor: Actor,
    pub side: Side,
    /// 1-based id of the board this line creates.
    pub board: usize,
    pub selection: Selection,
    /// 1-based id of the extended board in the previous round.
    pub parent: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub a: Vec<Board>,
    pub b: Vec<Board>,
    pub rounds: usize,
    pub variant: Variant,
    pub constraints: Vec<Option<Side>>,
    pub meta: BTreeMap<String, String>,
    pub lines: Vec<TraceLine>,
}

/// Boards of both sides after some number of rounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub a: Vec<Board>,
    pub b: Vec<Board>,
}

fn bad(line: usize, msg: impl Into<String>) -> LabError {
    LabError::Trace { line, msg: msg.into() }
}

impl Trace {
    /// An empty trace starting from `state`.
    pub fn new(state: &GameState) -> Trace {
        Trace {
            a: state.side_a().to_vec(),
            b: state.side_b().to_vec(),
            rounds: state.rounds_left(),
            variant: state.variant(),
            constraints: state.constraints().to_vec(),
            meta: BTreeMap::new(),
            lines: Vec::new(),
        }
    }

    pub fn state(&self) -> Result<GameState, LabError> {
        Ok(GameState::new(self.a.clone(), self.b.clone(), self.constraints.clone(), self.variant)?)
    }

    /// Number of rounds with at least one move line.
    pub fn rounds_played(&self) -> usize {
        self.lines.iter().map(|l| l.round).max().unwrap_or(0)
    }

    /// Appends one round: Spoiler's moves on `side` and Duplicator's
    /// boards on the other side, as `(parent index, selection)` pairs
    /// with 0-based parent indices into the previous round's boards.
    pub fn push_round(&mut self, side: Side, spoiler: &[(usize, Selection)], duplicator: &[(usize, Selection)]) {
        let round = self.rounds_played() + 1;
        for (actor, s, moves) in [(Actor::Spoiler, side, spoiler), (Actor::Duplicator, side.other(), duplicator)] {
            for (i, &(parent, selection)) in moves.iter().enumerate() {
                self.lines.push(TraceLine { round, actor, side: s, board: i + 1, selection, parent: parent + 1 });
            }
        }
    }

    /// Spoiler moves that select an element already selected on the same
    /// board.
    pub fn on_top_moves(&self) -> Result<Vec<TraceLine>, LabError> {
        let snaps = self.replay()?;
        Ok(self
            .lines
            .iter()
            .filter(|l| l.actor == Actor::Spoiler && matches!(l.selection, Selection::Element(_)))
            .filter(|l| {
                let prev = &snaps[l.round - 1];
                let boards = match l.side {
                    Side::A => &prev.a,
                    Side::B => &prev.b,
                };
                boards[l.parent - 1].is_selected(l.selection)
            })
            .cloned()
            .collect())
    }

    /// Snapshots before the first round and after each played round.
    /// Checks ids, parents, sides and move legality.
    pub fn replay(&self) -> Result<Vec<Snapshot>, LabError> {
        let v = self.variant;
        let mut snaps = vec![Snapshot { a: self.a.clone(), b: self.b.clone() }];
        let mut idx = 0;
        for round in 1..=self.rounds_played() {
            let prev = snaps.last().expect("non-empty").clone();
            let mut next: [Vec<Board>; 2] = [Vec::new(), Vec::new()];
            let mut spoiler_side = None;
            while idx < self.lines.len() && self.lines[idx].round == round {
                let l = &self.lines[idx];
                idx += 1;
                let n = idx;
                let slot = match l.side {
                    Side::A => 0,
                    Side::B => 1,
                };
                let mover = match l.actor {
                    Actor::Spoiler => l.side,
                    Actor::Duplicator => l.side.other(),
                };
                match spoiler_side {
                    None => spoiler_side = Some(mover),
                    Some(s) if s != mover => return Err(bad(n, "Spoiler moves on both sides in one round")),
                    _ => {}
                }
                if let Some(Some(c)) = self.constraints.get(round - 1) {
                    if *c != mover {
                        return Err(bad(n, format!("round {round} must be played on side {c}")));
                    }
                }
                if l.board != next[slot].len() + 1 {
                    return Err(bad(n, format!("expected board id {}", next[slot].len() + 1)));
                }
                let parents = if slot == 0 { &prev.a } else { &prev.b };
                let parent = l
                    .parent
                    .checked_sub(1)
                    .and_then(|p| parents.get(p))
                    .ok_or_else(|| bad(n, format!("no board {} on side {} before round {round}", l.parent, l.side)))?;
                if l.actor == Actor::Spoiler && !parent.spoiler_moves(v.atoms, v.no_play_on_top).contains(&l.selection) {
                    return Err(bad(n, format!("illegal Spoiler move {}", l.selection)));
                }
                let child = parent.extend(l.selection, v.atoms).map_err(|e| bad(n, e.to_string()))?;
                next[slot].push(child);
            }
            if idx < self.lines.len() && self.lines[idx].round < round {
                return Err(bad(idx + 1, "rounds out of order"));
            }
            let [a, b] = next;
            snaps.push(Snapshot { a, b });
        }
        if idx != self.lines.len() {
            return Err(bad(idx + 1, "rounds out of order"));
        }
        if self.rounds_played() > self.rounds {
            return Err(bad(self.lines.len(), "more rounds than the game has"));
        }
        Ok(snaps)
    }

    pub fn render(&self) -> String {
        let mut out = String::from("# trace v1\n");
        for b in &self.a {
            let _ = writeln!(out, "# a {}", format_board_spec(b));
        }
        for b in &self.b {
            let _ = writeln!(out, "# b {}", format_board_spec(b));
        }
        let _ = writeln!(out, "# rounds {}", self.rounds);
        let mut flags = Vec::new();
        if self.variant.atoms {
            flags.push("atoms");
        }
        if self.variant.no_play_on_top {
            flags.push("no-play-on-top");
        }
        let _ = writeln!(out, "# variant {}", if flags.is_empty() { "plain".to_string() } else { flags.join(" ") });
        if self.constraints.iter().any(Option::is_some) {
            let c: String = self.constraints.iter().map(|c| c.map_or('-', Side::letter)).collect();
            let _ = writeln!(out, "# constraints {c}");
        }
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k} {v}");
        }
        for l in &self.lines {
            let _ = write!(out, "{} {} {} {} {}", l.round, l.actor.letter(), l.side, l.board, l.selection);
            if l.parent != l.board {
                let _ = write!(out, " {}", l.parent);
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Trace, LabError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
        match lines.next() {
            Some((_, "# trace v1")) => {}
            Some((n, _)) => return Err(bad(n, "expected `# trace v1`")),
            None => return Err(bad(0, "empty trace")),
        }
        let mut t = Trace {
            a: Vec::new(),
            b: Vec::new(),
            rounds: 0,
            variant: Variant::default(),
            constraints: Vec::new(),
            meta: BTreeMap::new(),
            lines: Vec::new(),
        };
        let mut rounds = None;
        let mut constraints = None;
        for (n, line) in lines {
            if let Some(h) = line.strip_prefix('#') {
                if !t.lines.is_empty() {
                    return Err(bad(n, "header after moves"));
                }
                let h = h.trim();
                let (key, value) = h.split_once(char::is_whitespace).unwrap_or((h, ""));
                let value = value.trim();
                match key {
                    "a" => t.a.push(parse_board_spec(value).map_err(|e| bad(n, e.to_string()))?),
                    "b" => t.b.push(parse_board_spec(value).map_err(|e| bad(n, e.to_string()))?),
                    "rounds" => rounds = Some(value.parse::<usize>().map_err(|_| bad(n, "bad round count"))?),
                    "variant" => {
                        for w in value.split_whitespace() {
                            match w {
                                "plain" => {}
                                "atoms" => t.variant.atoms = true,
                                "no-play-on-top" => t.variant.no_play_on_top = true,
                                other => return Err(bad(n, format!("unknown variant flag `{other}`"))),
                            }
                        }
                    }
                    "constraints" => {
                        let c = value
                            .chars()
                            .map(|c| match c {
                                'A' => Ok(Some(Side::A)),
                                'B' => Ok(Some(Side::B)),
                                '-' => Ok(None),
                                _ => Err(bad(n, format!("bad constraint `{c}`"))),
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        constraints = Some(c);
                    }
                    "" => return Err(bad(n, "empty header")),
                    k => {
                        t.meta.insert(k.to_string(), value.to_string());
                    }
                }
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 5 && f.len() != 6 {
                return Err(bad(n, "expected `<round> <S|D> <A|B> <board> <selection> [<parent>]`"));
            }
            let num = |s: &str| s.parse::<usize>().ok().filter(|&x| x > 0).ok_or_else(|| bad(n, format!("bad number `{s}`")));
            let actor = match f[1] {
                "S" => Actor::Spoiler,
                "D" => Actor::Duplicator,
                other => return Err(bad(n, format!("bad actor `{other}`"))),
            };
            let side: Side = f[2].parse().map_err(|_| bad(n, format!("bad side `{}`", f[2])))?;
            let board = num(f[3])?;
            let selection: Selection = f[4].parse().map_err(|_| bad(n, format!("bad selection `{}`", f[4])))?;
            let parent = if f.len() == 6 { num(f[5])? } else { board };
            let round = num(f[0])?;
            if t.lines.last().is_some_and(|l: &TraceLine| l.round > round) {
                return Err(bad(n, "rounds out of order"));
            }
            t.lines.push(TraceLine { round, actor, side, board, selection, parent });
        }
        t.rounds = rounds.ok_or_else(|| bad(0, "missing `# rounds`"))?;
        t.constraints = constraints.unwrap_or_else(|| vec![None; t.rounds]);
        if t.constraints.len() != t.rounds {
            return Err(bad(0, "constraints must have one entry per round"));
        }
        if t.a.is_empty() || t.b.is_empty() {
            return Err(bad(0, "both sides need at least one board"));
        }
        Ok(t)
    }
}
