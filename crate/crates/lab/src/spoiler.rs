//! Spoiler scripts and the harness that plays them.

use std::collections::HashSet;

use msgames_core::{canonical_key, partial_iso_unchecked, Board, Selection, Side, Winner};
use msgames_ms::{alive_pairs_idx, GameState, Variant};

use crate::duplicator::{apply_replies, DuplicatorScript};
use crate::trace::Trace;
use crate::LabError;

/// A Spoiler strategy given as a rule over the current alive boards.
pub trait SpoilerScript: Sync {
    fn name(&self) -> &str;

    /// Rejects states outside the script's domain.
    fn check(&self, state: &GameState) -> Result<(), LabError>;

    /// Side to play and one selection per alive board of that side, for
    /// round `round` (0-based). `a` and `b` hold only alive boards.
    fn play(&self, round: usize, a: &[Board], b: &[Board], v: Variant) -> Result<(Side, Vec<Selection>), LabError>;
}

#[derive(Debug, Clone)]
pub struct SpoilerRun {
    pub winner: Winner,
    /// Alive cross pairs after the last round played.
    pub alive_pairs: usize,
    pub trace: Trace,
}

/// Plays `script` against the oblivious Duplicator, who answers every
/// board with all of its extensions. This Duplicator is at least as strong
/// as any other, so a Spoiler win here is a win against every Duplicator.
pub fn run_spoiler(script: &dyn SpoilerScript, state: &GameState) -> Result<SpoilerRun, LabError> {
    run(script, None, state)
}

/// Plays `script` against a scripted Duplicator.
pub fn run_spoiler_against(
    script: &dyn SpoilerScript,
    dup: &dyn DuplicatorScript,
    state: &GameState,
) -> Result<SpoilerRun, LabError> {
    run(script, Some(dup), state)
}

fn run(script: &dyn SpoilerScript, dup: Option<&dyn DuplicatorScript>, state: &GameState) -> Result<SpoilerRun, LabError> {
    script.check(state)?;
    if let Some(d) = dup {
        d.check(state)?;
    }
    let v = state.variant();
    let mut trace = Trace::new(state);
    trace.meta.insert("spoiler".into(), script.name().to_string());
    if let Some(d) = dup {
        trace.meta.insert("duplicator".into(), d.name().to_string());
    }
    // Boards as the trace numbers them; dead ones are simply not extended.
    let (mut all_a, mut all_b) = (state.side_a().to_vec(), state.side_b().to_vec());
    for round in 0..state.rounds_left() {
        let (ia, ib) = alive_idx(&all_a, &all_b);
        if ia.is_empty() {
            break;
        }
        let a: Vec<Board> = ia.iter().map(|&i| all_a[i].clone()).collect();
        let b: Vec<Board> = ib.iter().map(|&i| all_b[i].clone()).collect();
        let (side, sels) = script.play(round, &a, &b, v)?;
        if let Some(Some(c)) = state.constraints().get(round) {
            if *c != side {
                return Err(LabError::ScriptDefect(format!("{} played side {side} in round {} constrained to {c}", script.name(), round + 1)));
            }
        }
        let (mover, other, mover_idx, other_idx) = match side {
            Side::A => (&a, &b, &ia, &ib),
            Side::B => (&b, &a, &ib, &ia),
        };
        if sels.len() != mover.len() {
            return Err(LabError::ScriptDefect(format!("{} gave {} selections for {} boards", script.name(), sels.len(), mover.len())));
        }
        let mut moved = Vec::with_capacity(mover.len());
        let mut s_lines = Vec::with_capacity(mover.len());
        for ((x, &s), &i) in mover.iter().zip(&sels).zip(mover_idx) {
            if !x.spoiler_moves(v.atoms, v.no_play_on_top).contains(&s) {
                return Err(LabError::ScriptDefect(format!("{} played illegal {s} in round {}", script.name(), round + 1)));
            }
            moved.push(x.extend_unchecked(s));
            s_lines.push((i, s));
        }
        let (replies, d_lines) = match dup {
            Some(d) if round < d.oblivious_from() => apply_replies(d, round, mover, &moved, other, v)?,
            _ => oblivious_replies(other, v),
        };
        let d_lines: Vec<(usize, Selection)> = d_lines.into_iter().map(|(j, t)| (other_idx[j], t)).collect();
        trace.push_round(side, &s_lines, &d_lines);
        (all_a, all_b) = match side {
            Side::A => (moved, replies),
            Side::B => (replies, moved),
        };
    }
    let alive = alive_pairs_idx(&all_a, &all_b).len();
    Ok(SpoilerRun { winner: if alive == 0 { Winner::Spoiler } else { Winner::Duplicator }, alive_pairs: alive, trace })
}

/// Indices of boards with an alive partner, per side.
fn alive_idx(a: &[Board], b: &[Board]) -> (Vec<usize>, Vec<usize>) {
    let pairs = alive_pairs_idx(a, b);
    let mut ia: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let mut ib: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    ia.sort_unstable();
    ia.dedup();
    ib.sort_unstable();
    ib.dedup();
    (ia, ib)
}

/// Every extension of every board, with trace lines naming parents.
/// A board equal to one already produced from an earlier parent is left
/// out.
pub(crate) fn oblivious_replies(other: &[Board], v: Variant) -> (Vec<Board>, Vec<(usize, Selection)>) {
    let mut seen = HashSet::new();
    let mut boards = Vec::new();
    let mut lines = Vec::new();
    for (i, y) in other.iter().enumerate() {
        for s in y.extensions(v.atoms) {
            let c = y.extend_unchecked(s);
            if seen.insert(canonical_key(&c)) {
                boards.push(c);
                lines.push((i, s));
            }
        }
    }
    (boards, lines)
}

/// With one round left: a selection on `x` after which no extension of
/// any board in `other` is partially isomorphic to it, if one exists.
pub fn finisher(x: &Board, other: &[Board], v: Variant) -> Option<Selection> {
    let partners: Vec<&Board> = other.iter().filter(|y| partial_iso_unchecked(x, y)).collect();
    x.spoiler_moves(v.atoms, v.no_play_on_top).into_iter().find(|&s| {
        let xs = x.extend_unchecked(s);
        partners
            .iter()
            .all(|y| y.extensions(v.atoms).into_iter().all(|t| !partial_iso_unchecked(&xs, &y.extend_unchecked(t))))
    })
}

fn finisher_or_first(x: &Board, other: &[Board], v: Variant) -> Selection {
    finisher(x, other, v).unwrap_or_else(|| x.spoiler_moves(v.atoms, v.no_play_on_top)[0])
}

fn elem(b: &Board, round: usize) -> Option<usize> {
    match b.history().get(round) {
        Some(Selection::Element(e)) => Some(*e),
        _ => None,
    }
}

/// The board restricted to positions `lo..hi`, keeping only history from
/// round `from` on. `None` if some kept selection lies outside.
fn project(b: &Board, lo: usize, hi: usize, from: usize) -> Option<Board> {
    let mut p = Board::linear(hi - lo).ok()?;
    for s in &b.history()[from..] {
        match *s {
            Selection::Element(e) if (lo..hi).contains(&e) => p = p.extend_unchecked(Selection::Element(e - lo)),
            _ => return None,
        }
    }
    Some(p)
}

fn check_linear(state: &GameState, rounds: usize, name: &str) -> Result<(), LabError> {
    let ok = state.rounds_left() == rounds
        && state.side_a().iter().chain(state.side_b()).all(|b| b.is_linear() && b.rounds() == 0)
        && !state.variant().no_play_on_top;
    let max_b = state.side_b().iter().map(|b| b.base().size()).max().unwrap_or(0);
    let min_a = state.side_a().iter().map(|b| b.base().size()).min().unwrap_or(0);
    if !ok || min_a <= max_b {
        return Err(LabError::Domain(format!(
            "{name} needs {rounds} rounds on fresh linear orders with every side-A order larger than every side-B order"
        )));
    }
    Ok(())
}

/// Rules of the four-round Spoiler who separates orders of size at least
/// ten from smaller ones, per board. Side B holds the smaller orders.
///
/// Round 1 on B: the centre. Round 2 on A: the middle of the long side,
/// leaving two free elements on each side of it. Round 3 on B, by where
/// Duplicator's reply `d` fell relative to the centre `c`: next to `c`,
/// play on top of `c`; an end element, play on top of it; two away, play
/// next to `c` on that side; second from an end, play that end. Round 4 on
/// A: any move leaving no partner.
mod four {
    use super::*;

    pub fn side(round: usize) -> Side {
        if round.is_multiple_of(2) {
            Side::B
        } else {
            Side::A
        }
    }

    pub fn centre(n: usize) -> usize {
        (n - 1) / 2
    }

    pub fn long_middle(b: &Board) -> Option<usize> {
        let n = b.base().size();
        let d = elem(b, 0)?;
        let (left, right) = (d, n - 1 - d);
        Some(if right >= left { d + right.div_ceil(2) } else { (left - 1) / 2 })
    }

    pub fn third(b: &Board) -> Option<usize> {
        let s = b.base().size();
        let (c, d) = (elem(b, 0)?, elem(b, 1)?);
        Some(if d == c || c.abs_diff(d) == 1 {
            c
        } else if d == 0 || d == s - 1 {
            d
        } else if d == c + 2 {
            c + 1
        } else if d + 2 == c {
            c - 1
        } else if d == 1 {
            0
        } else if d == s - 2 {
            s - 1
        } else {
            c
        })
    }

    /// Selection for one board in sub-round `round` (0..3); the last round
    /// is left to the caller.
    pub fn rule(round: usize, b: &Board) -> Option<usize> {
        match round {
            0 => Some(centre(b.base().size())),
            1 => long_middle(b),
            2 => third(b),
            _ => None,
        }
    }
}

/// Four rounds, side A larger than side B, smaller orders below ten.
pub struct TenVsNine;

impl SpoilerScript for TenVsNine {
    fn name(&self) -> &str {
        "ten_v_nine"
    }

    fn check(&self, state: &GameState) -> Result<(), LabError> {
        check_linear(state, 4, self.name())
    }

    fn play(&self, round: usize, a: &[Board], b: &[Board], v: Variant) -> Result<(Side, Vec<Selection>), LabError> {
        let side = four::side(round);
        let (mover, other) = if side == Side::A { (a, b) } else { (b, a) };
        let sels = mover
            .iter()
            .map(|x| match four::rule(round, x) {
                Some(e) => Selection::Element(e),
                None => finisher_or_first(x, other, v),
            })
            .collect();
        Ok((side, sels))
    }
}

/// Five rounds: side A of size at least 21, side B at most 20.
///
/// Round 1 on A: the centre, leaving ten elements on each side. Round 2
/// on B: on a board whose reply was an end element, play on top of it;
/// otherwise start the four-round script on the short side. From then on
/// each board plays the four-round script on the half it was sent to (the
/// short side on B, the side of its round-2 selection on A). Boards whose
/// first two moves coincide are played apart: on top again in round 3,
/// next to the end in round 4, and finished in round 5.
pub struct MiddleRecursive;

impl MiddleRecursive {
    /// Half of `b` its later moves live in, from its first two selections.
    fn half(b: &Board, by_short_side: bool) -> Option<(usize, usize)> {
        let n = b.base().size();
        let d = elem(b, 0)?;
        let left = if by_short_side {
            d <= n - 1 - d
        } else {
            elem(b, 1)? < d
        };
        Some(if left { (0, d) } else { (d + 1, n) })
    }

    fn pick(round: usize, x: &Board) -> Option<usize> {
        let n = x.base().size();
        if round == 0 {
            return Some((n - 1) / 2);
        }
        let d = elem(x, 0)?;
        match round {
            1 => {
                if d == 0 || d == n - 1 {
                    return Some(d);
                }
                let (lo, hi) = Self::half(x, true)?;
                Some(lo + four::rule(0, &project(x, lo, hi, 1)?)?)
            }
            2 => {
                if elem(x, 1)? == d {
                    return Some(d);
                }
                let (lo, hi) = Self::half(x, false)?;
                Some(lo + four::rule(1, &project(x, lo, hi, 1)?)?)
            }
            3 => {
                if elem(x, 1)? == d {
                    return Some(if d == 0 { 1 } else { d - 1 });
                }
                let (lo, hi) = Self::half(x, true)?;
                Some(lo + four::rule(2, &project(x, lo, hi, 1)?)?)
            }
            _ => None,
        }
    }
}

impl SpoilerScript for MiddleRecursive {
    fn name(&self) -> &str {
        "middle_recursive"
    }

    fn check(&self, state: &GameState) -> Result<(), LabError> {
        check_linear(state, 5, self.name())
    }

    fn play(&self, round: usize, a: &[Board], b: &[Board], v: Variant) -> Result<(Side, Vec<Selection>), LabError> {
        let side = if round.is_multiple_of(2) { Side::A } else { Side::B };
        let (mover, other) = if side == Side::A { (a, b) } else { (b, a) };
        let sels = mover
            .iter()
            .map(|x| match Self::pick(round, x) {
                Some(e) if e < x.base().size() => Selection::Element(e),
                _ => finisher_or_first(x, other, v),
            })
            .collect();
        Ok((side, sels))
    }
}

/// The line that defeats the naive mirroring Duplicator on 10 vs 9:
/// the centre of the smaller order, then the eighth element of the larger
/// one, then on each smaller board a reply to Duplicator's second move
/// (on top of the centre after 6, at 6 after 7, at 9 after 8, on top of 9
/// after 9), and finally any move leaving no partner.
pub struct Interlude;

impl SpoilerScript for Interlude {
    fn name(&self) -> &str {
        "interlude"
    }

    fn check(&self, state: &GameState) -> Result<(), LabError> {
        check_linear(state, 4, self.name())?;
        let sizes = |s: &[Board]| s.iter().map(|b| b.base().size()).collect::<Vec<_>>();
        if sizes(state.side_a()) != [10] || sizes(state.side_b()) != [9] {
            return Err(LabError::Domain("interlude is played on lo:10 against lo:9".into()));
        }
        Ok(())
    }

    fn play(&self, round: usize, a: &[Board], b: &[Board], v: Variant) -> Result<(Side, Vec<Selection>), LabError> {
        let (side, mover, other) = match round {
            0 | 2 => (Side::B, b, a),
            _ => (Side::A, a, b),
        };
        let sels = mover
            .iter()
            .map(|x| {
                let e = match round {
                    0 => Some(4),
                    1 => Some(7),
                    2 => match elem(x, 1) {
                        Some(5) => Some(4),
                        Some(6) => Some(5),
                        Some(7) => Some(8),
                        Some(8) => Some(8),
                        _ => None,
                    },
                    _ => None,
                };
                e.map_or_else(|| finisher_or_first(x, other, v), Selection::Element)
            })
            .collect();
        Ok((side, sels))
    }
}

/// Looks a Spoiler script up by name.
pub fn spoiler_script(name: &str) -> Option<Box<dyn SpoilerScript>> {
    match name {
        "ten_v_nine" => Some(Box::new(TenVsNine)),
        "middle_recursive" => Some(Box::new(MiddleRecursive)),
        "interlude" => Some(Box::new(Interlude)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lo(n: usize, h: &[usize]) -> Board {
        let mut b = Board::linear(n).unwrap();
        for &e in h {
            b = b.extend_unchecked(Selection::Element(e));
        }
        b
    }

    #[test]
    fn four_round_rules() {
        assert_eq!(four::rule(0, &lo(9, &[])), Some(4));
        // long side to the right of B(5): B(6..10), middle B(8)
        assert_eq!(four::rule(1, &lo(10, &[4])), Some(7));
        // long side to the left of B(7): B(1..6), B(3) leaves two and three
        assert_eq!(four::rule(1, &lo(10, &[6])), Some(2));
        for (d, want) in [(3, 4), (5, 4), (0, 0), (8, 8), (6, 5), (2, 3), (1, 0), (7, 8)] {
            assert_eq!(four::third(&lo(9, &[4, d])), Some(want), "d={d}");
        }
    }

    #[test]
    fn projection() {
        let b = lo(21, &[10, 3, 5]);
        let p = project(&b, 0, 10, 1).unwrap();
        assert_eq!(p.base().size(), 10);
        assert_eq!(p.history(), &[Selection::Element(3), Selection::Element(5)]);
        assert!(project(&b, 11, 21, 1).is_none());
    }

    #[test]
    fn finisher_kills_all_partners() {
        let v = Variant::default();
        // 3 vs 2 after B(2)/L(1): every move on B has an answer on L
        let x = lo(3, &[1]);
        assert!(finisher(&x, &[lo(2, &[0]), lo(2, &[1])], v).is_none());
        // after B(3)/L(1), L(2) has nothing to match it
        let y = lo(2, &[0]);
        assert_eq!(finisher(&y, &[lo(3, &[2])], v), Some(Selection::Element(1)));
    }
}
