//! Duplicator scripts and their exhaustive certification.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use msgames_core::{canonical_key, partial_iso_unchecked, Board, Budget, CanonicalKey, Selection, Side, Winner};
use msgames_ms::{prune_dead, CertRound, GameState, MsSolver, Variant};

use crate::spoiler::{run_spoiler_against, SpoilerScript};
use crate::trace::Trace;
use crate::LabError;

/// Duplicator's answer on one partner board.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reply {
    /// Every extension of the partner.
    Oblivious,
    /// These selections on the partner, one copy each; may be empty.
    Some(Vec<Selection>),
}

/// A Duplicator strategy given pairwise: for a board Spoiler just moved on
/// and an alive partner, the selections to play on copies of the partner.
/// The new boards of the other side are the union over all alive pairs.
pub trait DuplicatorScript: Sync {
    fn name(&self) -> &str;

    /// Most copies of one board a round may produce, oblivious rounds
    /// aside.
    fn bound(&self) -> usize;

    /// Round (0-based) from which every reply is oblivious.
    fn oblivious_from(&self) -> usize {
        usize::MAX
    }

    /// Rejects states outside the script's domain.
    fn check(&self, _state: &GameState) -> Result<(), LabError> {
        Ok(())
    }

    fn reply(&self, round: usize, moved: &Board, partner: &Board, v: Variant) -> Reply;
}

/// New boards for the other side in round `round` and trace lines naming
/// their parents as indices into `other`.
#[allow(clippy::type_complexity)]
pub(crate) fn apply_replies(
    d: &dyn DuplicatorScript,
    round: usize,
    mover: &[Board],
    moved: &[Board],
    other: &[Board],
    v: Variant,
) -> Result<(Vec<Board>, Vec<(usize, Selection)>), LabError> {
    let mut boards = Vec::new();
    let mut lines = Vec::new();
    for (j, y) in other.iter().enumerate() {
        let legal = y.extensions(v.atoms);
        let mut sels = BTreeSet::new();
        let mut oblivious = false;
        for (x, xm) in mover.iter().zip(moved) {
            if !partial_iso_unchecked(x, y) {
                continue;
            }
            match d.reply(round, xm, y, v) {
                Reply::Oblivious => {
                    oblivious = true;
                    sels.extend(legal.iter().copied());
                }
                Reply::Some(r) => {
                    if let Some(bad) = r.iter().find(|s| !legal.contains(s)) {
                        return Err(LabError::ScriptDefect(format!("{} replied with illegal {bad} in round {}", d.name(), round + 1)));
                    }
                    sels.extend(r);
                }
            }
        }
        if !oblivious && sels.len() > d.bound() {
            return Err(LabError::ScriptDefect(format!(
                "{} made {} copies of one board in round {}, over its bound of {}",
                d.name(),
                sels.len(),
                round + 1,
                d.bound()
            )));
        }
        for s in sels {
            boards.push(y.extend_unchecked(s));
            lines.push((j, s));
        }
    }
    Ok((boards, lines))
}

fn last_element(b: &Board) -> Option<usize> {
    match b.history().last() {
        Some(Selection::Element(e)) => Some(*e),
        _ => None,
    }
}

fn same_atom(moved: &Board, partner: &Board) -> Option<Reply> {
    match moved.history().last() {
        Some(&Selection::Atom(a)) => Some(Reply::Some(if a <= partner.atom_ledger() { vec![Selection::Atom(a)] } else { Vec::new() })),
        _ => None,
    }
}

/// Mirrors around the first selection on each board. A first move is
/// answered at the same position (clamped to the partner). Later, a move
/// at or left of the pivot is answered at the same distance left of the
/// partner's pivot, and a move right of it with every position right of
/// the partner's pivot, as if the right halves were a fresh game. Atoms
/// are answered by the same atom.
pub struct PivotMirror {
    name: &'static str,
    bound: usize,
}

/// The recursion that looks natural on 10 vs 9 and fails.
pub fn naive_mirror() -> PivotMirror {
    PivotMirror { name: "naive_mirror", bound: 9 }
}

/// Boards whose first selections already match: mirror the left halves
/// and answer the right halves obliviously.
pub fn reduction() -> PivotMirror {
    PivotMirror { name: "reduction", bound: 4 }
}

impl DuplicatorScript for PivotMirror {
    fn name(&self) -> &str {
        self.name
    }

    fn bound(&self) -> usize {
        self.bound
    }

    fn reply(&self, _round: usize, moved: &Board, partner: &Board, _v: Variant) -> Reply {
        if let Some(r) = same_atom(moved, partner) {
            return r;
        }
        let ny = partner.base().size();
        let Some(e) = last_element(moved) else { return Reply::Some(Vec::new()) };
        if moved.rounds() == 1 {
            return Reply::Some(vec![Selection::Element(e.min(ny - 1))]);
        }
        match (moved.history().first(), partner.history().first()) {
            (Some(&Selection::Element(px)), Some(&Selection::Element(py))) => {
                if e <= px {
                    Reply::Some(py.checked_sub(px - e).map(Selection::Element).into_iter().collect())
                } else {
                    Reply::Some((py + 1..ny).map(Selection::Element).collect())
                }
            }
            _ => Reply::Some(Vec::new()),
        }
    }
}

/// First move on a board of size `2m + 1` against `2m`: the centre of the
/// larger board is answered on two copies, just left and just right of the
/// middle of the smaller one; any other move keeps its distance to the
/// near end. Atoms get the same atom. Oblivious afterwards.
pub struct SplitBoard;

impl DuplicatorScript for SplitBoard {
    fn name(&self) -> &str {
        "split_board"
    }

    fn bound(&self) -> usize {
        2
    }

    fn oblivious_from(&self) -> usize {
        1
    }

    fn check(&self, state: &GameState) -> Result<(), LabError> {
        let ok = state.side_a().iter().chain(state.side_b()).all(|b| b.is_linear() && b.rounds() == 0)
            && state.side_a().iter().all(|x| x.base().size() % 2 == 1)
            && state.side_b().iter().all(|y| y.base().size() % 2 == 0)
            && state
                .side_a()
                .iter()
                .all(|x| state.side_b().iter().all(|y| x.base().size() == y.base().size() + 1));
        if !ok {
            return Err(LabError::Domain("split_board is played on fresh linear orders of sizes 2m + 1 against 2m".into()));
        }
        Ok(())
    }

    fn reply(&self, _round: usize, moved: &Board, partner: &Board, _v: Variant) -> Reply {
        if let Some(r) = same_atom(moved, partner) {
            return r;
        }
        let Some(e) = last_element(moved) else { return Reply::Some(Vec::new()) };
        let (nx, ny) = (moved.base().size(), partner.base().size());
        let sels = if nx > ny {
            let m = ny / 2;
            match e.cmp(&m) {
                std::cmp::Ordering::Equal => vec![m - 1, m],
                std::cmp::Ordering::Less => vec![e],
                std::cmp::Ordering::Greater => vec![e - 1],
            }
        } else {
            let m = nx / 2;
            vec![if e < m { e } else { e + 1 }]
        };
        Reply::Some(sels.into_iter().map(Selection::Element).collect())
    }
}

/// One copy for the first move: the same distance from the end nearer to
/// Spoiler's selection, so the short sides match. Atoms get the same atom.
/// Oblivious afterwards.
pub struct ShortSideMatch;

impl DuplicatorScript for ShortSideMatch {
    fn name(&self) -> &str {
        "short_side"
    }

    fn bound(&self) -> usize {
        1
    }

    fn oblivious_from(&self) -> usize {
        1
    }

    fn reply(&self, _round: usize, moved: &Board, partner: &Board, _v: Variant) -> Reply {
        if let Some(r) = same_atom(moved, partner) {
            return r;
        }
        let Some(e) = last_element(moved) else { return Reply::Some(Vec::new()) };
        let (nx, ny) = (moved.base().size(), partner.base().size());
        let right = nx - 1 - e;
        let t = if e <= right { e.min(ny - 1) } else { (ny - 1).saturating_sub(right) };
        Reply::Some(vec![Selection::Element(t)])
    }
}

/// Every extension, every round.
pub struct Oblivious;

impl DuplicatorScript for Oblivious {
    fn name(&self) -> &str {
        "oblivious"
    }

    fn bound(&self) -> usize {
        usize::MAX
    }

    fn oblivious_from(&self) -> usize {
        0
    }

    fn reply(&self, _round: usize, _moved: &Board, _partner: &Board, _v: Variant) -> Reply {
        Reply::Oblivious
    }
}

/// Looks a Duplicator script up by name.
pub fn duplicator_script(name: &str) -> Option<Box<dyn DuplicatorScript>> {
    match name {
        "naive_mirror" => Some(Box::new(naive_mirror())),
        "reduction" => Some(Box::new(reduction())),
        "split_board" => Some(Box::new(SplitBoard)),
        "short_side" => Some(Box::new(ShortSideMatch)),
        "oblivious" => Some(Box::new(Oblivious)),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct Certification {
    pub script: String,
    pub winner: Winner,
    /// Spoiler's winning line against the script, when there is one.
    pub refutation: Option<Vec<CertRound>>,
    /// The refutation played out against the script.
    pub trace: Option<Trace>,
    pub nodes: u64,
}

impl Certification {
    pub fn certified(&self) -> bool {
        self.winner == Winner::Duplicator
    }
}

/// Whether `script` wins `state` for Duplicator against every Spoiler.
///
/// Spoiler is enumerated exhaustively: each side, and every combination of
/// per-board moves, centre-out. Below the root, a position Spoiler wins
/// against the oblivious Duplicator is won against any script, since a
/// script only ever keeps a subset of the oblivious boards; once the
/// script turns oblivious, the solver's verdict is final.
pub fn certify_duplicator(script: &dyn DuplicatorScript, state: &GameState, budget: &Budget) -> Result<Certification, LabError> {
    script.check(state)?;
    let mut ctx = Ctx {
        script,
        v: state.variant(),
        cons: state.constraints().to_vec(),
        solver: MsSolver::new(),
        holds: HashSet::new(),
        budget,
    };
    let refutation = ctx.search(state.side_a().to_vec(), state.side_b().to_vec(), 0)?;
    let trace = match &refutation {
        Some(rounds) => {
            let line = Refutation { rounds: rounds.clone() };
            let run = run_spoiler_against(&line, script, state)?;
            if run.winner != Winner::Spoiler {
                return Err(LabError::ScriptDefect(format!("refutation of {} does not replay", script.name())));
            }
            Some(run.trace)
        }
        None => None,
    };
    Ok(Certification {
        script: script.name().to_string(),
        winner: if refutation.is_some() { Winner::Spoiler } else { Winner::Duplicator },
        refutation,
        trace,
        nodes: budget.nodes(),
    })
}

type HoldKey = (Vec<CanonicalKey>, Vec<CanonicalKey>, usize);

struct Ctx<'s> {
    script: &'s dyn DuplicatorScript,
    v: Variant,
    cons: Vec<Option<Side>>,
    solver: MsSolver,
    holds: HashSet<HoldKey>,
    budget: &'s Budget,
}

fn keys(boards: &[Board]) -> Vec<CanonicalKey> {
    let mut k: Vec<CanonicalKey> = boards.iter().map(canonical_key).collect();
    k.sort();
    k.dedup();
    k
}

/// Spoiler moves on `x`, one per distinct resulting board, centre first.
fn moves(x: &Board, v: Variant) -> Vec<Selection> {
    let n = x.base().size();
    let mut seen = HashSet::new();
    let mut out: Vec<Selection> = x
        .spoiler_moves(v.atoms, v.no_play_on_top)
        .into_iter()
        .filter(|&s| seen.insert(canonical_key(&x.extend_unchecked(s))))
        .collect();
    out.sort_by_key(|s| match *s {
        Selection::Element(e) => (0, (2 * e).abs_diff(n.saturating_sub(1)), e),
        Selection::Atom(a) => (1, 0, a),
    });
    out
}

impl Ctx<'_> {
    /// Spoiler's winning line from here, or `None` if the script holds.
    fn search(&mut self, a: Vec<Board>, b: Vec<Board>, round: usize) -> Result<Option<Vec<CertRound>>, LabError> {
        self.budget.tick()?;
        let (a, b) = prune_dead(&a, &b);
        if a.is_empty() || b.is_empty() {
            return Ok(Some(Vec::new()));
        }
        if round == self.cons.len() {
            return Ok(None);
        }
        let key = (keys(&a), keys(&b), round);
        if self.holds.contains(&key) {
            return Ok(None);
        }
        let oblivious = round >= self.script.oblivious_from();
        if round > 0 || oblivious {
            let st = GameState::new(a.clone(), b.clone(), self.cons[round..].to_vec(), self.v)?;
            let verdict = self.solver.solve(&st, self.budget)?;
            if let Some(c) = verdict.certificate {
                return Ok(Some(c.rounds));
            }
            if oblivious {
                self.holds.insert(key);
                return Ok(None);
            }
        }
        // Side B usually holds the smaller structures, where the short
        // refutations start.
        let sides = match self.cons[round] {
            Some(s) => vec![s],
            None => vec![Side::B, Side::A],
        };
        for side in sides {
            let (mover, other) = match side {
                Side::A => (&a, &b),
                Side::B => (&b, &a),
            };
            let options: Vec<Vec<Selection>> = mover.iter().map(|x| moves(x, self.v)).collect();
            let mut pick = vec![0usize; mover.len()];
            loop {
                let sels: Vec<Selection> = pick.iter().zip(&options).map(|(&i, o)| o[i]).collect();
                let moved: Vec<Board> = mover.iter().zip(&sels).map(|(x, &s)| x.extend_unchecked(s)).collect();
                let (replies, _) = apply_replies(self.script, round, mover, &moved, other, self.v)?;
                let (na, nb) = match side {
                    Side::A => (moved, replies),
                    Side::B => (replies, moved),
                };
                if let Some(rest) = self.search(na, nb, round + 1)? {
                    let choices: BTreeMap<CanonicalKey, Selection> =
                        mover.iter().map(canonical_key).zip(sels.iter().copied()).collect();
                    let mut line = vec![CertRound { side, choices }];
                    line.extend(rest);
                    return Ok(Some(line));
                }
                // odometer over per-board options
                let mut k = 0;
                while k < pick.len() {
                    pick[k] += 1;
                    if pick[k] < options[k].len() {
                        break;
                    }
                    pick[k] = 0;
                    k += 1;
                }
                if k == pick.len() {
                    break;
                }
            }
        }
        self.holds.insert(key);
        Ok(None)
    }
}

/// Plays a fixed line of per-board choices keyed by board.
struct Refutation {
    rounds: Vec<CertRound>,
}

impl SpoilerScript for Refutation {
    fn name(&self) -> &str {
        "refutation"
    }

    fn check(&self, _state: &GameState) -> Result<(), LabError> {
        Ok(())
    }

    fn play(&self, round: usize, a: &[Board], b: &[Board], _v: Variant) -> Result<(Side, Vec<Selection>), LabError> {
        let r = self.rounds.get(round).ok_or_else(|| LabError::ScriptDefect(format!("refutation ends before round {}", round + 1)))?;
        let mover = match r.side {
            Side::A => a,
            Side::B => b,
        };
        let sels = mover
            .iter()
            .map(|x| {
                r.choices
                    .get(&canonical_key(x))
                    .copied()
                    .ok_or_else(|| LabError::ScriptDefect(format!("refutation has no move in round {} for a board", round + 1)))
            })
            .collect::<Result<_, _>>()?;
        Ok((r.side, sels))
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

    fn elems(r: Reply) -> Vec<usize> {
        match r {
            Reply::Some(v) => v.into_iter().map(|s| if let Selection::Element(e) = s { e } else { usize::MAX }).collect(),
            Reply::Oblivious => panic!("oblivious"),
        }
    }

    #[test]
    fn mirror_replies() {
        let v = Variant::default();
        let m = naive_mirror();
        assert_eq!(elems(m.reply(0, &lo(9, &[4]), &lo(10, &[]), v)), [4]);
        // B(8) after L(5)/B(5): every position right of L(5)
        assert_eq!(elems(m.reply(1, &lo(10, &[4, 7]), &lo(9, &[4]), v)), [5, 6, 7, 8]);
        assert_eq!(elems(m.reply(1, &lo(10, &[4, 2]), &lo(9, &[4]), v)), [2]);
    }

    #[test]
    fn split_replies() {
        let v = Variant::default();
        assert_eq!(elems(SplitBoard.reply(0, &lo(11, &[5]), &lo(10, &[]), v)), [4, 5]);
        assert_eq!(elems(SplitBoard.reply(0, &lo(11, &[7]), &lo(10, &[]), v)), [6]);
        assert_eq!(elems(SplitBoard.reply(0, &lo(10, &[5]), &lo(11, &[]), v)), [6]);
        assert_eq!(elems(SplitBoard.reply(0, &lo(10, &[4]), &lo(11, &[]), v)), [4]);
    }

    #[test]
    fn centre_out_order() {
        let m = moves(&lo(5, &[]), Variant::default());
        assert_eq!(m[0], Selection::Element(2));
        assert_eq!(m.len(), 5);
    }

    #[test]
    fn bound_is_enforced() {
        let v = Variant::default();
        let x = lo(10, &[4]);
        let y = lo(9, &[4]);
        let tight = PivotMirror { name: "tight", bound: 2 };
        let moved = [x.extend_unchecked(Selection::Element(7))];
        let e = apply_replies(&tight, 1, &[x], &moved, &[y], v).unwrap_err();
        assert!(matches!(e, LabError::ScriptDefect(_)));
    }
}
