//! The interval-halving Spoiler of the classical Ehrenfeucht-Fraisse
//! game on two linear orders, run against every Duplicator reply.

use msgames_core::{partial_iso_unchecked, Board, Selection, Winner};

use crate::LabError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfScriptRun {
    /// Spoiler if every Duplicator line ends in a broken isomorphism.
    pub winner: Winner,
    /// Duplicator lines explored.
    pub lines: usize,
}

/// Free intervals between selected elements, as `(first, size)`, in order.
fn gaps(b: &Board) -> Vec<(usize, usize)> {
    let mut sel: Vec<usize> = b
        .history()
        .iter()
        .filter_map(|s| match s {
            Selection::Element(e) => Some(*e),
            Selection::Atom(_) => None,
        })
        .collect();
    sel.sort_unstable();
    sel.dedup();
    let mut out = Vec::with_capacity(sel.len() + 1);
    let mut lo = 0;
    for e in sel {
        out.push((lo, e - lo));
        lo = e + 1;
    }
    out.push((lo, b.base().size() - lo));
    out
}

/// Spoiler's move: in the pair of matching intervals that differ in size
/// and whose smaller one is smallest, the middle of the larger one.
/// Returns whether to play on `a`, and the element.
fn spoiler_move(a: &Board, b: &Board) -> Option<(bool, usize)> {
    let (ga, gb) = (gaps(a), gaps(b));
    ga.iter()
        .zip(&gb)
        .filter(|(x, y)| x.1 != y.1)
        .min_by_key(|(x, y)| x.1.min(y.1))
        .map(|(x, y)| if x.1 > y.1 { (true, x.0 + (x.1 - 1) / 2) } else { (false, y.0 + (y.1 - 1) / 2) })
}

/// Plays the halving Spoiler on fresh linear orders of sizes `n` and `m`
/// for `rounds` rounds, exploring every Duplicator reply.
pub fn run_ef_spoiler(n: usize, m: usize, rounds: usize) -> Result<EfScriptRun, LabError> {
    if n == m {
        return Err(LabError::Domain("the halving Spoiler needs orders of different sizes".into()));
    }
    let (lines, lost) = explore(&Board::linear(n)?, &Board::linear(m)?, rounds);
    Ok(EfScriptRun { winner: if lost == 0 { Winner::Spoiler } else { Winner::Duplicator }, lines })
}

/// Lines explored and lines Duplicator survives.
fn explore(a: &Board, b: &Board, rounds: usize) -> (usize, usize) {
    if !partial_iso_unchecked(a, b) {
        return (1, 0);
    }
    if rounds == 0 {
        return (1, 1);
    }
    let Some((on_a, e)) = spoiler_move(a, b) else { return (1, 1) };
    let (x, y) = if on_a { (a, b) } else { (b, a) };
    let x = x.extend_unchecked(Selection::Element(e));
    (0..y.base().size())
        .map(|t| {
            let y = y.extend_unchecked(Selection::Element(t));
            if on_a {
                explore(&x, &y, rounds - 1)
            } else {
                explore(&y, &x, rounds - 1)
            }
        })
        .fold((0, 0), |acc, r| (acc.0 + r.0, acc.1 + r.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_vs_five() {
        assert_eq!(run_ef_spoiler(6, 5, 3).unwrap().winner, Winner::Spoiler);
        assert_eq!(run_ef_spoiler(6, 5, 2).unwrap().winner, Winner::Duplicator);
    }

    #[test]
    fn halving_matches_closed_form() {
        // Spoiler wins in r rounds iff the smaller order has fewer than 2^r - 1 elements
        for r in 1..=3 {
            for m in 1..=8 {
                let w = run_ef_spoiler(m + 1, m, r).unwrap().winner;
                assert_eq!(w == Winner::Spoiler, m < (1 << r) - 1, "r={r} m={m}");
            }
        }
    }
}
