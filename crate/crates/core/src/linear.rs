//! Normal forms for boards on plain linear orders.
//!
//! With `k` rounds left, a gap of at least `2^k - 1` unselected elements
//! behaves like any longer gap, so gaps are capped there. The capped board
//! is a sub-order of the original; the embedding lets a move chosen on the
//! capped board be replayed on the original.

use crate::{Board, Selection, Structure};

/// `2^k - 1`, saturating.
pub fn gap_cap(k: u32) -> usize {
    if k >= usize::BITS - 1 {
        usize::MAX
    } else {
        (1usize << k) - 1
    }
}

/// Distinct selected positions in increasing order.
pub fn selected_positions(board: &Board) -> Vec<usize> {
    let mut p: Vec<usize> = board
        .history()
        .iter()
        .filter_map(|s| match s {
            Selection::Element(e) => Some(*e),
            Selection::Atom(_) => None,
        })
        .collect();
    p.sort_unstable();
    p.dedup();
    p
}

/// Sizes of the runs of unselected elements: before the first selected
/// position, between consecutive ones, and after the last.
pub fn gaps(board: &Board) -> Vec<usize> {
    let n = board.base().size();
    let sel = selected_positions(board);
    let mut out = Vec::with_capacity(sel.len() + 1);
    let mut prev = 0usize;
    for &p in &sel {
        out.push(p - prev);
        prev = p + 1;
    }
    out.push(n - prev);
    out
}

/// Caps every gap at `gap_cap(k)`, keeping the first `ceil(c/2)` and last
/// `floor(c/2)` elements of a capped gap of size `c`.
///
/// Returns the capped board and the embedding `new index -> old index`.
/// Non-linear boards come back unchanged with the identity embedding.
pub fn cap_gaps(board: &Board, k: u32) -> (Board, Vec<usize>) {
    let n = board.base().size();
    if !board.is_linear() {
        return (board.clone(), (0..n).collect());
    }
    let cap = gap_cap(k);
    let sel = selected_positions(board);
    let mut keep: Vec<usize> = Vec::with_capacity(n.min(sel.len() * (cap.min(n) + 1) + cap.min(n)));
    let push_gap = |lo: usize, hi: usize, keep: &mut Vec<usize>| {
        // unselected run lo..hi
        let len = hi - lo;
        if len <= cap {
            keep.extend(lo..hi);
        } else {
            let left = cap.div_ceil(2);
            let right = cap / 2;
            keep.extend(lo..lo + left);
            keep.extend(hi - right..hi);
        }
    };
    let mut prev = 0usize;
    for &p in &sel {
        push_gap(prev, p, &mut keep);
        keep.push(p);
        prev = p + 1;
    }
    push_gap(prev, n, &mut keep);
    if keep.is_empty() {
        // no selections and nothing left to play: any single element will do
        keep.push(0);
    }
    if keep.len() == n {
        return (board.clone(), keep);
    }
    let mut index = vec![usize::MAX; n];
    for (new, &old) in keep.iter().enumerate() {
        index[old] = new;
    }
    let base = Structure::shared_linear_order(keep.len()).expect("non-empty");
    (board.relabel(base, |e| index[e]), keep)
}

/// The same board read right to left.
pub fn reflect(board: &Board) -> Board {
    let n = board.base().size();
    board.relabel(board.base_arc().clone(), |e| n - 1 - e)
}

/// Maps a selection made on a capped board back through its embedding.
pub fn lift(s: Selection, embedding: &[usize]) -> Selection {
    match s {
        Selection::Element(e) => Selection::Element(embedding[e]),
        a => a,
    }
}
