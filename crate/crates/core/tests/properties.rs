use std::sync::Arc;

use msgames_core::{canonical_key, partial_iso, Board, Selection, Structure, Vocabulary};
use proptest::prelude::*;

fn graph_board(n: usize, edges: &[(usize, usize)], unary: &[usize], hist: &[Selection]) -> Board {
    let vocab = Vocabulary::new(vec![("R".into(), 2), ("P".into(), 1)], vec![], false).unwrap();
    let r = edges.iter().map(|&(u, v)| vec![u, v]).collect();
    let p = unary.iter().map(|&u| vec![u]).collect();
    let s = Structure::new(vocab, n, vec![r, p], vec![], vec![]).unwrap();
    let mut b = Board::new(Arc::new(s));
    for &h in hist {
        b = b.extend(h, true).unwrap();
    }
    b
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Exhaustive search for an isomorphism of labeled boards.
fn brute_iso(a: &Board, b: &Board) -> bool {
    let (sa, sb) = (a.base(), b.base());
    if sa.size() != sb.size() || a.history().len() != b.history().len() {
        return false;
    }
    'perm: for pi in permutations(sa.size()) {
        for (x, y) in a.history().iter().zip(b.history()) {
            let ok = match (x, y) {
                (Selection::Element(u), Selection::Element(v)) => pi[*u] == *v,
                (Selection::Atom(i), Selection::Atom(j)) => i == j,
                _ => false,
            };
            if !ok {
                continue 'perm;
            }
        }
        for r in 0..sa.vocab().relations().len() {
            let ta = sa.tuples(r);
            if ta.len() != sb.tuples(r).len() {
                continue 'perm;
            }
            for t in ta {
                let img: Vec<usize> = t.iter().map(|&e| pi[e]).collect();
                if !sb.holds(r, &img) {
                    continue 'perm;
                }
            }
        }
        return true;
    }
    false
}

fn arb_graph_board(r: usize) -> impl Strategy<Value = Board> {
    (1usize..=4).prop_flat_map(move |n| {
        (
            Just(n),
            proptest::collection::vec((0..n, 0..n), 0..6),
            proptest::collection::vec(0..n, 0..3),
            proptest::collection::vec(0..n, r..=r),
        )
            .prop_map(|(n, e, u, h)| {
                let hist: Vec<Selection> = h.into_iter().map(Selection::Element).collect();
                graph_board(n, &e, &u, &hist)
            })
    })
}

fn arb_linear_board(max_n: usize, r: usize) -> impl Strategy<Value = Board> {
    (1usize..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(prop_oneof![4 => (0..n).prop_map(Selection::Element), 1 => (0usize..2).prop_map(Selection::Atom)], r..=r)
            .prop_map(move |h| {
                let mut b = Board::linear(n).unwrap();
                for s in h {
                    // clamp atom ids to the ledger so the history stays well formed
                    let s = match s {
                        Selection::Atom(a) => Selection::Atom(a.min(b.atom_ledger())),
                        e => e,
                    };
                    b = b.extend(s, true).unwrap();
                }
                b
            })
    })
}

/// Pairwise order/equality comparison of the two histories.
fn pattern_oracle(a: &Board, b: &Board) -> bool {
    let (ha, hb) = (a.history(), b.history());
    for i in 0..ha.len() {
        for j in 0..ha.len() {
            match (ha[i], hb[i], ha[j], hb[j]) {
                (Selection::Atom(x), Selection::Atom(y), _, _) if x != y => return false,
                (Selection::Atom(_), Selection::Element(_), _, _) | (Selection::Element(_), Selection::Atom(_), _, _) => {
                    return false
                }
                (Selection::Element(x), Selection::Element(y), Selection::Element(u), Selection::Element(v))
                    if x.cmp(&u) != y.cmp(&v) => {
                        return false;
                    }
                _ => {}
            }
        }
    }
    true
}

fn extend_both(a: &Board, b: &Board, sa: Selection, sb: Selection) -> Option<(Board, Board)> {
    let clamp = |bd: &Board, s: Selection| match s {
        Selection::Element(e) => Selection::Element(e % bd.base().size()),
        Selection::Atom(x) => Selection::Atom(x.min(bd.atom_ledger())),
    };
    Some((a.extend(clamp(a, sa), true).ok()?, b.extend(clamp(b, sb), true).ok()?))
}

fn linear_pair(max_n: usize, max_r: usize) -> impl Strategy<Value = (Board, Board)> {
    (0..=max_r).prop_flat_map(move |r| (arb_linear_board(max_n, r), arb_linear_board(max_n, r)))
}

fn graph_triple() -> impl Strategy<Value = (Board, Board, Board)> {
    (0usize..3).prop_flat_map(|r| (arb_graph_board(r), arb_graph_board(r), arb_graph_board(r)))
}

fn arb_selection() -> impl Strategy<Value = Selection> {
    prop_oneof![4 => (0usize..8).prop_map(Selection::Element), 1 => (0usize..2).prop_map(Selection::Atom)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn keys_match_brute_force_iso((a, b, _c) in graph_triple()) {
        prop_assert_eq!(canonical_key(&a) == canonical_key(&b), brute_iso(&a, &b));
    }

    #[test]
    fn relabeled_boards_share_keys(a in (0usize..3).prop_flat_map(arb_graph_board), seed in 0usize..24) {
        let n = a.base().size();
        let perms = permutations(n);
        let pi = &perms[seed % perms.len()];
        let s = a.base();
        let rels = (0..2).map(|r| s.tuples(r).into_iter().map(|t| t.iter().map(|&e| pi[e]).collect()).collect()).collect();
        let t = Structure::new(s.vocab().clone(), n, rels, vec![], vec![]).unwrap();
        let b = a.relabel(Arc::new(t), |e| pi[e]);
        prop_assert_eq!(canonical_key(&a), canonical_key(&b));
    }

    #[test]
    fn linear_iso_matches_pattern_oracle((a, b) in linear_pair(5, 4)) {
        prop_assert_eq!(partial_iso(&a, &b).unwrap(), pattern_oracle(&a, &b));
    }

    #[test]
    fn iso_is_symmetric((a, b) in linear_pair(6, 4)) {
        prop_assert_eq!(partial_iso(&a, &b).unwrap(), partial_iso(&b, &a).unwrap());
    }

    #[test]
    fn iso_is_monotone_dead(
        (a, b) in linear_pair(6, 3),
        ext in proptest::collection::vec((arb_selection(), arb_selection()), 1..3),
    ) {
        if partial_iso(&a, &b).unwrap() {
            return Ok(());
        }
        let (mut x, mut y) = (a, b);
        for (sa, sb) in ext {
            let (nx, ny) = extend_both(&x, &y, sa, sb).unwrap();
            x = nx;
            y = ny;
            prop_assert!(!partial_iso(&x, &y).unwrap());
        }
    }

    #[test]
    fn equal_keys_agree_on_iso((a, b, c) in graph_triple()) {
        if canonical_key(&a) == canonical_key(&b) {
            prop_assert_eq!(partial_iso(&a, &c).unwrap(), partial_iso(&b, &c).unwrap());
        }
    }
}

#[test]
fn all_small_linear_boards_against_brute_force() {
    // every labeled board on orders of size <= 4 with up to two rounds
    let mut boards = Vec::new();
    for n in 1..=4 {
        let base = Board::linear(n).unwrap();
        boards.push(base.clone());
        for x in 0..n {
            let b1 = base.extend(Selection::Element(x), false).unwrap();
            boards.push(b1.clone());
            for y in 0..n {
                boards.push(b1.extend(Selection::Element(y), false).unwrap());
            }
        }
    }
    for a in &boards {
        for b in &boards {
            assert_eq!(canonical_key(a) == canonical_key(b), brute_iso(a, b), "{a:?} {b:?}");
        }
    }
}
