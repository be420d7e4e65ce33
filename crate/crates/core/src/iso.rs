use crate::{Board, CoreError, Selection};

/// Whether the round-by-round correspondence between the selections of `a`
/// and `b`, together with the constants, is a partial isomorphism.
///
/// An atom matches only the atom with the same id on the other board and
/// never a structure element.
pub fn partial_iso(a: &Board, b: &Board) -> Result<bool, CoreError> {
    if a.base().vocab() != b.base().vocab() {
        return Err(CoreError::Usage("boards over different vocabularies".into()));
    }
    if a.rounds() != b.rounds() {
        return Err(CoreError::Usage(format!(
            "history lengths differ ({} vs {})",
            a.rounds(),
            b.rounds()
        )));
    }
    Ok(partial_iso_unchecked(a, b))
}

/// [`partial_iso`] without the vocabulary and length checks.
pub fn partial_iso_unchecked(a: &Board, b: &Board) -> bool {
    if a.is_linear() && b.is_linear() {
        return linear_iso(a.history(), b.history());
    }
    general_iso(a, b)
}

fn linear_iso(ha: &[Selection], hb: &[Selection]) -> bool {
    for i in 0..ha.len() {
        match (ha[i], hb[i]) {
            (Selection::Element(x), Selection::Element(y)) => {
                for j in 0..i {
                    if let (Selection::Element(u), Selection::Element(v)) = (ha[j], hb[j]) {
                        if x.cmp(&u) != y.cmp(&v) {
                            return false;
                        }
                    }
                }
            }
            (Selection::Atom(x), Selection::Atom(y)) if x == y => {}
            _ => return false,
        }
    }
    true
}

fn general_iso(a: &Board, b: &Board) -> bool {
    let sa = a.base();
    let sb = b.base();
    let ta: Vec<Selection> = sa
        .constants()
        .iter()
        .map(|&c| Selection::Element(c))
        .chain(a.history().iter().copied())
        .collect();
    let tb: Vec<Selection> = sb
        .constants()
        .iter()
        .map(|&c| Selection::Element(c))
        .chain(b.history().iter().copied())
        .collect();
    let d = ta.len();
    for i in 0..d {
        match (ta[i], tb[i]) {
            (Selection::Element(x), Selection::Element(y)) => {
                if sa.is_atom_element(x) != sb.is_atom_element(y) {
                    return false;
                }
                for j in 0..i {
                    if let (Selection::Element(u), Selection::Element(v)) = (ta[j], tb[j]) {
                        if (x == u) != (y == v) {
                            return false;
                        }
                    }
                }
            }
            (Selection::Atom(x), Selection::Atom(y)) if x == y => {}
            _ => return false,
        }
    }
    // Only tuples made entirely of structure elements can hold.
    let elems: Vec<usize> = (0..d).filter(|&i| !ta[i].is_atom()).collect();
    let elem = |s: Selection| match s {
        Selection::Element(e) => e,
        Selection::Atom(_) => unreachable!(),
    };
    for (r, (_, arity)) in sa.vocab().relations().iter().enumerate() {
        let arity = *arity;
        if elems.is_empty() {
            break;
        }
        let mut idx = vec![0usize; arity];
        let mut tup_a = vec![0usize; arity];
        let mut tup_b = vec![0usize; arity];
        loop {
            for p in 0..arity {
                tup_a[p] = elem(ta[elems[idx[p]]]);
                tup_b[p] = elem(tb[elems[idx[p]]]);
            }
            if sa.holds(r, &tup_a) != sb.holds(r, &tup_b) {
                return false;
            }
            // odometer over elems^arity
            let mut p = 0;
            loop {
                if p == arity {
                    break;
                }
                idx[p] += 1;
                if idx[p] < elems.len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
            if p == arity {
                break;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Structure, Vocabulary};
    use std::sync::Arc;

    fn lo(n: usize, hist: &[usize]) -> Board {
        let mut b = Board::linear(n).unwrap();
        for &h in hist {
            b = b.extend(Selection::Element(h), true).unwrap();
        }
        b
    }

    /// The same order built through the general constructor, so the
    /// general code path is exercised.
    fn lo_general(n: usize, hist: &[usize]) -> Board {
        let mut tuples = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                tuples.push(vec![i, j]);
            }
        }
        let vocab = Vocabulary::new(vec![("<".into(), 2), ("E".into(), 1)], vec![], false).unwrap();
        let s = Structure::new(vocab, n, vec![tuples, vec![]], vec![], vec![]).unwrap();
        let mut b = Board::new(Arc::new(s));
        for &h in hist {
            b = b.extend(Selection::Element(h), true).unwrap();
        }
        b
    }

    #[test]
    fn empty_histories_are_iso() {
        assert!(partial_iso(&lo(3, &[]), &lo(2, &[])).unwrap());
    }

    #[test]
    fn flipped_order_is_not_iso() {
        // B(2), B(1) against L(1), L(2)
        let b = lo(3, &[1, 0]);
        let l = lo(2, &[0, 1]);
        assert!(!partial_iso(&b, &l).unwrap());
        assert!(!partial_iso(&lo_general(3, &[1, 0]), &lo_general(2, &[0, 1])).unwrap());
    }

    #[test]
    fn single_selection_always_iso() {
        for i in 0..4 {
            for j in 0..3 {
                assert!(partial_iso(&lo(4, &[i]), &lo(3, &[j])).unwrap());
            }
        }
    }

    #[test]
    fn mismatched_lengths_are_usage_errors() {
        assert!(partial_iso(&lo(3, &[0]), &lo(3, &[])).is_err());
        assert!(partial_iso(&lo(3, &[]), &lo_general(3, &[])).is_err());
    }

    #[test]
    fn atoms_match_by_id_only() {
        let a = lo(3, &[0]).extend(Selection::Atom(0), true).unwrap();
        let b = lo(3, &[1]).extend(Selection::Atom(0), true).unwrap();
        let c = lo(3, &[1]).extend(Selection::Element(2), true).unwrap();
        assert!(partial_iso(&a, &b).unwrap());
        assert!(!partial_iso(&a, &c).unwrap());
    }

    #[test]
    fn constants_participate() {
        let vocab = Vocabulary::new(vec![("<".into(), 2)], vec!["c".into()], false).unwrap();
        let mk = |c: usize| {
            let s = Structure::new(
                vocab.clone(),
                3,
                vec![vec![vec![0, 1], vec![0, 2], vec![1, 2]]],
                vec![c],
                vec![],
            )
            .unwrap();
            Board::new(Arc::new(s))
        };
        let a = mk(0).extend(Selection::Element(1), true).unwrap();
        let b = mk(2).extend(Selection::Element(1), true).unwrap();
        assert!(!partial_iso(&a, &b).unwrap());
        let b = mk(1).extend(Selection::Element(2), true).unwrap();
        assert!(partial_iso(&a, &b).unwrap());
    }
}
