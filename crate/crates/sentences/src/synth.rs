//! Distinguishing sentences from Spoiler certificates.
//!
//! The certificate is replayed against the oblivious Duplicator. Each
//! side-A board is dropped at the first stage where no side-B board is
//! partially isomorphic to it; its complete atomic type at that stage over
//! the constants and the variables chosen so far becomes one disjunct. The
//! quantifier of round `i` is existential iff Spoiler moved on side A.
//!
//! Every side-A structure satisfies the matrix along the path the
//! certificate prescribes, and a side-B board matching some disjunct would
//! have kept that side-A board alive, so no side-B structure does.

use std::collections::BTreeSet;

use msgames_core::{canonical_key, Board, Quantifier, Selection, Side, ORDER};
use msgames_ms::{duplicator_expand, prune_dead, replay_certificate, GameState, SpoilerCertificate};

use crate::ast::{Formula, Term};
use crate::eval::{eval, Model};
use crate::SentenceError;

fn var(i: usize) -> String {
    format!("x{}", i + 1)
}

/// Element or atom denoted by a term on a board.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Val {
    Elem(usize),
    Atom(usize),
}

/// Conjunction of literals fixing the atomic type of the constants and
/// the board's selections.
fn atomic_type(board: &Board, with_atoms: bool) -> Formula {
    let s = board.base();
    let order = s.vocab().relation_index(ORDER);
    let mut terms: Vec<(Term, Val)> = s
        .vocab()
        .constants()
        .iter()
        .zip(s.constants())
        .map(|(c, &e)| (Term::Const(c.clone()), Val::Elem(e)))
        .collect();
    for (i, h) in board.history().iter().enumerate() {
        let v = match *h {
            Selection::Element(e) => Val::Elem(e),
            Selection::Atom(a) => Val::Atom(a),
        };
        terms.push((Term::Var(var(i)), v));
    }
    let mut lits = Vec::new();
    if with_atoms {
        for (t, v) in &terms {
            let atom = match *v {
                Val::Atom(_) => true,
                Val::Elem(e) => s.is_atom_element(e),
            };
            let l = Formula::Atom(t.clone());
            lits.push(if atom { l } else { Formula::not(l) });
        }
    }
    let less = |x: usize, y: usize| order.is_some_and(|o| s.holds(o, &[x, y]));
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            let (ti, vi) = &terms[i];
            let (tj, vj) = &terms[j];
            match (*vi, *vj) {
                (Val::Elem(x), Val::Elem(y)) => {
                    if x == y {
                        lits.push(Formula::Eq(ti.clone(), tj.clone()));
                        continue;
                    }
                    let (xy, yx) = (less(x, y), less(y, x));
                    if xy != yx {
                        lits.push(if xy {
                            Formula::Less(ti.clone(), tj.clone())
                        } else {
                            Formula::Less(tj.clone(), ti.clone())
                        });
                        continue;
                    }
                    lits.push(Formula::not(Formula::Eq(ti.clone(), tj.clone())));
                    for (a, b, h) in [(ti, tj, xy), (tj, ti, yx)] {
                        let l = Formula::Less(a.clone(), b.clone());
                        lits.push(if h { l } else { Formula::not(l) });
                    }
                }
                (Val::Atom(x), Val::Atom(y)) => {
                    let l = Formula::Eq(ti.clone(), tj.clone());
                    lits.push(if x == y { l } else { Formula::not(l) });
                }
                // told apart by the atom literals
                _ => {}
            }
        }
    }
    match lits.len() {
        0 => match terms.first() {
            Some((t, _)) => Formula::Eq(t.clone(), t.clone()),
            None => Formula::Eq(Term::Var(var(0)), Term::Var(var(0))),
        },
        1 => lits.pop().expect("one"),
        _ => Formula::And(lits),
    }
}

fn check_supported(state: &GameState) -> Result<(), SentenceError> {
    for b in state.side_a().iter().chain(state.side_b()) {
        if b.rounds() > 0 {
            return Err(SentenceError::Usage("synthesis needs boards with empty histories".into()));
        }
        let s = b.base();
        for (name, arity) in s.vocab().relations() {
            if name != ORDER || *arity != 2 {
                return Err(SentenceError::Usage(format!("synthesis supports only `{ORDER}` and constants, found `{name}`")));
            }
            let o = s.vocab().relation_index(ORDER).expect("present");
            if (0..s.size()).any(|e| s.holds(o, &[e, e])) {
                return Err(SentenceError::Usage(format!("`{ORDER}` must be irreflexive")));
            }
        }
    }
    Ok(())
}

/// The model a side structure is evaluated on: under atoms, the structure
/// plus one atom per round.
pub fn model_for<'a>(board: &'a Board, state: &GameState) -> Model<'a> {
    let atoms = if state.variant().atoms { state.rounds_left() } else { 0 };
    Model::with_atoms(board.base(), atoms)
}

/// True iff `s` holds on every side-A structure and fails on every side-B
/// structure of `state`.
pub fn distinguishes(s: &Formula, state: &GameState) -> Result<bool, SentenceError> {
    for b in state.side_a() {
        if !eval(s, &model_for(b, state))? {
            return Ok(false);
        }
    }
    for b in state.side_b() {
        if eval(s, &model_for(b, state))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Prenex sentence with one quantifier per certificate round that is true
/// on every side-A structure and false on every side-B structure. The
/// result is checked with the evaluator before it is returned.
pub fn synthesize(cert: &SpoilerCertificate, state: &GameState) -> Result<Formula, SentenceError> {
    if !replay_certificate(state, cert)? {
        return Err(SentenceError::Certificate("the certificate does not win".into()));
    }
    check_supported(state)?;
    let v = state.variant();
    let with_atoms = v.atoms || state.side_a().iter().chain(state.side_b()).any(|b| b.base().vocab().has_atom_predicate());
    let mut disjuncts: Vec<Formula> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut record = |boards: &[Board], alive: &[Board]| {
        let live: BTreeSet<_> = alive.iter().map(canonical_key).collect();
        for b in boards {
            if !live.contains(&canonical_key(b)) {
                let t = atomic_type(b, with_atoms);
                if seen.insert(t.to_string()) {
                    disjuncts.push(t);
                }
            }
        }
    };
    let (mut a, mut b) = (state.side_a().to_vec(), state.side_b().to_vec());
    for round in &cert.rounds {
        let (pa, pb) = prune_dead(&a, &b);
        record(&a, &pa);
        if pa.is_empty() || pb.is_empty() {
            (a, b) = (Vec::new(), Vec::new());
            continue;
        }
        let (mover, other) = match round.side {
            Side::A => (&pa, &pb),
            Side::B => (&pb, &pa),
        };
        let mut moved = Vec::with_capacity(mover.len());
        for x in mover {
            let s = round
                .choices
                .get(&canonical_key(x))
                .ok_or_else(|| SentenceError::Certificate("missing selection".into()))?;
            moved.push(x.extend_unchecked(*s));
        }
        let expanded = duplicator_expand(other, v);
        (a, b) = match round.side {
            Side::A => (moved, expanded),
            Side::B => (expanded, moved),
        };
    }
    let (pa, _) = prune_dead(&a, &b);
    if !pa.is_empty() {
        return Err(SentenceError::Certificate("side-A boards survive the last round".into()));
    }
    record(&a, &pa);
    if disjuncts.is_empty() {
        return Err(SentenceError::Certificate("no side-A board to describe".into()));
    }
    let matrix = if disjuncts.len() == 1 { disjuncts.pop().expect("one") } else { Formula::Or(disjuncts) };
    let sentence = cert.rounds.iter().enumerate().rev().fold(matrix, |f, (i, r)| {
        match Quantifier::from_side(r.side) {
            Quantifier::Exists => Formula::exists(&var(i), f),
            Quantifier::Forall => Formula::forall(&var(i), f),
        }
    });
    if !distinguishes(&sentence, state)? {
        return Err(SentenceError::Certificate("the synthesized sentence does not separate the sides".into()));
    }
    Ok(sentence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use msgames_core::{Budget, Structure, Vocabulary, Winner};
    use msgames_ms::{MsSolver, Variant};
    use std::sync::Arc;

    fn lo(n: usize) -> Board {
        Board::linear(n).unwrap()
    }

    fn synth(state: &GameState) -> Formula {
        let v = MsSolver::new().solve(state, &Budget::unlimited()).unwrap();
        assert_eq!(v.winner, Winner::Spoiler);
        synthesize(&v.certificate.unwrap(), state).unwrap()
    }

    #[test]
    fn two_versus_one() {
        let st = GameState::free(vec![lo(2)], vec![lo(1)], 2, Variant::default()).unwrap();
        let f = synth(&st);
        assert!(f.profile().count <= 2);
        assert!(distinguishes(&f, &st).unwrap());
    }

    #[test]
    fn prefix_follows_certificate() {
        let st = GameState::free(vec![lo(4)], vec![lo(3)], 3, Variant::default()).unwrap();
        let v = MsSolver::new().solve(&st, &Budget::unlimited()).unwrap();
        let cert = v.certificate.unwrap();
        let f = synthesize(&cert, &st).unwrap();
        let want: Vec<Quantifier> = cert.sides().into_iter().map(Quantifier::from_side).collect();
        assert_eq!(f.profile().prefix, Some(want));
    }

    #[test]
    fn constants_without_rounds() {
        let voc = Vocabulary::new(vec![(ORDER.into(), 2)], vec!["c".into(), "d".into()], false).unwrap();
        let mk = |c: usize, d: usize| {
            let t: Vec<Vec<usize>> = (0..3).flat_map(|i| (i + 1..3).map(move |j| vec![i, j])).collect();
            Board::new(Arc::new(Structure::new(voc.clone(), 3, vec![t], vec![c, d], vec![]).unwrap()))
        };
        let st = GameState::free(vec![mk(0, 2)], vec![mk(2, 0), mk(1, 1)], 0, Variant::default()).unwrap();
        let f = synth(&st);
        assert_eq!(f.profile().count, 0);
        assert_eq!(f.to_string(), "c < d");
    }

    #[test]
    fn atoms_literals() {
        let v = Variant { atoms: true, no_play_on_top: false };
        let st = GameState::free(vec![lo(2)], vec![lo(1)], 2, v).unwrap();
        let f = synth(&st);
        assert!(distinguishes(&f, &st).unwrap());
    }

    #[test]
    fn rejects_histories_and_losing_certificates() {
        let st = GameState::free(vec![lo(2)], vec![lo(1)], 2, Variant::default()).unwrap();
        let cert = MsSolver::new().solve(&st, &Budget::unlimited()).unwrap().certificate.unwrap();
        let other = GameState::free(vec![lo(3)], vec![lo(3)], 2, Variant::default()).unwrap();
        assert!(synthesize(&cert, &other).is_err());
        let moved = lo(2).extend(Selection::Element(0), false).unwrap();
        let h = GameState::free(vec![moved], vec![lo(1).extend(Selection::Element(0), false).unwrap()], 1, Variant::default()).unwrap();
        let c = MsSolver::new().solve(&h, &Budget::unlimited()).unwrap().certificate.unwrap();
        assert!(matches!(synthesize(&c, &h), Err(SentenceError::Usage(_))));
    }
}
