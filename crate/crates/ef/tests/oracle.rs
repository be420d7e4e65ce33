use msgames_core::{partial_iso_unchecked, Board, Budget, Quantifier, Side, Winner};
use msgames_ef::{ef_prefix_winner, EfSolver};

fn lo(n: usize) -> Board {
    Board::linear(n).unwrap()
}

/// Plain minimax with no memo, capping or reply pruning.
fn brute(a: &Board, b: &Board, sides: &[Option<Side>]) -> bool {
    if !partial_iso_unchecked(a, b) {
        return true;
    }
    let Some((&first, rest)) = sides.split_first() else {
        return false;
    };
    let try_side = |side: Side| {
        let (mover, other) = if side == Side::A { (a, b) } else { (b, a) };
        mover.extensions(false).into_iter().any(|s| {
            let m = mover.extend_unchecked(s);
            other.extensions(false).into_iter().all(|t| {
                let o = other.extend_unchecked(t);
                if side == Side::A {
                    brute(&m, &o, rest)
                } else {
                    brute(&o, &m, rest)
                }
            })
        })
    };
    match first {
        Some(s) => try_side(s),
        None => try_side(Side::A) || try_side(Side::B),
    }
}

#[test]
fn pruned_search_matches_brute_force() {
    let solver = EfSolver::new();
    let budget = Budget::unlimited();
    for n in 1..=7 {
        for m in 1..=n {
            for r in 0..=3 {
                let expect = brute(&lo(n), &lo(m), &vec![None; r]);
                let got = solver.winner(&lo(n), &lo(m), r, &budget).unwrap() == Winner::Spoiler;
                assert_eq!(got, expect, "lo:{n} vs lo:{m}, r={r}");
            }
        }
    }
}

#[test]
fn prefix_search_matches_brute_force() {
    let solver = EfSolver::new();
    let budget = Budget::unlimited();
    let qs = [None, Some(Side::A), Some(Side::B)];
    for n in 1..=5 {
        for m in 1..=5 {
            for r in 1..=3 {
                let mut idx = vec![0usize; r];
                loop {
                    let sides: Vec<Option<Side>> = idx.iter().map(|&i| qs[i]).collect();
                    let expect = brute(&lo(n), &lo(m), &sides);
                    let got = solver.solve_constrained(&lo(n), &lo(m), &sides, &budget).unwrap().winner
                        == Winner::Spoiler;
                    assert_eq!(got, expect, "lo:{n} vs lo:{m}, {sides:?}");
                    let mut p = 0;
                    while p < r {
                        idx[p] += 1;
                        if idx[p] < 3 {
                            break;
                        }
                        idx[p] = 0;
                        p += 1;
                    }
                    if p == r {
                        break;
                    }
                }
            }
        }
    }
}

#[test]
fn exists_only_prefix_threshold() {
    // Forcing every move into the larger order costs Spoiler nothing: the
    // threshold is the unconstrained 2^r - 1.
    let budget = Budget::unlimited();
    for n in 1..=9 {
        for m in 1..n {
            for r in 1..=4 {
                let prefix = vec![Quantifier::Exists; r];
                let v = ef_prefix_winner(&lo(n), &lo(m), &prefix, &budget).unwrap();
                let expect = brute(&lo(n), &lo(m), &vec![Some(Side::A); r]);
                assert_eq!(v.winner == Winner::Spoiler, expect, "lo:{n} vs lo:{m}, r={r}");
                assert_eq!(expect, m + 1 < 1 << r, "lo:{n} vs lo:{m}, r={r}");
            }
        }
    }
}

#[test]
fn extra_rounds_never_hurt_spoiler() {
    let solver = EfSolver::new();
    let budget = Budget::unlimited();
    for n in 1..=12 {
        for m in 1..=n {
            for r in 0..4 {
                if solver.winner(&lo(n), &lo(m), r, &budget).unwrap() == Winner::Spoiler {
                    assert_eq!(solver.winner(&lo(n), &lo(m), r + 1, &budget).unwrap(), Winner::Spoiler);
                }
            }
        }
    }
}

#[test]
fn threshold_is_two_to_the_r_minus_one() {
    let solver = EfSolver::new();
    let budget = Budget::unlimited();
    for r in 0..=4usize {
        for n in 1..=20 {
            for m in 1..n {
                let dup = solver.winner(&lo(n), &lo(m), r, &budget).unwrap() == Winner::Duplicator;
                assert_eq!(dup, m + 1 >= 1 << r, "lo:{n} vs lo:{m}, r={r}");
            }
        }
    }
}

