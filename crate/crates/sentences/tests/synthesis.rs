//! Every Spoiler win the solver finds on small orders yields a sentence
//! that separates the two sides.

use msgames_core::{Board, Budget, Quantifier, Side, Winner};
use msgames_ms::{replay_certificate, GameState, MsSolver, Variant};
use msgames_sentences::{distinguishes, parse, synthesize};

fn lo(n: usize) -> Board {
    Board::linear(n).unwrap()
}

fn check(state: &GameState, solver: &MsSolver) -> bool {
    let v = solver.solve(state, &Budget::unlimited()).unwrap();
    if v.winner != Winner::Spoiler {
        return false;
    }
    let cert = v.certificate.unwrap();
    assert!(replay_certificate(state, &cert).unwrap());
    let f = synthesize(&cert, state).unwrap();
    let p = f.profile();
    assert_eq!(p.count, state.rounds_left());
    let want: Vec<Quantifier> = cert.sides().into_iter().map(Quantifier::from_side).collect();
    assert_eq!(p.prefix, Some(want));
    assert!(distinguishes(&f, state).unwrap());
    assert_eq!(parse(&f.to_string()).unwrap(), f);
    true
}

#[test]
fn singletons_up_to_three_rounds() {
    let solver = MsSolver::new();
    let mut wins = 0;
    for atoms in [false, true] {
        let v = Variant { atoms, no_play_on_top: false };
        for r in 1..=3 {
            for n in 1..=6 {
                for m in 1..=6 {
                    if n != m {
                        let st = GameState::free(vec![lo(n)], vec![lo(m)], r, v).unwrap();
                        wins += usize::from(check(&st, &solver));
                    }
                }
            }
        }
    }
    assert!(wins > 20, "{wins}");
}

#[test]
fn sets_and_constraints() {
    let solver = MsSolver::new();
    let v = Variant::default();
    let sets: Vec<Vec<usize>> = vec![vec![1, 3], vec![2], vec![2, 4], vec![1, 2, 3], vec![5], vec![4, 6]];
    let mut wins = 0;
    for a in &sets {
        for b in &sets {
            if a == b {
                continue;
            }
            for cons in [vec![None, None, None], vec![Some(Side::B), None, None], vec![Some(Side::A), Some(Side::B), Some(Side::A)]] {
                let st = GameState::new(a.iter().map(|&n| lo(n)).collect(), b.iter().map(|&n| lo(n)).collect(), cons, v).unwrap();
                wins += usize::from(check(&st, &solver));
            }
        }
    }
    assert!(wins > 10, "{wins}");
}
