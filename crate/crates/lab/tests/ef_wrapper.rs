use msgames_core::{Board, Budget, Winner};
use msgames_ef::ef_winner;
use msgames_lab::run_ef_spoiler;

#[test]
fn six_vs_five_in_three_rounds() {
    let run = run_ef_spoiler(6, 5, 3).unwrap();
    assert_eq!(run.winner, Winner::Spoiler);
    assert!(run.lines > 1);
}

#[test]
fn halving_spoiler_agrees_with_the_solver() {
    for r in 1..=3 {
        for n in 1..=8 {
            for m in 1..n {
                let script = run_ef_spoiler(n, m, r).unwrap().winner;
                let exact = ef_winner(&Board::linear(n).unwrap(), &Board::linear(m).unwrap(), r, &Budget::unlimited())
                    .unwrap()
                    .winner;
                assert_eq!(script, exact, "{n} vs {m}, r={r}");
            }
        }
    }
}
