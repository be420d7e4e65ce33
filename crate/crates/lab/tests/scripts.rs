use msgames_core::{Board, Budget, Selection, Side, Winner};
use msgames_lab::duplicator::{naive_mirror, reduction, Oblivious, ShortSideMatch, SplitBoard};
use msgames_lab::spoiler::{Interlude, MiddleRecursive, TenVsNine};
use msgames_lab::{certify_duplicator, run_spoiler, run_spoiler_against, Actor, DuplicatorScript, Trace};
use msgames_ms::{ms_winner, GameState, Variant};

fn lo(n: usize) -> Board {
    Board::linear(n).unwrap()
}

fn at(n: usize, e: usize) -> Board {
    lo(n).extend_unchecked(Selection::Element(e))
}

fn game(a: usize, b: usize, r: usize, atoms: bool) -> GameState {
    GameState::free(vec![lo(a)], vec![lo(b)], r, Variant { atoms, no_play_on_top: false }).unwrap()
}

#[test]
fn ten_v_nine_wins_with_a_move_on_top() {
    let run = run_spoiler(&TenVsNine, &game(10, 9, 4, false)).unwrap();
    assert_eq!(run.winner, Winner::Spoiler);
    assert!(!run.trace.on_top_moves().unwrap().is_empty());
    // larger orders on side A and smaller ones on side B are beaten too
    let st = GameState::free(vec![lo(10), lo(12)], vec![lo(7), lo(9)], 4, Variant::default()).unwrap();
    assert_eq!(run_spoiler(&TenVsNine, &st).unwrap().winner, Winner::Spoiler);
}

#[test]
fn middle_recursive_wins_21_v_20() {
    let run = run_spoiler(&MiddleRecursive, &game(21, 20, 5, false)).unwrap();
    assert_eq!(run.winner, Winner::Spoiler);
    assert!(run.trace.replay().is_ok());
}

#[test]
fn scripts_reject_states_outside_their_domain() {
    assert!(run_spoiler(&TenVsNine, &game(10, 9, 3, false)).is_err());
    assert!(run_spoiler(&TenVsNine, &game(9, 10, 4, false)).is_err());
    assert!(run_spoiler(&MiddleRecursive, &game(21, 20, 4, false)).is_err());
}

#[test]
fn traces_are_deterministic_and_round_trip() {
    let st = game(10, 9, 4, false);
    let t1 = run_spoiler(&TenVsNine, &st).unwrap().trace;
    let t2 = run_spoiler(&TenVsNine, &st).unwrap().trace;
    assert_eq!(t1.render(), t2.render());
    let parsed = Trace::parse(&t1.render()).unwrap();
    assert_eq!(parsed.render(), t1.render());
    assert_eq!(parsed.replay().unwrap().len(), 5);
}

#[test]
fn interlude_line_beats_the_naive_mirror() {
    let run = run_spoiler_against(&Interlude, &naive_mirror(), &game(10, 9, 4, false)).unwrap();
    assert_eq!(run.winner, Winner::Spoiler);
    let lines = &run.trace.lines;
    // L(5), answered by B(5); B(8), answered by L(6)..L(9)
    let first: Vec<String> = lines.iter().filter(|l| l.round == 1).map(|l| l.selection.to_string()).collect();
    assert_eq!(first, ["5", "5"]);
    let second: Vec<String> = lines
        .iter()
        .filter(|l| l.round == 2 && l.actor == Actor::Duplicator)
        .map(|l| l.selection.to_string())
        .collect();
    assert_eq!(second, ["6", "7", "8", "9"]);
    let on_top = run.trace.on_top_moves().unwrap();
    assert_eq!(on_top.len(), 2);
}

#[test]
fn naive_mirror_is_refuted_on_top() {
    let c = certify_duplicator(&naive_mirror(), &game(10, 9, 4, false), &Budget::unlimited()).unwrap();
    assert!(!c.certified());
    let trace = c.trace.unwrap();
    let first = &trace.lines[0];
    assert_eq!((first.actor, first.side, first.selection), (Actor::Spoiler, Side::B, Selection::Element(4)));
    assert!(!trace.on_top_moves().unwrap().is_empty());
}

#[test]
fn split_board_certifies_11_v_10_with_atoms() {
    let c = certify_duplicator(&SplitBoard, &game(11, 10, 4, true), &Budget::unlimited()).unwrap();
    assert!(c.certified(), "{:?}", c.refutation);
}

#[test]
fn split_board_at_three_rounds_is_refuted() {
    // 4 is below the three-round threshold with atoms, so no script can hold
    let st = game(5, 4, 3, true);
    assert_eq!(ms_winner(&st, &Budget::unlimited()).unwrap().winner, Winner::Spoiler);
    let c = certify_duplicator(&SplitBoard, &st, &Budget::unlimited()).unwrap();
    assert!(!c.certified());
    assert!(c.trace.unwrap().replay().is_ok());
}

#[test]
fn reduction_certifies_matched_first_moves() {
    let v = Variant { atoms: true, no_play_on_top: false };
    let st = GameState::free(vec![at(6, 2)], vec![at(5, 2)], 2, v).unwrap();
    let c = certify_duplicator(&reduction(), &st, &Budget::unlimited()).unwrap();
    assert!(c.certified(), "{:?}", c.trace.map(|t| t.render()));
}

#[test]
fn scripts_agree_with_the_solver() {
    let scripts: Vec<Box<dyn DuplicatorScript>> = vec![Box::new(ShortSideMatch), Box::new(naive_mirror()), Box::new(Oblivious)];
    for r in 1..=3 {
        for small in 1..=5 {
            for atoms in [false, true] {
                let st = game(small + 1, small, r, atoms);
                let truth = ms_winner(&st, &Budget::unlimited()).unwrap().winner;
                for s in &scripts {
                    let c = certify_duplicator(s.as_ref(), &st, &Budget::unlimited()).unwrap();
                    if c.certified() {
                        assert_eq!(truth, Winner::Duplicator, "{} on {}v{small} r={r}", s.name(), small + 1);
                    } else {
                        assert!(c.trace.unwrap().replay().is_ok());
                    }
                }
            }
        }
    }
}

#[test]
fn spoiler_wins_agree_with_the_solver() {
    for (a, b) in [(10, 9), (11, 9), (12, 7)] {
        let st = game(a, b, 4, false);
        assert_eq!(run_spoiler(&TenVsNine, &st).unwrap().winner, Winner::Spoiler);
        assert_eq!(ms_winner(&st, &Budget::unlimited()).unwrap().winner, Winner::Spoiler);
    }
}
