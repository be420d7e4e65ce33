use msgames_core::Budget;
use msgames_lab::duplicator::{ShortSideMatch, Oblivious};
use msgames_lab::{ladder, DuplicatorScript, LabError};

fn family(_: usize, _: usize) -> Vec<Box<dyn DuplicatorScript>> {
    vec![Box::new(ShortSideMatch), Box::new(Oblivious)]
}

#[test]
fn three_rounds_with_atoms_from_five() {
    let rep = ladder(&family, 5, 8, 3, true, &Budget::unlimited()).unwrap();
    assert_eq!(rep.steps.len(), 3);
    assert_eq!(rep.pairs.len(), 6);
}

#[test]
fn two_rounds_from_two() {
    let rep = ladder(&family, 2, 6, 2, false, &Budget::unlimited()).unwrap();
    assert_eq!(rep.pairs.len(), 10);
}

#[test]
fn three_rounds_plain_from_four() {
    let rep = ladder(&family, 4, 7, 3, false, &Budget::unlimited()).unwrap();
    assert_eq!(rep.steps.len(), 3);
}

#[test]
fn a_gap_is_reported() {
    let e = ladder(&family, 3, 6, 3, false, &Budget::unlimited()).unwrap_err();
    assert_eq!(e, LabError::Gap { big: 4, small: 3 });
}
