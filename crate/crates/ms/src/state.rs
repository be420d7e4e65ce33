use std::collections::BTreeMap;

use msgames_core::{canonical_key, partial_iso_unchecked, Board, CanonicalKey, CoreError, Side};

/// Rule switches for one game.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Variant {
    /// Boards carry unrelated atoms that either player may select.
    pub atoms: bool,
    /// Spoiler may not reselect anything already selected on a board.
    pub no_play_on_top: bool,
}

impl Variant {
    pub(crate) fn code(self) -> u8 {
        u8::from(self.atoms) | (u8::from(self.no_play_on_top) << 1)
    }
}

/// Two sets of boards and the rounds still to play.
#[derive(Debug, Clone)]
pub struct GameState {
    side_a: Vec<Board>,
    side_b: Vec<Board>,
    constraints: Vec<Option<Side>>,
    variant: Variant,
}

impl GameState {
    /// Validates and deduplicates. `constraints[i]`, when set, is the side
    /// Spoiler must play on in round `i` from now; its length is the number
    /// of rounds left.
    pub fn new(
        side_a: Vec<Board>,
        side_b: Vec<Board>,
        constraints: Vec<Option<Side>>,
        variant: Variant,
    ) -> Result<GameState, CoreError> {
        if side_a.is_empty() || side_b.is_empty() {
            return Err(CoreError::Usage("each side needs at least one board".into()));
        }
        let first = &side_a[0];
        for b in side_a.iter().chain(&side_b) {
            if b.base().vocab() != first.base().vocab() {
                return Err(CoreError::Usage("boards over different vocabularies".into()));
            }
            if b.rounds() != first.rounds() {
                return Err(CoreError::Usage("boards with different history lengths".into()));
            }
            if !variant.atoms && b.history().iter().any(|s| s.is_atom()) {
                return Err(CoreError::Usage("atom selections in a game without atoms".into()));
            }
        }
        Ok(GameState {
            side_a: dedup(side_a),
            side_b: dedup(side_b),
            constraints,
            variant,
        })
    }

    /// Unconstrained game of `rounds` rounds.
    pub fn free(side_a: Vec<Board>, side_b: Vec<Board>, rounds: usize, variant: Variant) -> Result<GameState, CoreError> {
        GameState::new(side_a, side_b, vec![None; rounds], variant)
    }

    pub fn side(&self, s: Side) -> &[Board] {
        match s {
            Side::A => &self.side_a,
            Side::B => &self.side_b,
        }
    }

    pub fn side_a(&self) -> &[Board] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[Board] {
        &self.side_b
    }

    pub fn rounds_left(&self) -> usize {
        self.constraints.len()
    }

    pub fn constraints(&self) -> &[Option<Side>] {
        &self.constraints
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// The same game with the two sides exchanged.
    pub fn swapped(&self) -> GameState {
        GameState {
            side_a: self.side_b.clone(),
            side_b: self.side_a.clone(),
            constraints: self.constraints.iter().map(|c| c.map(Side::other)).collect(),
            variant: self.variant,
        }
    }
}

/// Drops boards whose canonical key was already seen, keeping first
/// occurrences in order.
pub fn dedup(boards: Vec<Board>) -> Vec<Board> {
    let mut seen = std::collections::HashSet::new();
    boards.into_iter().filter(|b| seen.insert(canonical_key(b))).collect()
}

/// Every single-selection extension of every board, deduplicated.
pub fn duplicator_expand(boards: &[Board], variant: Variant) -> Vec<Board> {
    let mut out = BTreeMap::new();
    for b in boards {
        for s in b.extensions(variant.atoms) {
            let c = b.extend_unchecked(s);
            out.entry(canonical_key(&c)).or_insert(c);
        }
    }
    out.into_values().collect()
}

/// Index pairs `(i, j)` with `side_a[i]` and `side_b[j]` partially isomorphic.
pub fn alive_pairs_idx(a: &[Board], b: &[Board]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if partial_iso_unchecked(x, y) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Canonical-key pairs of partially isomorphic cross pairs.
pub fn alive_pairs(state: &GameState) -> Vec<(CanonicalKey, CanonicalKey)> {
    let mut out: Vec<(CanonicalKey, CanonicalKey)> = alive_pairs_idx(&state.side_a, &state.side_b)
        .into_iter()
        .map(|(i, j)| (canonical_key(&state.side_a[i]), canonical_key(&state.side_b[j])))
        .collect();
    out.sort();
    out
}

/// Boards of each side that still have an alive partner.
pub fn prune_dead(a: &[Board], b: &[Board]) -> (Vec<Board>, Vec<Board>) {
    let mut live_a = vec![false; a.len()];
    let mut live_b = vec![false; b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if (!live_a[i] || !live_b[j]) && partial_iso_unchecked(x, y) {
                live_a[i] = true;
                live_b[j] = true;
            }
        }
    }
    let keep = |v: &[Board], live: &[bool]| v.iter().zip(live).filter(|(_, &l)| l).map(|(b, _)| b.clone()).collect();
    (keep(a, &live_a), keep(b, &live_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use msgames_core::Selection;

    fn lo(n: usize) -> Board {
        Board::linear(n).unwrap()
    }

    #[test]
    fn expand_counts() {
        assert_eq!(duplicator_expand(&[lo(2)], Variant::default()).len(), 2);
        assert_eq!(duplicator_expand(&[lo(4)], Variant::default()).len(), 4);
        let with_atom = lo(3).extend(Selection::Atom(0), true).unwrap();
        let v = Variant { atoms: true, ..Variant::default() };
        let ext = duplicator_expand(&[with_atom], v);
        assert_eq!(ext.len(), 5);
        assert!(ext.iter().any(|b| b.history().last() == Some(&Selection::Atom(1))));
    }

    #[test]
    fn fresh_state_all_alive() {
        let s = GameState::free(vec![lo(3), lo(4)], vec![lo(2)], 2, Variant::default()).unwrap();
        assert_eq!(alive_pairs(&s).len(), 2);
    }

    #[test]
    fn dead_board_dropped() {
        let b = lo(3).extend(Selection::Element(0), false).unwrap();
        let b = b.extend(Selection::Element(1), false).unwrap();
        let a1 = lo(3).extend(Selection::Element(2), false).unwrap().extend(Selection::Element(0), false).unwrap();
        let a2 = lo(3).extend(Selection::Element(0), false).unwrap().extend(Selection::Element(2), false).unwrap();
        let (pa, pb) = prune_dead(&[a1, a2.clone()], &[b]);
        assert_eq!(pa, vec![a2]);
        assert_eq!(pb.len(), 1);
    }

    #[test]
    fn duplicates_removed() {
        let s = GameState::free(vec![lo(3), lo(3)], vec![lo(2)], 1, Variant::default()).unwrap();
        assert_eq!(s.side_a().len(), 1);
    }

    #[test]
    fn validation() {
        assert!(GameState::free(vec![], vec![lo(2)], 1, Variant::default()).is_err());
        let a = lo(3).extend(Selection::Element(0), false).unwrap();
        assert!(GameState::free(vec![a], vec![lo(2)], 1, Variant::default()).is_err());
        let a = lo(3).extend(Selection::Atom(0), true).unwrap();
        let b = lo(3).extend(Selection::Atom(0), true).unwrap();
        assert!(GameState::free(vec![a], vec![b], 1, Variant::default()).is_err());
    }

    #[test]
    fn swap_mirrors_constraints() {
        let s = GameState::new(vec![lo(3)], vec![lo(2)], vec![Some(Side::A), None], Variant::default()).unwrap();
        let t = s.swapped();
        assert_eq!(t.constraints(), &[Some(Side::B), None]);
        assert_eq!(t.side_a()[0].base().size(), 2);
    }
}
