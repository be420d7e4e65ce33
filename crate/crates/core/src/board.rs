use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::{CoreError, Structure};

/// What was picked on a board in one round.
///
/// Atom ids are per board and introduced in first-use order, so the `j`-th
/// distinct atom a board ever sees has id `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Selection {
    Element(usize),
    Atom(usize),
}

impl Selection {
    pub fn is_atom(self) -> bool {
        matches!(self, Selection::Atom(_))
    }
}

/// 1-based: `Element(0)` prints as `1`, `Atom(0)` as `a1`.
impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selection::Element(e) => write!(f, "{}", e + 1),
            Selection::Atom(a) => write!(f, "a{}", a + 1),
        }
    }
}

impl FromStr for Selection {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (atom, digits) = match s.strip_prefix('a') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let n: usize = digits
            .parse()
            .map_err(|_| CoreError::Usage(format!("bad selection `{s}`")))?;
        if n == 0 {
            return Err(CoreError::Usage(format!("selections are 1-based, got `{s}`")));
        }
        Ok(if atom { Selection::Atom(n - 1) } else { Selection::Element(n - 1) })
    }
}

/// A structure together with the selections made on it so far.
#[derive(Debug, Clone)]
pub struct Board {
    base: Arc<Structure>,
    history: Vec<Selection>,
    atoms: usize,
}

impl PartialEq for Board {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.base, &other.base) || self.base == other.base)
            && self.history == other.history
    }
}

impl Eq for Board {}

impl Board {
    pub fn new(base: Arc<Structure>) -> Board {
        Board {
            base,
            history: Vec::new(),
            atoms: 0,
        }
    }

    /// Board on a fresh linear order, sharing the structure with other
    /// boards of the same size.
    pub fn linear(n: usize) -> Result<Board, CoreError> {
        Ok(Board::new(Structure::shared_linear_order(n)?))
    }

    /// Replays `history` onto an empty board, validating each selection.
    pub fn with_history(base: Arc<Structure>, history: &[Selection]) -> Result<Board, CoreError> {
        let mut b = Board::new(base);
        for &s in history {
            b = b.extend(s, true)?;
        }
        Ok(b)
    }

    pub fn base(&self) -> &Structure {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<Structure> {
        &self.base
    }

    pub fn history(&self) -> &[Selection] {
        &self.history
    }

    pub fn rounds(&self) -> usize {
        self.history.len()
    }

    /// Number of distinct atoms introduced so far.
    pub fn atom_ledger(&self) -> usize {
        self.atoms
    }

    pub fn is_linear(&self) -> bool {
        self.base.is_linear_order()
    }

    /// Whether `e` was selected in an earlier round.
    pub fn is_selected(&self, s: Selection) -> bool {
        self.history.contains(&s)
    }

    /// Appends one selection. A fresh atom must use id `atom_ledger()`.
    pub fn extend(&self, s: Selection, atoms_allowed: bool) -> Result<Board, CoreError> {
        match s {
            Selection::Element(e) if e >= self.base.size() => Err(CoreError::Domain(format!(
                "element {} out of range for a universe of size {}",
                e + 1,
                self.base.size()
            ))),
            Selection::Atom(_) if !atoms_allowed => {
                Err(CoreError::Usage("atom selection in a game without atoms".into()))
            }
            Selection::Atom(a) if a > self.atoms => Err(CoreError::Domain(format!(
                "atom a{} skips ahead of the ledger ({} atoms so far)",
                a + 1,
                self.atoms
            ))),
            _ => Ok(self.extend_unchecked(s)),
        }
    }

    pub fn extend_unchecked(&self, s: Selection) -> Board {
        let mut history = Vec::with_capacity(self.history.len() + 1);
        history.extend_from_slice(&self.history);
        history.push(s);
        let atoms = match s {
            Selection::Atom(a) if a == self.atoms => self.atoms + 1,
            _ => self.atoms,
        };
        Board {
            base: self.base.clone(),
            history,
            atoms,
        }
    }

    /// Every single-selection extension: all elements, then (with atoms)
    /// every existing atom and one fresh atom.
    pub fn extensions(&self, atoms: bool) -> Vec<Selection> {
        let mut out: Vec<Selection> = (0..self.base.size()).map(Selection::Element).collect();
        if atoms {
            out.extend((0..=self.atoms).map(Selection::Atom));
        }
        out
    }

    /// Selections Spoiler may make. Without play on top, anything already
    /// selected on this board (element or atom) is excluded.
    pub fn spoiler_moves(&self, atoms: bool, no_play_on_top: bool) -> Vec<Selection> {
        let mut out = self.extensions(atoms);
        if no_play_on_top {
            out.retain(|s| !self.is_selected(*s));
        }
        out
    }

    /// Same board with every element index replaced by `map[index]`.
    pub fn relabel(&self, base: Arc<Structure>, map: impl Fn(usize) -> usize) -> Board {
        let history = self
            .history
            .iter()
            .map(|s| match *s {
                Selection::Element(e) => Selection::Element(map(e)),
                a => a,
            })
            .collect();
        Board {
            base,
            history,
            atoms: self.atoms,
        }
    }
}
