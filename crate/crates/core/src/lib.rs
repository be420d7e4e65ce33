//! Finite relational structures and the labeled boards that games are played on.
//!
//! Element indices are 0-based everywhere in this crate. Text renderings
//! (`Display` for [`Selection`]) are 1-based, matching the `B(i)` / `L(i)`
//! notation used in game traces.

mod board;
mod budget;
mod canon;
mod error;
mod iso;
pub mod linear;
mod structure;

pub use board::{Board, Selection};
pub use budget::{Budget, BudgetExceeded};
pub use canon::{canonical_key, CanonicalKey};
pub use error::CoreError;
pub use iso::{partial_iso, partial_iso_unchecked};
pub use structure::{Structure, Vocabulary, ORDER};

/// One of the two sides of a game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Side::A => 'A',
            Side::B => 'B',
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl std::str::FromStr for Side {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(Side::A),
            "B" | "b" => Ok(Side::B),
            other => Err(CoreError::Usage(format!("unknown side `{other}`"))),
        }
    }
}

/// A quantifier in a prefix. `Exists` moves are made on side A, `Forall`
/// moves on side B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn side(self) -> Side {
        match self {
            Quantifier::Exists => Side::A,
            Quantifier::Forall => Side::B,
        }
    }

    pub fn from_side(side: Side) -> Quantifier {
        match side {
            Side::A => Quantifier::Exists,
            Side::B => Quantifier::Forall,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Quantifier::Exists => 'E',
            Quantifier::Forall => 'A',
        }
    }

    /// Parses a prefix such as `EAE` or `∃∀∃`.
    pub fn parse_prefix(s: &str) -> Result<Vec<Quantifier>, CoreError> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'E' | 'e' | '∃' => Ok(Quantifier::Exists),
                'A' | 'a' | '∀' => Ok(Quantifier::Forall),
                other => Err(CoreError::Usage(format!("bad quantifier `{other}` in prefix"))),
            })
            .collect()
    }

    pub fn render_prefix(prefix: &[Quantifier]) -> String {
        prefix.iter().map(|q| q.letter()).collect()
    }
}

/// The player that won a game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Winner {
    Spoiler,
    Duplicator,
}

impl std::fmt::Display for Winner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Winner::Spoiler => write!(f, "Spoiler"),
            Winner::Duplicator => write!(f, "Duplicator"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_round_trip() {
        let p = Quantifier::parse_prefix("E∀e").unwrap();
        assert_eq!(p, vec![Quantifier::Exists, Quantifier::Forall, Quantifier::Exists]);
        assert_eq!(Quantifier::render_prefix(&p), "EAE");
        assert!(Quantifier::parse_prefix("EX").is_err());
        assert_eq!(p[1].side(), Side::B);
    }

    #[test]
    fn sides() {
        assert_eq!(Side::A.other(), Side::B);
        assert_eq!("b".parse::<Side>().unwrap(), Side::B);
        assert!("C".parse::<Side>().is_err());
    }
}
