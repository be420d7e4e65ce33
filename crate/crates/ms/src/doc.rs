//! JSON documents for structures, boards and game states. Indices are
//! 1-based, as everywhere in user-facing text.

use std::collections::BTreeMap;
use std::sync::Arc;

use msgames_core::{Board, CoreError, Selection, Side, Structure, Vocabulary};
use serde::{Deserialize, Serialize};

use crate::state::{GameState, Variant};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StructureDoc {
    /// The linear order on `linear` elements.
    Linear { linear: usize },
    General {
        universe: usize,
        #[serde(default)]
        relations: BTreeMap<String, Vec<Vec<usize>>>,
        #[serde(default)]
        constants: BTreeMap<String, usize>,
        /// Elements satisfying the atom predicate; present iff the
        /// vocabulary has one.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        atoms: Option<Vec<usize>>,
    },
}

fn one_based(i: usize, what: &str) -> Result<usize, CoreError> {
    i.checked_sub(1)
        .ok_or_else(|| CoreError::Domain(format!("{what}: indices are 1-based, got 0")))
}

impl StructureDoc {
    /// Relations are ordered by name; an empty relation is taken as binary.
    pub fn to_structure(&self) -> Result<Structure, CoreError> {
        match self {
            StructureDoc::Linear { linear } => Structure::linear_order(*linear),
            StructureDoc::General { universe, relations, constants, atoms } => {
                let mut rel_sig = Vec::new();
                let mut rel_tuples = Vec::new();
                for (name, tuples) in relations {
                    let arity = tuples.first().map_or(2, Vec::len);
                    rel_sig.push((name.clone(), arity));
                    let mut ts = Vec::with_capacity(tuples.len());
                    for t in tuples {
                        ts.push(t.iter().map(|&e| one_based(e, name)).collect::<Result<Vec<_>, _>>()?);
                    }
                    rel_tuples.push(ts);
                }
                let vocab = Vocabulary::new(rel_sig, constants.keys().cloned().collect(), atoms.is_some())?;
                let consts = constants
                    .iter()
                    .map(|(n, &c)| one_based(c, n))
                    .collect::<Result<Vec<_>, _>>()?;
                let atom_elems = atoms
                    .iter()
                    .flatten()
                    .map(|&e| one_based(e, "atoms"))
                    .collect::<Result<Vec<_>, _>>()?;
                Structure::new(vocab, *universe, rel_tuples, consts, atom_elems)
            }
        }
    }

    pub fn from_structure(s: &Structure) -> StructureDoc {
        if s.is_linear_order() {
            return StructureDoc::Linear { linear: s.size() };
        }
        let relations = s
            .relation_map()
            .into_iter()
            .map(|(n, ts)| (n.to_string(), ts.into_iter().map(|t| t.into_iter().map(|e| e + 1).collect()).collect()))
            .collect();
        let constants = s
            .vocab()
            .constants()
            .iter()
            .zip(s.constants())
            .map(|(n, &c)| (n.clone(), c + 1))
            .collect();
        let atoms = s
            .vocab()
            .has_atom_predicate()
            .then(|| (0..s.size()).filter(|&e| s.is_atom_element(e)).map(|e| e + 1).collect());
        StructureDoc::General { universe: s.size(), relations, constants, atoms }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoardDoc {
    pub structure: StructureDoc,
    #[serde(default)]
    pub history: Vec<String>,
}

impl BoardDoc {
    pub fn to_board(&self) -> Result<Board, CoreError> {
        let base = Arc::new(self.structure.to_structure()?);
        let history = self
            .history
            .iter()
            .map(|s| s.parse::<Selection>())
            .collect::<Result<Vec<_>, _>>()?;
        Board::with_history(base, &history)
    }

    pub fn from_board(b: &Board) -> BoardDoc {
        BoardDoc {
            structure: StructureDoc::from_structure(b.base()),
            history: b.history().iter().map(ToString::to_string).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDoc {
    pub a: Vec<BoardDoc>,
    pub b: Vec<BoardDoc>,
    /// One entry per round left: `"A"`, `"B"` or null.
    pub constraints: Vec<Option<String>>,
    #[serde(default)]
    pub atoms: bool,
    #[serde(default)]
    pub no_play_on_top: bool,
}

impl StateDoc {
    pub fn to_state(&self) -> Result<GameState, CoreError> {
        let a = self.a.iter().map(BoardDoc::to_board).collect::<Result<Vec<_>, _>>()?;
        let b = self.b.iter().map(BoardDoc::to_board).collect::<Result<Vec<_>, _>>()?;
        let constraints = self
            .constraints
            .iter()
            .map(|c| c.as_deref().map(str::parse::<Side>).transpose())
            .collect::<Result<Vec<_>, _>>()?;
        let variant = Variant { atoms: self.atoms, no_play_on_top: self.no_play_on_top };
        GameState::new(a, b, constraints, variant)
    }

    pub fn from_state(s: &GameState) -> StateDoc {
        StateDoc {
            a: s.side_a().iter().map(BoardDoc::from_board).collect(),
            b: s.side_b().iter().map(BoardDoc::from_board).collect(),
            constraints: s.constraints().iter().map(|c| c.map(|s| s.to_string())).collect(),
            atoms: s.variant().atoms,
            no_play_on_top: s.variant().no_play_on_top,
        }
    }
}

/// Short human-readable label such as `lo:5@3,a1`.
pub fn describe(b: &Board) -> String {
    let base = if b.is_linear() {
        format!("lo:{}", b.base().size())
    } else {
        format!("structure({})", b.base().size())
    };
    if b.history().is_empty() {
        return base;
    }
    let h: Vec<String> = b.history().iter().map(ToString::to_string).collect();
    format!("{base}@{}", h.join(","))
}

/// Parses a structure spec: `lo:N` or a JSON structure document.
pub fn parse_structure_spec(text: &str) -> Result<Structure, CoreError> {
    let (s, rest) = split_structure(text.trim())?;
    if !rest.trim().is_empty() {
        return Err(CoreError::Domain(format!("trailing text after structure: `{}`", rest.trim())));
    }
    Ok(s)
}

/// `lo:N` for plain linear orders, compact JSON otherwise.
pub fn format_structure_spec(s: &Structure) -> String {
    if s.is_linear_order() {
        format!("lo:{}", s.size())
    } else {
        serde_json::to_string(&StructureDoc::from_structure(s)).expect("serialisable")
    }
}

fn split_structure(text: &str) -> Result<(Structure, &str), CoreError> {
    if let Some(n) = text.strip_prefix("lo:") {
        let end = n.find(|c: char| !c.is_ascii_digit()).unwrap_or(n.len());
        let size: usize = n[..end]
            .parse()
            .map_err(|_| CoreError::Domain(format!("bad linear order size in `{text}`")))?;
        return Ok((Structure::linear_order(size)?, &n[end..]));
    }
    if text.starts_with('{') {
        let mut it = serde_json::Deserializer::from_str(text).into_iter::<StructureDoc>();
        let doc = match it.next() {
            Some(Ok(d)) => d,
            Some(Err(e)) => return Err(CoreError::Domain(format!("bad structure document: {e}"))),
            None => return Err(CoreError::Domain("empty structure document".into())),
        };
        let used = it.byte_offset();
        return Ok((doc.to_structure()?, &text[used..]));
    }
    Err(CoreError::Domain(format!("expected `lo:N` or a JSON structure, found `{text}`")))
}

/// Parses a board spec: a structure spec optionally followed by
/// `@` and a comma-separated history such as `3,a1`.
pub fn parse_board_spec(text: &str) -> Result<Board, CoreError> {
    let (s, rest) = split_structure(text.trim())?;
    let rest = rest.trim();
    let history = match rest.strip_prefix('@') {
        Some(h) if !h.trim().is_empty() => h
            .split(',')
            .map(|x| x.trim().parse::<Selection>())
            .collect::<Result<Vec<_>, _>>()?,
        Some(_) => Vec::new(),
        None if rest.is_empty() => Vec::new(),
        None => return Err(CoreError::Domain(format!("unexpected `{rest}` after structure"))),
    };
    Board::with_history(Arc::new(s), &history)
}

/// Inverse of [`parse_board_spec`].
pub fn format_board_spec(b: &Board) -> String {
    let base = format_structure_spec(b.base());
    if b.history().is_empty() {
        return base;
    }
    let h: Vec<String> = b.history().iter().map(ToString::to_string).collect();
    format!("{base}@{}", h.join(","))
}
