use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex, OnceLock};

use crate::CoreError;

/// Name of the binary order relation.
pub const ORDER: &str = "<";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    relations: Vec<(String, usize)>,
    constants: Vec<String>,
    atom_predicate: bool,
}

impl Vocabulary {
    pub fn new(
        relations: Vec<(String, usize)>,
        constants: Vec<String>,
        atom_predicate: bool,
    ) -> Result<Self, CoreError> {
        let mut seen = BTreeSet::new();
        for (name, arity) in &relations {
            if *arity == 0 {
                return Err(CoreError::Domain(format!("relation `{name}` has arity 0")));
            }
            if !seen.insert(name.as_str()) {
                return Err(CoreError::Domain(format!("duplicate symbol `{name}`")));
            }
        }
        for name in &constants {
            if !seen.insert(name.as_str()) {
                return Err(CoreError::Domain(format!("duplicate symbol `{name}`")));
            }
        }
        Ok(Vocabulary {
            relations,
            constants,
            atom_predicate,
        })
    }

    /// The vocabulary `{<}` of linear orders.
    pub fn order() -> Self {
        Vocabulary {
            relations: vec![(ORDER.to_string(), 2)],
            constants: Vec::new(),
            atom_predicate: false,
        }
    }

    pub fn relations(&self) -> &[(String, usize)] {
        &self.relations
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn has_atom_predicate(&self) -> bool {
        self.atom_predicate
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|(n, _)| n == name)
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        self.constants.iter().position(|n| n == name)
    }
}

/// A finite structure over a [`Vocabulary`].
///
/// The atom predicate, when the vocabulary carries one, is stored per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    vocab: Arc<Vocabulary>,
    size: usize,
    relations: Vec<BTreeSet<Vec<usize>>>,
    constants: Vec<usize>,
    atom_pred: Vec<bool>,
    linear: bool,
}

impl Structure {
    /// The linear order `0 < 1 < ... < n-1`.
    pub fn linear_order(n: usize) -> Result<Structure, CoreError> {
        if n == 0 {
            return Err(CoreError::Domain("a linear order needs at least one element".into()));
        }
        Ok(Structure {
            vocab: Arc::new(Vocabulary::order()),
            size: n,
            relations: vec![BTreeSet::new()],
            constants: Vec::new(),
            atom_pred: Vec::new(),
            linear: true,
        })
    }

    /// Builds a structure, checking every index against the universe.
    ///
    /// `relations` is indexed like `vocab.relations()`, `constants` like
    /// `vocab.constants()`. `atoms` lists the elements satisfying the atom
    /// predicate and must be empty unless the vocabulary has one.
    pub fn new(
        vocab: Vocabulary,
        size: usize,
        relations: Vec<Vec<Vec<usize>>>,
        constants: Vec<usize>,
        atoms: Vec<usize>,
    ) -> Result<Structure, CoreError> {
        if size == 0 {
            return Err(CoreError::Domain("universe must be non-empty".into()));
        }
        if relations.len() != vocab.relations.len() {
            return Err(CoreError::Usage(format!(
                "expected {} relations, got {}",
                vocab.relations.len(),
                relations.len()
            )));
        }
        if constants.len() != vocab.constants.len() {
            return Err(CoreError::Usage(format!(
                "expected {} constants, got {}",
                vocab.constants.len(),
                constants.len()
            )));
        }
        let mut rels = Vec::with_capacity(relations.len());
        for ((name, arity), tuples) in vocab.relations.iter().zip(relations) {
            let mut set = BTreeSet::new();
            for t in tuples {
                if t.len() != *arity {
                    return Err(CoreError::Domain(format!(
                        "tuple of length {} in relation `{name}` of arity {arity}",
                        t.len()
                    )));
                }
                if let Some(&bad) = t.iter().find(|&&e| e >= size) {
                    return Err(CoreError::Domain(format!(
                        "element {bad} out of range in relation `{name}`"
                    )));
                }
                set.insert(t);
            }
            rels.push(set);
        }
        for (name, &c) in vocab.constants.iter().zip(&constants) {
            if c >= size {
                return Err(CoreError::Domain(format!("constant `{name}` out of range")));
            }
        }
        if !vocab.atom_predicate && !atoms.is_empty() {
            return Err(CoreError::Usage("atom predicate not in vocabulary".into()));
        }
        let mut atom_pred = if vocab.atom_predicate { vec![false; size] } else { Vec::new() };
        for a in atoms {
            if a >= size {
                return Err(CoreError::Domain(format!("atom element {a} out of range")));
            }
            atom_pred[a] = true;
        }
        let linear = is_plain_order(&vocab, size, &rels);
        if linear {
            // tuples of a plain order are implied by the flag
            rels[0].clear();
        }
        Ok(Structure {
            vocab: Arc::new(vocab),
            size,
            relations: rels,
            constants,
            atom_pred,
            linear,
        })
    }

    /// Shared copy of `linear_order(n)`; solvers build many boards over the
    /// same few orders.
    pub fn shared_linear_order(n: usize) -> Result<Arc<Structure>, CoreError> {
        static CACHE: OnceLock<Mutex<Vec<Option<Arc<Structure>>>>> = OnceLock::new();
        if n == 0 {
            return Err(CoreError::Domain("a linear order needs at least one element".into()));
        }
        let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        if guard.len() <= n {
            guard.resize(n + 1, None);
        }
        Ok(guard[n]
            .get_or_insert_with(|| Arc::new(Structure::linear_order(n).expect("n > 0")))
            .clone())
    }

    /// This structure plus `extra` fresh elements satisfying the atom
    /// predicate and related to nothing.
    pub fn union_with_atoms(&self, extra: usize) -> Structure {
        let vocab = Vocabulary {
            relations: self.vocab.relations.clone(),
            constants: self.vocab.constants.clone(),
            atom_predicate: true,
        };
        let relations = (0..self.relations.len()).map(|r| self.tuples(r).into_iter().collect()).collect();
        let mut atom_pred = if self.atom_pred.is_empty() {
            vec![false; self.size]
        } else {
            self.atom_pred.clone()
        };
        atom_pred.extend(std::iter::repeat_n(true, extra));
        Structure {
            vocab: Arc::new(vocab),
            size: self.size + extra,
            relations,
            constants: self.constants.clone(),
            atom_pred,
            linear: false,
        }
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// True for the plain order vocabulary `{<}` interpreted as a strict
    /// linear order on `0..size` by index.
    pub fn is_linear_order(&self) -> bool {
        self.linear
    }

    pub fn holds(&self, relation: usize, tuple: &[usize]) -> bool {
        if self.linear {
            return tuple[0] < tuple[1];
        }
        self.relations[relation].contains(tuple)
    }

    /// Tuples of a relation in increasing order.
    pub fn tuples(&self, relation: usize) -> Vec<Vec<usize>> {
        if self.linear {
            let n = self.size;
            let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
            for i in 0..n {
                for j in i + 1..n {
                    out.push(vec![i, j]);
                }
            }
            return out;
        }
        self.relations[relation].iter().cloned().collect()
    }

    pub fn constants(&self) -> &[usize] {
        &self.constants
    }

    pub fn is_atom_element(&self, e: usize) -> bool {
        self.atom_pred.get(e).copied().unwrap_or(false)
    }

    /// Named view of the relations, for rendering.
    pub fn relation_map(&self) -> BTreeMap<&str, Vec<Vec<usize>>> {
        self.vocab
            .relations
            .iter()
            .enumerate()
            .map(|(i, (n, _))| (n.as_str(), self.tuples(i)))
            .collect()
    }
}

fn is_plain_order(vocab: &Vocabulary, size: usize, rels: &[BTreeSet<Vec<usize>>]) -> bool {
    if vocab.atom_predicate
        || !vocab.constants.is_empty()
        || vocab.relations.len() != 1
        || vocab.relations[0] != (ORDER.to_string(), 2)
    {
        return false;
    }
    let lt = &rels[0];
    lt.len() == size * (size - 1) / 2 && lt.iter().all(|t| t[0] < t[1])
}
