use std::collections::HashMap;

use msgames_core::{linear::gap_cap, Budget, Structure, ORDER};

use crate::ast::{Formula, Term};
use crate::SentenceError;

/// A structure, optionally extended by `atoms` fresh elements that satisfy
/// the atom predicate and stand in no relation. Atom `j` is element
/// `size + j`.
#[derive(Debug, Clone, Copy)]
pub struct Model<'a> {
    pub structure: &'a Structure,
    pub atoms: usize,
}

impl<'a> Model<'a> {
    pub fn new(structure: &'a Structure) -> Model<'a> {
        Model { structure, atoms: 0 }
    }

    pub fn with_atoms(structure: &'a Structure, atoms: usize) -> Model<'a> {
        Model { structure, atoms }
    }

    fn domain(&self) -> usize {
        self.structure.size() + self.atoms
    }
}

#[derive(Debug, Clone, Copy)]
enum T {
    Slot(usize),
    Elem(usize),
}

enum Node {
    Quant {
        exists: bool,
        slot: usize,
        memo: usize,
        free: Vec<usize>,
        rank: u32,
        body: Box<Node>,
    },
    And(Vec<Node>),
    Or(Vec<Node>),
    Not(Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Less(T, T),
    Eq(T, T),
    Atom(T),
}

struct Compiler<'m> {
    model: &'m Model<'m>,
    order: Option<usize>,
    atoms_ok: bool,
    scope: Vec<(String, usize)>,
    memos: usize,
}

impl Compiler<'_> {
    fn term(&self, t: &Term, used: &mut Vec<usize>) -> Result<T, SentenceError> {
        match t {
            Term::Var(v) => {
                let slot = self
                    .scope
                    .iter()
                    .rev()
                    .find(|(n, _)| n == v)
                    .map(|(_, s)| *s)
                    .ok_or_else(|| SentenceError::Usage(format!("free variable `{v}`")))?;
                used.push(slot);
                Ok(T::Slot(slot))
            }
            Term::Const(c) => {
                let s = self.model.structure;
                let i = s
                    .vocab()
                    .constant_index(c)
                    .ok_or_else(|| SentenceError::Usage(format!("constant `{c}` is not interpreted")))?;
                Ok(T::Elem(s.constants()[i]))
            }
        }
    }

    /// Compiles `f`; `used` collects the slots it reads.
    fn node(&mut self, f: &Formula, used: &mut Vec<usize>) -> Result<Node, SentenceError> {
        Ok(match f {
            Formula::Exists(v, b) | Formula::Forall(v, b) => {
                let slot = self.scope.len();
                self.scope.push((v.clone(), slot));
                let mut inner = Vec::new();
                let body = self.node(b, &mut inner);
                self.scope.pop();
                let body = body?;
                let mut free: Vec<usize> = inner.into_iter().filter(|&s| s < slot).collect();
                free.sort_unstable();
                free.dedup();
                used.extend(&free);
                let memo = self.memos;
                self.memos += 1;
                Node::Quant {
                    exists: matches!(f, Formula::Exists(..)),
                    slot,
                    memo,
                    free,
                    rank: u32::try_from(f.quantifier_rank()).unwrap_or(u32::MAX),
                    body: Box::new(body),
                }
            }
            Formula::And(v) => Node::And(v.iter().map(|c| self.node(c, used)).collect::<Result<_, _>>()?),
            Formula::Or(v) => Node::Or(v.iter().map(|c| self.node(c, used)).collect::<Result<_, _>>()?),
            Formula::Not(b) => Node::Not(Box::new(self.node(b, used)?)),
            Formula::Implies(a, b) => Node::Implies(Box::new(self.node(a, used)?), Box::new(self.node(b, used)?)),
            Formula::Less(a, b) => {
                if self.order.is_none() {
                    return Err(SentenceError::Usage(format!("`{ORDER}` is not interpreted")));
                }
                Node::Less(self.term(a, used)?, self.term(b, used)?)
            }
            Formula::Eq(a, b) => Node::Eq(self.term(a, used)?, self.term(b, used)?),
            Formula::Atom(a) => {
                if !self.atoms_ok {
                    return Err(SentenceError::Usage("the atom predicate is not interpreted".into()));
                }
                Node::Atom(self.term(a, used)?)
            }
        })
    }
}

struct Evaluator<'m> {
    model: &'m Model<'m>,
    order: usize,
    /// Pure linear order: memo keys can use the capped gap pattern.
    pattern_keys: bool,
    env: Vec<usize>,
    memo: Vec<HashMap<Vec<u32>, bool>>,
    budget: &'m Budget,
}

impl Evaluator<'_> {
    fn val(&self, t: T) -> usize {
        match t {
            T::Slot(s) => self.env[s],
            T::Elem(e) => e,
        }
    }

    fn key(&self, free: &[usize], rank: u32) -> Vec<u32> {
        let vals: Vec<usize> = free.iter().map(|&s| self.env[s]).collect();
        if !self.pattern_keys {
            return vals.iter().map(|&v| v as u32).collect();
        }
        // order pattern of the free values plus every gap capped where a
        // formula of this rank stops telling lengths apart
        let mut distinct = vals.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let cap = gap_cap(rank);
        let mut key: Vec<u32> = vals
            .iter()
            .map(|v| distinct.binary_search(v).expect("present") as u32)
            .collect();
        let n = self.model.structure.size();
        let mut prev = 0usize;
        for &d in &distinct {
            key.push((d - prev).min(cap) as u32);
            prev = d + 1;
        }
        key.push((n - prev).min(cap) as u32);
        key
    }

    fn eval(&mut self, n: &Node) -> Result<bool, SentenceError> {
        Ok(match n {
            Node::Quant { exists, slot, memo, free, rank, body } => {
                let key = self.key(free, *rank);
                if let Some(&v) = self.memo[*memo].get(&key) {
                    return Ok(v);
                }
                self.budget.tick()?;
                if self.env.len() <= *slot {
                    self.env.resize(*slot + 1, 0);
                }
                let mut result = !*exists;
                for e in 0..self.model.domain() {
                    self.env[*slot] = e;
                    if self.eval(body)? == *exists {
                        result = *exists;
                        break;
                    }
                }
                self.memo[*memo].insert(key, result);
                result
            }
            Node::And(v) => {
                for c in v {
                    if !self.eval(c)? {
                        return Ok(false);
                    }
                }
                true
            }
            Node::Or(v) => {
                for c in v {
                    if self.eval(c)? {
                        return Ok(true);
                    }
                }
                false
            }
            Node::Not(b) => !self.eval(b)?,
            Node::Implies(a, b) => !self.eval(a)? || self.eval(b)?,
            Node::Less(a, b) => {
                let (x, y) = (self.val(*a), self.val(*b));
                let s = self.model.structure;
                x < s.size() && y < s.size() && s.holds(self.order, &[x, y])
            }
            Node::Eq(a, b) => self.val(*a) == self.val(*b),
            Node::Atom(a) => {
                let x = self.val(*a);
                x >= self.model.structure.size() || self.model.structure.is_atom_element(x)
            }
        })
    }
}

/// Truth of a sentence in a model. Quantifiers range over the structure
/// and the model's atoms.
pub fn eval(s: &Formula, m: &Model<'_>) -> Result<bool, SentenceError> {
    eval_with_budget(s, m, &Budget::unlimited())
}

/// As [`eval`], charging one budget tick per quantifier node evaluated.
pub fn eval_with_budget(s: &Formula, m: &Model<'_>, budget: &Budget) -> Result<bool, SentenceError> {
    let st = m.structure;
    let order = st
        .vocab()
        .relation_index(ORDER)
        .filter(|&i| st.vocab().relations()[i].1 == 2);
    let mut c = Compiler {
        model: m,
        order,
        atoms_ok: m.atoms > 0 || st.vocab().has_atom_predicate(),
        scope: Vec::new(),
        memos: 0,
    };
    let root = c.node(s, &mut Vec::new())?;
    let mut ev = Evaluator {
        model: m,
        order: order.unwrap_or(0),
        pattern_keys: st.is_linear_order() && m.atoms == 0,
        env: Vec::new(),
        memo: (0..c.memos).map(|_| HashMap::new()).collect(),
        budget,
    };
    ev.eval(&root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;
    use msgames_core::Vocabulary;

    fn lo(n: usize) -> Structure {
        Structure::linear_order(n).unwrap()
    }

    fn holds(text: &str, s: &Structure) -> bool {
        eval(&parse(text).unwrap(), &Model::new(s)).unwrap()
    }

    #[test]
    fn basics() {
        assert!(holds("E x . x = x", &lo(1)));
        assert!(!holds("E x E y . x < y", &lo(1)));
        assert!(holds("E x E y . x < y", &lo(2)));
        assert!(holds("A x . E y . x < y | y < x", &lo(2)));
        assert!(!holds("A x . E y . x < y", &lo(5)));
    }

    #[test]
    fn constants_and_atoms() {
        let v = Vocabulary::new(vec![(ORDER.into(), 2)], vec!["c".into(), "d".into()], false).unwrap();
        let t: Vec<Vec<usize>> = (0..3).flat_map(|i| (i + 1..3).map(move |j| vec![i, j])).collect();
        let s = Structure::new(v, 3, vec![t], vec![2, 0], vec![]).unwrap();
        assert!(holds("d < c", &s));
        assert!(holds("E x . d < x & x < c", &s));
        let f = parse("E x . atom(x)").unwrap();
        assert!(matches!(eval(&f, &Model::new(&s)), Err(SentenceError::Usage(_))));
        assert!(eval(&f, &Model::with_atoms(&s, 1)).unwrap());
        // atoms are unordered and distinct from one another
        let g = parse("E x E y . atom(x) & atom(y) & x != y & !(x < y) & !(y < x)").unwrap();
        assert!(!eval(&g, &Model::with_atoms(&lo(3), 1)).unwrap());
        assert!(eval(&g, &Model::with_atoms(&lo(3), 2)).unwrap());
        assert!(matches!(eval(&parse("c < c").unwrap(), &Model::new(&lo(2))), Err(SentenceError::Usage(_))));
    }

    #[test]
    fn usage_errors() {
        let graph = Structure::new(Vocabulary::new(vec![("E".into(), 2)], vec![], false).unwrap(), 2, vec![vec![]], vec![], vec![]).unwrap();
        assert!(matches!(eval(&parse("E x E y . x < y").unwrap(), &Model::new(&graph)), Err(SentenceError::Usage(_))));
        let free = Formula::Less(Term::var("x"), Term::var("x"));
        assert!(matches!(eval(&free, &Model::new(&lo(2))), Err(SentenceError::Usage(_))));
    }

    #[test]
    fn budget_stops_evaluation() {
        let f = parse("A a E b A c E d . a < b | c < d | a = d").unwrap();
        let b = Budget::new(3, None);
        assert!(matches!(eval_with_budget(&f, &Model::new(&lo(20)), &b), Err(SentenceError::Budget(_))));
    }
}
