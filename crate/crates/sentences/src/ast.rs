use std::fmt;

use msgames_core::Quantifier;

/// A variable bound by an enclosing quantifier, or a constant symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }
}

/// First-order formulas over `<`, `=`, constants and the atom predicate.
///
/// `And` and `Or` are n-ary so chains of the same connective stay flat.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Less(Term, Term),
    Eq(Term, Term),
    Atom(Term),
}

/// A closed formula.
pub type Sentence = Formula;

/// Quantifier count, quantifier rank, and the prefix when prenex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantifierProfile {
    pub count: usize,
    pub rank: usize,
    pub prefix: Option<Vec<Quantifier>>,
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(body))
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(body))
    }

    pub fn quantifier_count(&self) -> usize {
        match self {
            Formula::Exists(_, b) | Formula::Forall(_, b) => 1 + b.quantifier_count(),
            Formula::And(v) | Formula::Or(v) => v.iter().map(Formula::quantifier_count).sum(),
            Formula::Not(b) => b.quantifier_count(),
            Formula::Implies(a, b) => a.quantifier_count() + b.quantifier_count(),
            Formula::Less(..) | Formula::Eq(..) | Formula::Atom(_) => 0,
        }
    }

    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::Exists(_, b) | Formula::Forall(_, b) => 1 + b.quantifier_rank(),
            Formula::And(v) | Formula::Or(v) => v.iter().map(Formula::quantifier_rank).max().unwrap_or(0),
            Formula::Not(b) => b.quantifier_rank(),
            Formula::Implies(a, b) => a.quantifier_rank().max(b.quantifier_rank()),
            Formula::Less(..) | Formula::Eq(..) | Formula::Atom(_) => 0,
        }
    }

    /// Leading quantifiers and the body below them.
    pub fn split_prefix(&self) -> (Vec<(Quantifier, &str)>, &Formula) {
        let mut out = Vec::new();
        let mut f = self;
        loop {
            match f {
                Formula::Exists(v, b) => {
                    out.push((Quantifier::Exists, v.as_str()));
                    f = b;
                }
                Formula::Forall(v, b) => {
                    out.push((Quantifier::Forall, v.as_str()));
                    f = b;
                }
                _ => return (out, f),
            }
        }
    }

    pub fn profile(&self) -> QuantifierProfile {
        let (prefix, matrix) = self.split_prefix();
        let prenex = matrix.quantifier_count() == 0;
        QuantifierProfile {
            count: self.quantifier_count(),
            rank: self.quantifier_rank(),
            prefix: prenex.then(|| prefix.into_iter().map(|(q, _)| q).collect()),
        }
    }

    /// Constant symbols mentioned anywhere.
    pub fn constants(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit_terms(&mut |t| {
            if let Term::Const(c) = t {
                if !out.contains(c) {
                    out.push(c.clone());
                }
            }
        });
        out
    }

    fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::Exists(_, b) | Formula::Forall(_, b) | Formula::Not(b) => b.visit_terms(f),
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|c| c.visit_terms(f)),
            Formula::Implies(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
            Formula::Less(a, b) | Formula::Eq(a, b) => {
                f(a);
                f(b);
            }
            Formula::Atom(a) => f(a),
        }
    }

    /// Uses the atom predicate somewhere.
    pub fn mentions_atoms(&self) -> bool {
        match self {
            Formula::Exists(_, b) | Formula::Forall(_, b) | Formula::Not(b) => b.mentions_atoms(),
            Formula::And(v) | Formula::Or(v) => v.iter().any(Formula::mentions_atoms),
            Formula::Implies(a, b) => a.mentions_atoms() || b.mentions_atoms(),
            Formula::Less(..) | Formula::Eq(..) => false,
            Formula::Atom(_) => true,
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Exists(..) | Formula::Forall(..) => 0,
            Formula::Implies(..) => 1,
            Formula::Or(_) => 2,
            Formula::And(_) => 3,
            Formula::Not(inner) if !matches!(**inner, Formula::Eq(..)) => 4,
            _ => 5,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.prec() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Formula::Exists(..) | Formula::Forall(..) => {
                let (prefix, body) = self.split_prefix();
                for (q, v) in prefix {
                    write!(f, "{} {v} ", q.letter())?;
                }
                f.write_str(". ")?;
                body.write(f, 0)?;
            }
            Formula::Implies(a, b) => {
                a.write(f, 2)?;
                f.write_str(" -> ")?;
                b.write(f, 1)?;
            }
            Formula::Or(v) => join(f, v, " | ", 3)?,
            Formula::And(v) => join(f, v, " & ", 4)?,
            Formula::Not(inner) => match &**inner {
                Formula::Eq(a, b) => write!(f, "{} != {}", a.name(), b.name())?,
                other => {
                    f.write_str("!")?;
                    other.write(f, 4)?;
                }
            },
            Formula::Less(a, b) => write!(f, "{} < {}", a.name(), b.name())?,
            Formula::Eq(a, b) => write!(f, "{} = {}", a.name(), b.name())?,
            Formula::Atom(a) => write!(f, "atom({})", a.name())?,
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn join(f: &mut fmt::Formatter<'_>, v: &[Formula], sep: &str, min: u8) -> fmt::Result {
    for (i, c) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        c.write(f, min)?;
    }
    Ok(())
}

/// Canonical text: one quantifier block per run of quantifiers, minimal
/// parentheses, `a != b` for a negated equality.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    #[test]
    fn rank_example() {
        // E x (E y (y < x) & E y (x < y))
        let f = Formula::exists(
            "x",
            Formula::And(vec![
                Formula::exists("y", Formula::Less(v("y"), v("x"))),
                Formula::exists("y", Formula::Less(v("x"), v("y"))),
            ]),
        );
        let p = f.profile();
        assert_eq!((p.count, p.rank, p.prefix), (3, 2, None));
        assert_eq!(f.to_string(), "E x . (E y . y < x) & (E y . x < y)");
    }

    #[test]
    fn quantifier_free_profile() {
        let f = Formula::Less(Term::Const("c1".into()), Term::Const("c2".into()));
        let p = f.profile();
        assert_eq!((p.count, p.rank), (0, 0));
        assert_eq!(p.prefix, Some(vec![]));
        assert_eq!(f.constants(), vec!["c1".to_string(), "c2".to_string()]);
    }

    #[test]
    fn rendering_parenthesises_by_precedence() {
        let a = Formula::Less(v("x"), v("y"));
        let b = Formula::Eq(v("x"), v("y"));
        let f = Formula::implies(Formula::implies(a.clone(), b.clone()), Formula::Or(vec![a.clone(), Formula::And(vec![b.clone(), a.clone()])]));
        assert_eq!(f.to_string(), "(x < y -> x = y) -> x < y | x = y & x < y");
        assert_eq!(Formula::not(b.clone()).to_string(), "x != y");
        assert_eq!(Formula::not(Formula::not(b)).to_string(), "!x != y");
        assert_eq!(Formula::not(Formula::And(vec![a.clone(), a])).to_string(), "!(x < y & x < y)");
    }
}
