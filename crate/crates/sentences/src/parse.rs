use std::collections::HashSet;

use crate::ast::{Formula, Term};
use crate::SentenceError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Exists,
    Forall,
    AtomKw,
    LParen,
    RParen,
    Dot,
    Less,
    Eq,
    Neq,
    And,
    Or,
    Not,
    Implies,
}

fn describe(t: Option<&Tok>) -> String {
    match t {
        None => "end of input".into(),
        Some(Tok::Ident(s)) => format!("`{s}`"),
        Some(t) => format!("{t:?}").to_lowercase(),
    }
}

/// Tokens with their character offsets.
fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SentenceError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '.' => Tok::Dot,
            '<' => Tok::Less,
            '=' => Tok::Eq,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '¬' => Tok::Not,
            '≠' => Tok::Neq,
            '→' => Tok::Implies,
            '∃' => Tok::Exists,
            '∀' => Tok::Forall,
            '!' if chars.get(i + 1) == Some(&'=') => {
                i += 1;
                Tok::Neq
            }
            '!' => Tok::Not,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Implies
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                let word: String = chars[start..=i].iter().collect();
                match word.as_str() {
                    "E" => Tok::Exists,
                    "A" => Tok::Forall,
                    "atom" => Tok::AtomKw,
                    _ => Tok::Ident(word),
                }
            }
            other => return Err(SentenceError::Parse { pos: start, msg: format!("unexpected character `{other}`") }),
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    bound: Vec<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SentenceError> {
        Err(SentenceError::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, t: Tok) -> Result<(), SentenceError> {
        if self.peek() == Some(&t) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected {}, found {}", describe(Some(&t)), describe(self.peek())))
        }
    }

    fn ident(&mut self) -> Result<String, SentenceError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            t => self.err(format!("expected an identifier, found {}", describe(t))),
        }
    }

    fn formula(&mut self) -> Result<Formula, SentenceError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Implies) {
            self.at += 1;
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, SentenceError> {
        let mut v = vec![self.and()?];
        while self.peek() == Some(&Tok::Or) {
            self.at += 1;
            v.push(self.and()?);
        }
        Ok(if v.len() == 1 { v.pop().expect("one") } else { Formula::Or(v) })
    }

    fn and(&mut self) -> Result<Formula, SentenceError> {
        let mut v = vec![self.unary()?];
        while self.peek() == Some(&Tok::And) {
            self.at += 1;
            v.push(self.unary()?);
        }
        Ok(if v.len() == 1 { v.pop().expect("one") } else { Formula::And(v) })
    }

    fn unary(&mut self) -> Result<Formula, SentenceError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.at += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Exists | Tok::Forall) => self.quantified(),
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::AtomKw) => {
                self.at += 1;
                self.expect(Tok::LParen)?;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(Formula::Atom(t))
            }
            Some(Tok::Ident(_)) => {
                let a = self.term()?;
                let op = self.peek().cloned();
                match op {
                    Some(Tok::Less | Tok::Eq | Tok::Neq) => self.at += 1,
                    t => return self.err(format!("expected `<`, `=` or `!=`, found {}", describe(t.as_ref()))),
                }
                let b = self.term()?;
                Ok(match op {
                    Some(Tok::Less) => Formula::Less(a, b),
                    Some(Tok::Eq) => Formula::Eq(a, b),
                    _ => Formula::not(Formula::Eq(a, b)),
                })
            }
            t => self.err(format!("expected a formula, found {}", describe(t))),
        }
    }

    /// `Q v Q w ... . body`; a repeated `.` between quantifiers is accepted.
    fn quantified(&mut self) -> Result<Formula, SentenceError> {
        let mut block = Vec::new();
        loop {
            let q = self.peek().cloned();
            match q {
                Some(Tok::Exists | Tok::Forall) => {
                    self.at += 1;
                    let v = self.ident()?;
                    block.push((q == Some(Tok::Exists), v));
                }
                _ => break,
            }
            if self.peek() == Some(&Tok::Dot)
                && matches!(self.toks.get(self.at + 1).map(|(t, _)| t), Some(Tok::Exists | Tok::Forall))
            {
                self.at += 1;
            }
        }
        self.expect(Tok::Dot)?;
        let depth = self.bound.len();
        self.bound.extend(block.iter().map(|(_, v)| v.clone()));
        let body = self.formula();
        self.bound.truncate(depth);
        let mut f = body?;
        for (ex, v) in block.into_iter().rev() {
            f = if ex { Formula::Exists(v, Box::new(f)) } else { Formula::Forall(v, Box::new(f)) };
        }
        Ok(f)
    }

    fn term(&mut self) -> Result<Term, SentenceError> {
        let name = self.ident()?;
        Ok(if self.bound.contains(&name) { Term::Var(name) } else { Term::Const(name) })
    }
}

/// Parses sentence text. Identifiers bound by an enclosing quantifier are
/// variables; all others are constant symbols.
pub fn parse(text: &str) -> Result<Formula, SentenceError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.chars().count(), bound: Vec::new() };
    let f = p.formula()?;
    if p.at != p.toks.len() {
        return p.err(format!("unexpected {}", describe(p.peek())));
    }
    Ok(f)
}

/// Parses and rejects constants outside `allowed`.
pub fn parse_with_constants(text: &str, allowed: &[String]) -> Result<Formula, SentenceError> {
    let f = parse(text)?;
    let allowed: HashSet<&str> = allowed.iter().map(String::as_str).collect();
    if let Some(c) = f.constants().into_iter().find(|c| !allowed.contains(c.as_str())) {
        return Err(SentenceError::Usage(format!("unknown constant or unbound variable `{c}`")));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) {
        let f = parse(s).unwrap();
        assert_eq!(f.to_string(), s);
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn canonical_text_round_trips() {
        rt("E x1 E x2 . x1 < x2");
        rt("A x E y . x < y | y = x");
        rt("E x . (E y . y < x) & (E y . x < y)");
        rt("A x . x = c -> !atom(x) & x != d");
        rt("(c < d -> d < c) -> c = d");
        rt("!(c < d | d < c)");
    }

    #[test]
    fn alternative_spellings() {
        let a = parse("A x . E y . x < y").unwrap();
        assert_eq!(a, parse("A x E y . x < y").unwrap());
        assert_eq!(a, parse("∀x ∃y . x<y").unwrap());
        assert_eq!(parse("E x . ¬(x ≠ x) ∧ x = x ∨ x < x → x=x").unwrap(), parse("E x . !(x != x) & x = x | x < x -> x = x").unwrap());
    }

    #[test]
    fn chains_flatten_and_implication_is_right_associative() {
        let f = parse("a < b & b < c & c < d").unwrap();
        assert!(matches!(&f, Formula::And(v) if v.len() == 3));
        let g = parse("a = a -> b = b -> c = c").unwrap();
        assert!(matches!(&g, Formula::Implies(_, r) if matches!(**r, Formula::Implies(..))));
        let h = parse("(a < b & b < c) & c < d").unwrap();
        assert!(matches!(&h, Formula::And(v) if v.len() == 2));
    }

    #[test]
    fn binding() {
        let f = parse("E x . x < c").unwrap();
        assert_eq!(f, Formula::exists("x", Formula::Less(Term::var("x"), Term::Const("c".into()))));
        assert_eq!(f.constants(), vec!["c".to_string()]);
        // scope ends with the quantified formula
        let g = parse("(E x . x = x) & x = x").unwrap();
        assert_eq!(g.constants(), vec!["x".to_string()]);
    }

    #[test]
    fn errors_carry_positions() {
        for (text, pos) in [("E x x < y", 4), ("E x . x <", 9), ("x < y )", 6), ("x # y", 2), ("E . x", 2), ("atom x", 5)] {
            match parse(text) {
                Err(SentenceError::Parse { pos: p, .. }) => assert_eq!(p, pos, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(matches!(parse_with_constants("E x . x < c", &[]), Err(SentenceError::Usage(_))));
        assert!(parse_with_constants("E x . x < c", &["c".into()]).is_ok());
    }
}
