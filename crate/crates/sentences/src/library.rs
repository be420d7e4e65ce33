//! Named sentences over linear orders.
//!
//! `x < y < z` abbreviates `x < y & y < z` and is kept as its own
//! conjunction so each sentence mirrors its usual display.

use crate::ast::{Formula, Term};
use crate::SentenceError;

/// Names accepted by [`library`]; `chain:R` takes a round count.
pub const NAMES: &[&str] = &[
    "phi2", "phi3", "phi4", "phi4_5", "phi4_6", "phi4_7", "phi4_8", "phi4_9", "phi5", "phi6", "phi6_literal", "chain:R",
];

fn v(n: &str) -> Term {
    Term::var(n)
}

fn lt(a: &str, b: &str) -> Formula {
    Formula::Less(v(a), v(b))
}

fn eq(a: &str, b: &str) -> Formula {
    Formula::Eq(v(a), v(b))
}

fn ne(a: &str, b: &str) -> Formula {
    Formula::not(eq(a, b))
}

fn and(v: Vec<Formula>) -> Formula {
    Formula::And(v)
}

fn or(v: Vec<Formula>) -> Formula {
    Formula::Or(v)
}

fn imp(a: Formula, b: Formula) -> Formula {
    Formula::implies(a, b)
}

/// `a < b < ...` over the given variables.
fn chain(vars: &[&str]) -> Formula {
    match vars {
        [a, b] => lt(a, b),
        _ => and(vars.windows(2).map(|w| lt(w[0], w[1])).collect()),
    }
}

fn prefix(q: &str, body: Formula) -> Formula {
    // q is a word over E/A, one letter per variable in order
    let vars: Vec<String> = q.split_whitespace().map(str::to_string).collect();
    vars.iter().rev().fold(body, |f, qv| {
        let (letter, name) = qv.split_at(1);
        if letter == "E" {
            Formula::exists(name, f)
        } else {
            Formula::forall(name, f)
        }
    })
}

/// The six gap conditions on `(x, y, z, w)`, with every order chain
/// extended by `pre` on the left and `post` on the right.
fn six(x: &str, y: &str, z: &str, w: &str, pre: &[&str], post: &[&str]) -> [Formula; 6] {
    let ch = |mid: &[&str]| {
        let all: Vec<&str> = pre.iter().chain(mid).chain(post).copied().collect();
        chain(&all)
    };
    [
        imp(ch(&[x, z, y]), and(vec![ne(w, z), ch(&[x, w, y])])),
        imp(ch(&[x, y, z]), and(vec![ne(w, z), ch(&[x, y, w])])),
        imp(ch(&[y, z, x]), and(vec![ne(w, z), ch(&[y, w, x])])),
        imp(ch(&[z, y, x]), and(vec![ne(w, z), ch(&[w, y, x])])),
        imp(eq(z, x), or(vec![ch(&[x, w, y]), ch(&[y, w, x])])),
        imp(eq(z, y), or(vec![ch(&[x, y, w]), ch(&[w, y, x])])),
    ]
}

fn phi4_conditions(keep: &[usize]) -> Formula {
    let all = six("x", "y", "z", "w", &[], &[]);
    let body = keep.iter().map(|&i| all[i - 1].clone()).collect();
    prefix("Ax Ey Az Ew", and(body))
}

pub fn phi2() -> Formula {
    prefix("Ex Ey", lt("x", "y"))
}

pub fn phi3() -> Formula {
    prefix("Ax Ey Ez", or(vec![chain(&["x", "y", "z"]), chain(&["y", "z", "x"])]))
}

pub fn phi4() -> Formula {
    phi4_conditions(&[1, 2, 3, 4, 5, 6])
}

/// The gap-closing variants: true exactly on orders of size `k` and above,
/// for `k` in 5..=9.
pub fn phi4_k(k: usize) -> Result<Formula, SentenceError> {
    Ok(match k {
        9 => phi4_conditions(&[1, 2, 3, 5, 6]),
        8 => phi4_conditions(&[2, 3, 5, 6]),
        7 => phi4_conditions(&[2, 5, 6]),
        6 => phi4_conditions(&[5, 6]),
        5 => {
            let [_, _, _, _, c5, _] = six("x", "y", "z", "w", &[], &[]);
            let c6 = imp(eq("z", "y"), or(vec![chain(&["x", "y", "w"]), lt("y", "x")]));
            prefix("Ax Ey Az Ew", and(vec![c5, c6]))
        }
        _ => return Err(SentenceError::UnknownName(format!("phi4_{k}"))),
    })
}

pub fn phi5() -> Formula {
    let left = six("x2", "x3", "x4", "x5", &["x1"], &[]);
    let right = six("x2", "x3", "x4", "x5", &[], &["x1"]);
    prefix(
        "Ex1 Ax2 Ex3 Ax4 Ex5",
        and(vec![
            imp(lt("x1", "x2"), and(left.to_vec())),
            imp(lt("x2", "x1"), and(right.to_vec())),
            imp(eq("x1", "x2"), and(vec![lt("x3", "x1"), lt("x1", "x5")])),
        ]),
    )
}

fn phi6_with(last: Formula) -> Formula {
    let s = |pre: &[&str], post: &[&str]| and(six("x2", "x3", "x4", "x5", pre, post).to_vec());
    let above = and(vec![
        imp(chain(&["x0", "x1", "x2"]), s(&["x0", "x1"], &[])),
        imp(chain(&["x0", "x2", "x1"]), s(&["x0"], &["x1"])),
        imp(
            and(vec![lt("x0", "x1"), eq("x1", "x2")]),
            and(vec![chain(&["x0", "x3", "x1"]), chain(&["x0", "x1", "x5"])]),
        ),
    ]);
    let below = and(vec![
        imp(chain(&["x1", "x2", "x0"]), s(&["x1"], &["x0"])),
        imp(chain(&["x2", "x1", "x0"]), s(&[], &["x1", "x0"])),
        imp(
            and(vec![eq("x1", "x2"), lt("x1", "x0")]),
            and(vec![chain(&["x3", "x1", "x0"]), chain(&["x1", "x5", "x0"])]),
        ),
    ]);
    prefix(
        "Ax0 Ex1 Ax2 Ex3 Ax4 Ex5",
        and(vec![imp(lt("x0", "x1"), above), imp(lt("x1", "x0"), below), last]),
    )
}

/// Six quantifiers, true exactly on orders of size 42 and above. Duplicator
/// must answer `x0` with a different element.
pub fn phi6() -> Formula {
    phi6_with(Formula::not(eq("x0", "x1")))
}

/// The six-quantifier display with its final conjunct read as written,
/// `x0 = x1 -> x3 != x0`. Answering `x1 = x0` then satisfies it on every
/// order with two or more elements.
pub fn phi6_literal() -> Formula {
    phi6_with(imp(eq("x0", "x1"), ne("x3", "x0")))
}

/// `E x1 ... E xr . x1 < x2 & ... & x(r-1) < xr`.
pub fn chain_sentence(r: usize) -> Result<Formula, SentenceError> {
    if r == 0 {
        return Err(SentenceError::UnknownName("chain:0".into()));
    }
    let names: Vec<String> = (1..=r).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let body = if r == 1 { eq("x1", "x1") } else { chain(&refs) };
    let q: Vec<String> = names.iter().map(|n| format!("E{n}")).collect();
    Ok(prefix(&q.join(" "), body))
}

/// The sentence separating orders of size `g(r)` and above from smaller
/// ones, for `r` in 2..=6.
pub fn boundary(r: usize) -> Result<Formula, SentenceError> {
    Ok(match r {
        2 => phi2(),
        3 => phi3(),
        4 => phi4(),
        5 => phi5(),
        6 => phi6(),
        _ => return Err(SentenceError::UnknownName(format!("phi{r}"))),
    })
}

pub fn library(name: &str) -> Result<Formula, SentenceError> {
    if let Some(r) = name.strip_prefix("chain:") {
        let r: usize = r.parse().map_err(|_| SentenceError::UnknownName(name.to_string()))?;
        return chain_sentence(r);
    }
    match name {
        "phi2" => Ok(phi2()),
        "phi3" => Ok(phi3()),
        "phi4" => Ok(phi4()),
        "phi5" => Ok(phi5()),
        "phi6" => Ok(phi6()),
        "phi6_literal" => Ok(phi6_literal()),
        _ => match name.strip_prefix("phi4_").and_then(|k| k.parse::<usize>().ok()) {
            Some(k) => phi4_k(k),
            None => Err(SentenceError::UnknownName(name.to_string())),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{eval, parse, Model};
    use msgames_core::{Quantifier, Structure};

    fn on(f: &Formula, n: usize) -> bool {
        eval(f, &Model::new(&Structure::linear_order(n).unwrap())).unwrap()
    }

    #[test]
    fn small_displays() {
        assert_eq!(phi2().to_string(), "E x E y . x < y");
        assert_eq!(parse("E x1 E x2 . x1 < x2").unwrap().profile(), phi2().profile());
        assert_eq!(phi3().to_string(), "A x E y E z . x < y & y < z | y < z & z < x");
        assert_eq!(
            library("phi4_6").unwrap().to_string(),
            "A x E y A z E w . (z = x -> x < w & w < y | y < w & w < x) & (z = y -> x < y & y < w | w < y & y < x)"
        );
        assert_eq!(library("chain:3").unwrap().to_string(), "E x1 E x2 E x3 . x1 < x2 & x2 < x3");
    }

    #[test]
    fn profiles() {
        use Quantifier::{Exists as E, Forall as A};
        let p = phi4().profile();
        assert_eq!((p.count, p.rank, p.prefix), (4, 4, Some(vec![A, E, A, E])));
        assert_eq!(phi5().profile().prefix, Some(vec![E, A, E, A, E]));
        assert_eq!(phi6().profile().prefix, Some(vec![A, E, A, E, A, E]));
        assert_eq!(library("chain:5").unwrap().profile().count, 5);
    }

    #[test]
    fn every_name_resolves() {
        for n in NAMES {
            let n = n.replace(":R", ":4");
            let f = library(&n).unwrap();
            assert_eq!(parse(&f.to_string()).unwrap(), f, "{n}");
        }
        for bad in ["phi7", "phi4_4", "chain:0", "chain:x", ""] {
            assert!(matches!(library(bad), Err(SentenceError::UnknownName(_))), "{bad}");
        }
    }

    #[test]
    fn small_boundaries() {
        assert!(on(&phi2(), 2) && !on(&phi2(), 1));
        assert!(on(&phi3(), 4) && !on(&phi3(), 3));
        assert!(on(&phi4(), 10) && !on(&phi4(), 9));
        assert!(on(&library("chain:4").unwrap(), 4) && !on(&library("chain:4").unwrap(), 3));
    }

    #[test]
    fn literal_final_conjunct_is_too_weak() {
        for n in 2..8 {
            assert!(on(&phi6_literal(), n), "{n}");
        }
        assert!(!on(&phi6_literal(), 1));
    }
}
