use std::fmt;

use crate::{Board, Selection, Structure};

/// Byte string identifying a board up to isomorphism of labeled structures.
///
/// Two boards over the same vocabulary get equal keys iff some isomorphism
/// of their base structures preserves constants, maps the round-`i`
/// selection to the round-`i` selection, and maps atom `j` to atom `j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn from_bytes(bytes: Vec<u8>) -> CanonicalKey {
        CanonicalKey(bytes)
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Option<CanonicalKey> {
        if !s.len().is_multiple_of(2) || !s.is_ascii() {
            return None;
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16).ok())
            .collect::<Option<Vec<u8>>>()
            .map(CanonicalKey)
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_hex())
    }
}

const TAG_LINEAR: u8 = 0;
const TAG_GENERAL: u8 = 1;

fn push_u32(out: &mut Vec<u8>, v: usize) {
    out.extend_from_slice(&(v as u32).to_be_bytes());
}

fn push_selection(out: &mut Vec<u8>, s: Selection, label: impl Fn(usize) -> usize) {
    match s {
        Selection::Element(e) => {
            out.push(0);
            push_u32(out, label(e));
        }
        Selection::Atom(a) => {
            out.push(1);
            push_u32(out, a);
        }
    }
}

pub fn canonical_key(board: &Board) -> CanonicalKey {
    if board.is_linear() {
        // A finite linear order has no automorphism besides the identity,
        // so size plus positions is already canonical.
        let mut out = Vec::with_capacity(5 + 5 * board.rounds());
        out.push(TAG_LINEAR);
        push_u32(&mut out, board.base().size());
        for &s in board.history() {
            push_selection(&mut out, s, |e| e);
        }
        return CanonicalKey(out);
    }
    CanonicalKey(general_key(board))
}

/// Per-element incidence lists: (relation, position, tuple).
struct Incidence {
    by_elem: Vec<Vec<(usize, usize, Vec<usize>)>>,
}

impl Incidence {
    fn new(s: &Structure) -> Incidence {
        let mut by_elem = vec![Vec::new(); s.size()];
        for r in 0..s.vocab().relations().len() {
            for t in s.tuples(r) {
                for (p, &e) in t.iter().enumerate() {
                    by_elem[e].push((r, p, t.clone()));
                }
            }
        }
        Incidence { by_elem }
    }
}

fn initial_colors(board: &Board) -> Vec<usize> {
    let s = board.base();
    let n = s.size();
    let mut sig: Vec<(Vec<usize>, Vec<usize>, bool)> = (0..n)
        .map(|v| (Vec::new(), Vec::new(), s.is_atom_element(v)))
        .collect();
    for (i, h) in board.history().iter().enumerate() {
        if let Selection::Element(e) = h {
            sig[*e].0.push(i);
        }
    }
    for (i, &c) in s.constants().iter().enumerate() {
        sig[c].1.push(i);
    }
    ranks(&sig)
}

/// Dense ranks of `sig` values in sorted order.
fn ranks<T: Ord + Clone>(sig: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sig.to_vec();
    sorted.sort();
    sorted.dedup();
    sig.iter()
        .map(|x| sorted.binary_search(x).expect("present"))
        .collect()
}

/// Old colour, then the sorted (relation, position, tuple colours) around an element.
type Signature = (usize, Vec<(usize, usize, Vec<usize>)>);

/// Colour refinement to the coarsest stable partition finer than `colors`.
/// Signatures start with the old colour, so relative order is preserved.
fn refine(colors: &mut Vec<usize>, inc: &Incidence) {
    loop {
        let before = count_distinct(colors);
        let sig: Vec<Signature> = (0..colors.len())
            .map(|v| {
                let mut around: Vec<(usize, usize, Vec<usize>)> = inc.by_elem[v]
                    .iter()
                    .map(|(r, p, t)| (*r, *p, t.iter().map(|&e| colors[e]).collect()))
                    .collect();
                around.sort();
                (colors[v], around)
            })
            .collect();
        *colors = ranks(&sig);
        if count_distinct(colors) == before {
            return;
        }
    }
}

fn count_distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn encode(board: &Board, label: &[usize]) -> Vec<u8> {
    let s = board.base();
    let mut out = Vec::new();
    out.push(TAG_GENERAL);
    push_u32(&mut out, s.size());
    push_u32(&mut out, board.rounds());
    for &h in board.history() {
        push_selection(&mut out, h, |e| label[e]);
    }
    for &c in s.constants() {
        push_u32(&mut out, label[c]);
    }
    let mut atoms: Vec<usize> = (0..s.size()).filter(|&v| s.is_atom_element(v)).map(|v| label[v]).collect();
    atoms.sort_unstable();
    push_u32(&mut out, atoms.len());
    for a in atoms {
        push_u32(&mut out, a);
    }
    for r in 0..s.vocab().relations().len() {
        let mut ts: Vec<Vec<usize>> = s
            .tuples(r)
            .into_iter()
            .map(|t| t.iter().map(|&e| label[e]).collect())
            .collect();
        ts.sort();
        push_u32(&mut out, ts.len());
        for t in ts {
            for e in t {
                push_u32(&mut out, e);
            }
        }
    }
    out
}

/// Individualisation-refinement search for the least encoding over all
/// discrete refinements of the initial colouring.
fn general_key(board: &Board) -> Vec<u8> {
    let inc = Incidence::new(board.base());
    let mut colors = initial_colors(board);
    refine(&mut colors, &inc);
    let mut best: Option<Vec<u8>> = None;
    search(board, &inc, colors, &mut best);
    best.expect("at least one leaf")
}

fn search(board: &Board, inc: &Incidence, colors: Vec<usize>, best: &mut Option<Vec<u8>>) {
    let n = colors.len();
    let mut counts = vec![0usize; n];
    for &c in &colors {
        counts[c] += 1;
    }
    let target = (0..n).find(|&c| counts[c] > 1);
    let Some(cell) = target else {
        let enc = encode(board, &colors);
        if best.as_ref().is_none_or(|b| enc < *b) {
            *best = Some(enc);
        }
        return;
    };
    for v in (0..n).filter(|&v| colors[v] == cell) {
        let mut next: Vec<usize> = colors
            .iter()
            .enumerate()
            .map(|(w, &c)| 2 * c + usize::from(c == cell && w != v))
            .collect();
        next = ranks(&next);
        refine(&mut next, inc);
        search(board, inc, next, best);
    }
}
