//! Verification campaigns: enumerate instances within caps, compare the
//! solvers or the evaluator with the closed forms, and report one record
//! per instance.

use std::fmt;
use std::fs::OpenOptions;
use std::io::Write as _;
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use msgames_core::{Board, Budget, Quantifier, Side, Structure, Vocabulary, Winner};
use msgames_ef::{ef_prefix_winner, EfError, EfSolver};
use msgames_ms::{replay_certificate, GameState, MsError, MsSolver, SpoilerCertificate, Variant};
use msgames_sentences::{distinguishes, eval_with_budget, library, synthesize, Model, SentenceError};
use rayon::prelude::*;

use crate::{f_closed, g_closed, g_forall_bound, g_prime_closed, BoundsError};

pub const CAMPAIGNS: [&str; 7] =
    ["f-table", "g-small", "g-gap", "atoms-table", "sentence-boundaries", "prefix-discrepancy", "invariants"];

/// Default per-instance node cap, overridable with `MSGAMES_BUDGET_NODES`.
pub const DEFAULT_NODES: u64 = 200_000_000;
/// Default per-instance time cap, overridable with `MSGAMES_BUDGET_MS`.
pub const DEFAULT_TIME: Duration = Duration::from_secs(600);

const PLAIN: Variant = Variant { atoms: false, no_play_on_top: false };
const ATOMS: Variant = Variant { atoms: true, no_play_on_top: false };

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub campaign: String,
    pub key: String,
    pub expected: String,
    pub observed: String,
    pub status: Status,
    pub nodes: u64,
    pub millis: u128,
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.campaign, self.key, self.expected, self.observed, self.status, self.nodes, self.millis
        )
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub campaign: String,
    /// Sorted by key.
    pub records: Vec<Record>,
}

impl Report {
    pub fn count(&self, s: Status) -> usize {
        self.records.iter().filter(|r| r.status == s).count()
    }

    /// Every record passed. Skipped records count against this.
    pub fn all_pass(&self) -> bool {
        !self.records.is_empty() && self.records.iter().all(|r| r.status == Status::Pass)
    }

    pub fn to_tsv(&self) -> String {
        self.records.iter().map(|r| format!("{r}\n")).collect()
    }

    /// Appends the records to `path`, creating it if needed.
    pub fn append_to(&self, path: &Path) -> std::io::Result<()> {
        let mut f = OpenOptions::new().create(true).append(true).open(path)?;
        f.write_all(self.to_tsv().as_bytes())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status != Status::Pass)
    }
}

/// Size and round limits. `None` keeps the campaign's default.
#[derive(Debug, Clone, Copy, Default)]
pub struct Caps {
    pub max_r: Option<usize>,
    pub max_n: Option<usize>,
}

enum Fault {
    Budget,
    Error(String),
}

impl From<MsError> for Fault {
    fn from(e: MsError) -> Fault {
        match e {
            MsError::Budget(_) => Fault::Budget,
            e => Fault::Error(e.to_string()),
        }
    }
}

impl From<EfError> for Fault {
    fn from(e: EfError) -> Fault {
        match e {
            EfError::Budget(_) => Fault::Budget,
            e => Fault::Error(e.to_string()),
        }
    }
}

impl From<SentenceError> for Fault {
    fn from(e: SentenceError) -> Fault {
        match e {
            SentenceError::Budget(_) => Fault::Budget,
            e => Fault::Error(e.to_string()),
        }
    }
}

impl From<msgames_core::CoreError> for Fault {
    fn from(e: msgames_core::CoreError) -> Fault {
        Fault::Error(e.to_string())
    }
}

type Check = Box<dyn Fn(&Budget) -> Result<String, Fault> + Send + Sync>;

struct Instance {
    key: String,
    expected: String,
    time: Duration,
    check: Check,
}

fn inst(key: String, expected: impl ToString, check: impl Fn(&Budget) -> Result<String, Fault> + Send + Sync + 'static) -> Instance {
    Instance { key, expected: expected.to_string(), time: DEFAULT_TIME, check: Box::new(check) }
}

fn run_all(campaign: &str, instances: Vec<Instance>) -> Report {
    let mut records: Vec<Record> = instances
        .into_par_iter()
        .map(|i| {
            let budget = Budget::from_env(DEFAULT_NODES, Some(i.time));
            let start = Instant::now();
            let (observed, status) = match (i.check)(&budget) {
                Ok(o) => {
                    let s = if o == i.expected { Status::Pass } else { Status::Fail };
                    (o, s)
                }
                Err(Fault::Budget) => ("budget exceeded".to_string(), Status::Skipped),
                Err(Fault::Error(e)) => (format!("error: {e}"), Status::Fail),
            };
            Record {
                campaign: campaign.to_string(),
                key: i.key,
                expected: i.expected,
                observed,
                status,
                nodes: budget.nodes(),
                millis: start.elapsed().as_millis(),
            }
        })
        .collect();
    records.sort_by(|a, b| a.key.cmp(&b.key));
    Report { campaign: campaign.to_string(), records }
}

/// Runs the named campaign.
pub fn verify_campaign(name: &str, caps: Caps) -> Result<Report, BoundsError> {
    let instances = match name {
        "f-table" => f_table(caps.max_r.unwrap_or(4), caps.max_n.unwrap_or(20))?,
        "g-small" => g_small(caps.max_r.unwrap_or(3), caps.max_n.unwrap_or(7))?,
        "g-gap" => g_gap(caps.max_r.unwrap_or(3), caps.max_n.unwrap_or(7))?,
        "atoms-table" => atoms_table(caps.max_r.unwrap_or(3), caps.max_n.unwrap_or(7))?,
        "sentence-boundaries" => sentence_boundaries(caps.max_r.unwrap_or(6))?,
        "prefix-discrepancy" => prefix_discrepancy(),
        "invariants" => invariants(caps.max_r.unwrap_or(3), caps.max_n.unwrap_or(5)),
        other => return Err(BoundsError::UnknownCampaign(other.to_string())),
    };
    Ok(run_all(name, instances))
}

fn lo(n: usize) -> Board {
    Board::linear(n).expect("positive size")
}

fn winner_name(w: Winner) -> String {
    w.to_string()
}

fn pair_key(r: usize, n: usize, m: usize) -> String {
    format!("r={r} a={n:02} b={m:02}")
}

fn f_table(max_r: usize, max_n: usize) -> Result<Vec<Instance>, BoundsError> {
    let solver = Arc::new(EfSolver::new());
    let mut out = Vec::new();
    for r in 1..=max_r {
        let f = f_closed(r)?;
        for n in 2..=max_n {
            for m in 1..n {
                let expect = if m as u64 >= f { Winner::Duplicator } else { Winner::Spoiler };
                let s = solver.clone();
                out.push(inst(pair_key(r, n, m), expect, move |b| Ok(winner_name(s.winner(&lo(n), &lo(m), r, b)?))));
            }
        }
    }
    Ok(out)
}

/// Replays the certificate, synthesises a sentence from it and checks the
/// sentence's quantifier count and truth values.
fn synthesis_check(state: &GameState, cert: &SpoilerCertificate) -> Result<String, Fault> {
    if !replay_certificate(state, cert)? {
        return Ok("certificate does not replay".into());
    }
    let s = synthesize(cert, state)?;
    if s.quantifier_count() > state.rounds_left() {
        return Ok(format!("count {} over {}", s.quantifier_count(), state.rounds_left()));
    }
    if !distinguishes(&s, state)? {
        return Ok("sentence does not separate".into());
    }
    Ok("sound".into())
}

/// Solver verdicts on single orders against `threshold`, plus a synthesis
/// record for every Spoiler win.
fn ms_pairs(
    max_r: usize,
    max_n: usize,
    v: Variant,
    threshold: impl Fn(usize) -> Result<u64, BoundsError>,
    larger_on_a: bool,
) -> Result<Vec<Instance>, BoundsError> {
    let solver = Arc::new(MsSolver::new());
    let mut out = Vec::new();
    for r in 1..=max_r {
        let t = threshold(r)?;
        for n in 2..=max_n {
            for m in 1..n {
                let expect = if m as u64 >= t { Winner::Duplicator } else { Winner::Spoiler };
                let (x, y) = if larger_on_a { (n, m) } else { (m, n) };
                let key = pair_key(r, x, y);
                let s = solver.clone();
                out.push(inst(key.clone(), expect, move |b| {
                    let st = GameState::free(vec![lo(x)], vec![lo(y)], r, v)?;
                    Ok(winner_name(s.winner(&st, b)?))
                }));
                if expect == Winner::Spoiler {
                    let s = solver.clone();
                    out.push(inst(format!("{key} synthesis"), "sound", move |b| {
                        let st = GameState::free(vec![lo(x)], vec![lo(y)], r, v)?;
                        match s.solve(&st, b)?.certificate {
                            Some(c) => synthesis_check(&st, &c),
                            None => Ok("no Spoiler win".into()),
                        }
                    }));
                }
            }
        }
    }
    Ok(out)
}

fn g_small(max_r: usize, max_n: usize) -> Result<Vec<Instance>, BoundsError> {
    ms_pairs(max_r, max_n, PLAIN, g_closed, true)
}

/// The smaller order on side A: Spoiler wins iff it is below `g(r)`.
fn g_gap(max_r: usize, max_n: usize) -> Result<Vec<Instance>, BoundsError> {
    ms_pairs(max_r, max_n, PLAIN, g_closed, false)
}

fn atoms_table(max_r: usize, max_n: usize) -> Result<Vec<Instance>, BoundsError> {
    let mut out = ms_pairs(max_r, max_n, ATOMS, g_prime_closed, true)?;
    // first move forced onto the smaller side: Duplicator from 2 g'(r - 1)
    let solver = Arc::new(MsSolver::new());
    for r in 2..=max_r {
        let Some(t) = g_forall_bound(r)? else { continue };
        for n in 2..=max_n {
            for m in (t as usize).max(1)..n {
                let s = solver.clone();
                out.push(inst(format!("{} first-on-b", pair_key(r, n, m)), Winner::Duplicator, move |b| {
                    let mut cons = vec![None; r];
                    cons[0] = Some(Side::B);
                    let st = GameState::new(vec![lo(n)], vec![lo(m)], cons, ATOMS)?;
                    Ok(winner_name(s.winner(&st, b)?))
                }));
            }
        }
    }
    Ok(out)
}

fn truth(name: String, n: usize, time: Duration) -> Instance {
    let expect = !name.ends_with("below");
    let (sentence, _) = name.split_once(' ').expect("key has a size");
    let sentence = sentence.to_string();
    let mut i = inst(name, expect, move |b| {
        let s = library(&sentence)?;
        let st = Structure::linear_order(n)?;
        Ok(eval_with_budget(&s, &Model::new(&st), b)?.to_string())
    });
    i.time = time;
    i
}

fn sentence_boundaries(max_r: usize) -> Result<Vec<Instance>, BoundsError> {
    let mut out = Vec::new();
    for r in 2..=max_r.min(6) {
        let g = g_closed(r)? as usize;
        let time = if r == 6 { Duration::from_secs(600) } else { DEFAULT_TIME };
        out.push(truth(format!("phi{r} n={g:02} at"), g, time));
        out.push(truth(format!("phi{r} n={:02} below", g - 1), g - 1, time));
    }
    for k in 5..=9 {
        out.push(truth(format!("phi4_{k} n={k:02} at"), k, DEFAULT_TIME));
        out.push(truth(format!("phi4_{k} n={:02} below", k - 1), k - 1, DEFAULT_TIME));
    }
    Ok(out)
}

fn prefix_discrepancy() -> Vec<Instance> {
    let prefix = vec![Quantifier::Exists, Quantifier::Forall, Quantifier::Exists];
    let p = prefix.clone();
    let ef = inst("ef EAE a=05 b=04".into(), Winner::Spoiler, move |b| {
        Ok(winner_name(ef_prefix_winner(&lo(5), &lo(4), &p, b)?.winner))
    });
    let ms = inst("ms EAE a=05 b=04".into(), Winner::Duplicator, move |b| {
        let cons = prefix.iter().map(|q| Some(q.side())).collect();
        let st = GameState::new(vec![lo(5)], vec![lo(4)], cons, PLAIN)?;
        Ok(winner_name(MsSolver::new().winner(&st, b)?))
    });
    vec![ef, ms]
}

fn spoiler(s: &MsSolver, a: Vec<Board>, b: Vec<Board>, cons: Vec<Option<Side>>, v: Variant, budget: &Budget) -> Result<bool, Fault> {
    let st = GameState::new(a, b, cons, v)?;
    Ok(s.winner(&st, budget)? == Winner::Spoiler)
}

fn constraint_vectors(r: usize) -> Vec<Vec<Option<Side>>> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Option<Side>>| {
                [None, Some(Side::A), Some(Side::B)].into_iter().map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

fn render_cons(c: &[Option<Side>]) -> String {
    c.iter().map(|s| s.map_or('-', Side::letter)).collect()
}

/// `lo:n` as a general structure, elements permuted by `i -> (i k + s) mod n`.
fn scrambled(n: usize, k: usize, s: usize) -> Board {
    let pi = |i: usize| (i * k + s) % n;
    let tuples = (0..n).flat_map(|i| (i + 1..n).map(move |j| vec![pi(i), pi(j)])).collect();
    let st = Structure::new(Vocabulary::order(), n, vec![tuples], vec![], vec![]).expect("valid order");
    Board::new(Arc::new(st))
}

/// A multiplier coprime to `n`.
fn unit(n: usize) -> usize {
    (2..n).find(|k| gcd(*k, n) == 1).unwrap_or(1)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn holds(ok: bool) -> String {
    if ok { "holds" } else { "violated" }.to_string()
}

/// Laws every game verdict must obey, checked exhaustively on small
/// orders.
fn invariants(max_r: usize, max_n: usize) -> Vec<Instance> {
    let solver = Arc::new(MsSolver::new());
    let mut out = Vec::new();
    let small = max_n.min(4);
    for r in 0..=max_r {
        for cons in constraint_vectors(r) {
            for n in 1..=max_n {
                for m in 1..=max_n {
                    for v in [PLAIN, ATOMS] {
                        let s = solver.clone();
                        let cons = cons.clone();
                        let key = format!("side-symmetry r={r} c={} a={n} b={m} atoms={}", render_cons(&cons), v.atoms);
                        out.push(inst(key, "holds", move |b| {
                            let mirrored = cons.iter().map(|c| c.map(Side::other)).collect();
                            let x = spoiler(&s, vec![lo(n)], vec![lo(m)], cons.clone(), v, b)?;
                            let y = spoiler(&s, vec![lo(m)], vec![lo(n)], mirrored, v, b)?;
                            Ok(holds(x == y))
                        }));
                    }
                }
            }
        }
    }
    for r in 0..max_r {
        for n in 1..=max_n {
            for m in 1..=max_n {
                let s = solver.clone();
                out.push(inst(format!("round-monotonicity r={r} a={n} b={m}"), "holds", move |b| {
                    let now = spoiler(&s, vec![lo(n)], vec![lo(m)], vec![None; r], PLAIN, b)?;
                    Ok(holds(!now || spoiler(&s, vec![lo(n)], vec![lo(m)], vec![None; r + 1], PLAIN, b)?))
                }));
            }
        }
    }
    let sets: Vec<Vec<usize>> = (1u32..1 << small).map(|m| (1..=small).filter(|&i| m & (1 << (i - 1)) != 0).collect()).collect();
    let sets = Arc::new(sets);
    for r in 1..=max_r {
        for i in 0..sets.len() {
            for j in 0..sets.len() {
                let (s, sets) = (solver.clone(), sets.clone());
                let key = format!("subset-monotonicity r={r} a={:?} b={:?}", sets[i], sets[j]);
                out.push(inst(key, "holds", move |b| {
                    let boards = |x: &[usize]| x.iter().map(|&n| lo(n)).collect::<Vec<_>>();
                    if !spoiler(&s, boards(&sets[i]), boards(&sets[j]), vec![None; r], PLAIN, b)? {
                        return Ok(holds(true));
                    }
                    let sub = |x: &[usize], y: &[usize]| x.iter().all(|e| y.contains(e));
                    for s2 in sets.iter().filter(|s2| sub(s2, &sets[i])) {
                        for t2 in sets.iter().filter(|t2| sub(t2, &sets[j])) {
                            if !spoiler(&s, boards(s2), boards(t2), vec![None; r], PLAIN, b)? {
                                return Ok(holds(false));
                            }
                        }
                    }
                    Ok(holds(true))
                }));
            }
        }
    }
    for r in 1..=max_r {
        for n in 1..=max_n {
            for m in 1..=max_n {
                let s = solver.clone();
                out.push(inst(format!("dedup-soundness r={r} a={n} b={m}"), "holds", move |b| {
                    let plain = spoiler(&s, vec![lo(n)], vec![lo(m)], vec![None; r], PLAIN, b)?;
                    let dup = spoiler(&s, vec![lo(n), scrambled(n, unit(n), 1), lo(n)], vec![lo(m), lo(m)], vec![None; r], PLAIN, b)?;
                    Ok(holds(plain == dup))
                }));
                let s = solver.clone();
                out.push(inst(format!("atoms-dominance r={r} a={n} b={m}"), "holds", move |b| {
                    let plain = spoiler(&s, vec![lo(n)], vec![lo(m)], vec![None; r], PLAIN, b)?;
                    Ok(holds(!plain || spoiler(&s, vec![lo(n)], vec![lo(m)], vec![None; r], ATOMS, b)?))
                }));
            }
        }
    }
    for r in 0..=max_r {
        for n in 1..=small {
            for m in 1..=small {
                let s = solver.clone();
                out.push(inst(format!("union-structure r={r} a={n} b={m}"), "holds", move |b| {
                    let with_atoms = spoiler(&s, vec![lo(n)], vec![lo(m)], vec![None; r], ATOMS, b)?;
                    let u = |k: usize| Board::new(Arc::new(Structure::linear_order(k).expect("positive").union_with_atoms(r)));
                    let unioned = spoiler(&s, vec![u(n)], vec![u(m)], vec![None; r], PLAIN, b)?;
                    Ok(holds(with_atoms == unioned))
                }));
            }
        }
        for x in 1..=max_n {
            let s = solver.clone();
            out.push(inst(format!("transitivity r={r} a={x}"), "holds", move |b| {
                let dup = |p: usize, q: usize| -> Result<bool, Fault> { Ok(!spoiler(&s, vec![lo(p)], vec![lo(q)], vec![None; r], PLAIN, b)?) };
                for y in 1..=max_n {
                    for z in 1..=max_n {
                        if dup(x, y)? && dup(y, z)? && !dup(x, z)? {
                            return Ok(holds(false));
                        }
                    }
                }
                Ok(holds(true))
            }));
        }
    }
    out
}
