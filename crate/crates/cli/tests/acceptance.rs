//! Acceptance run: one PASS/FAIL line per headline criterion, non-zero exit
//! on any failure. SKIPPED campaign records count as failures.

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use msgames_bounds::{bounds_table, f_closed, g_closed, g_prime_closed, verify_campaign, Caps, Report, Status};
use msgames_core::{Board, Budget, Winner};
use msgames_ef::EfSolver;
use msgames_lab::duplicator::{naive_mirror, SplitBoard};
use msgames_lab::spoiler::{MiddleRecursive, TenVsNine};
use msgames_lab::{certify_duplicator, run_spoiler};
use msgames_ms::{GameState, MsSolver, Variant};

const PLAIN: Variant = Variant { atoms: false, no_play_on_top: false };
const ATOMS: Variant = Variant { atoms: true, no_play_on_top: false };

type Outcome = Result<(), String>;

fn lo(n: usize) -> Board {
    Board::linear(n).unwrap()
}

fn campaign(name: &str) -> Report {
    verify_campaign(name, Caps::default()).unwrap()
}

/// Every record selected by `keep` passed, and there was at least one.
fn passed(rep: &Report, keep: impl Fn(&str) -> bool) -> Outcome {
    let chosen: Vec<_> = rep.records.iter().filter(|r| keep(&r.key)).collect();
    if chosen.is_empty() {
        return Err("no records".into());
    }
    match chosen.iter().find(|r| r.status != Status::Pass) {
        Some(r) => Err(format!("{} {}: expected {}, got {}", r.campaign, r.key, r.expected, r.observed)),
        None => Ok(()),
    }
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Outcome {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: expected {want:?}, got {got:?}"))
    }
}

fn ms(a: usize, b: usize, r: usize, v: Variant) -> Winner {
    let st = GameState::free(vec![lo(a)], vec![lo(b)], r, v).unwrap();
    MsSolver::new().winner(&st, &Budget::unlimited()).unwrap()
}

fn intro_pair() -> Outcome {
    expect("ms 3 vs 2", ms(3, 2, 2, PLAIN), Winner::Duplicator)?;
    let ef = EfSolver::new().winner(&lo(3), &lo(2), 2, &Budget::unlimited()).unwrap();
    expect("ef 3 vs 2", ef, Winner::Spoiler)
}

fn certified_scripts() -> Outcome {
    let st = |n, m, r, v| GameState::free(vec![lo(n)], vec![lo(m)], r, v).unwrap();
    let run = run_spoiler(&TenVsNine, &st(10, 9, 4, PLAIN)).map_err(|e| e.to_string())?;
    expect("ten_v_nine", run.winner, Winner::Spoiler)?;
    let run = run_spoiler(&MiddleRecursive, &st(21, 20, 5, PLAIN)).map_err(|e| e.to_string())?;
    expect("middle_recursive", run.winner, Winner::Spoiler)?;
    let budget = Budget::new(u64::MAX, Some(std::time::Duration::from_secs(1800)));
    let c = certify_duplicator(&SplitBoard, &st(11, 10, 4, ATOMS), &budget).map_err(|e| e.to_string())?;
    expect("split_board certified", c.certified(), true)?;
    let c = certify_duplicator(&naive_mirror(), &st(10, 9, 4, PLAIN), &Budget::unlimited()).map_err(|e| e.to_string())?;
    expect("naive_mirror certified", c.certified(), false)?;
    let trace = c.trace.ok_or("refutation has no trace")?;
    let on_top = trace.on_top_moves().map_err(|e| e.to_string())?;
    expect("refutation plays on top", on_top.is_empty(), false)
}

fn table_sanity() -> Outcome {
    for r in 1..=30 {
        let (g, gp, f) = (g_closed(r).unwrap(), g_prime_closed(r).unwrap(), f_closed(r).unwrap());
        if !(g <= gp && gp <= f) {
            return Err(format!("r={r}: g={g} g'={gp} f={f}"));
        }
    }
    expect("g(5)", g_closed(5).unwrap(), 21)?;
    expect("g(6)", g_closed(6).unwrap(), 42)?;
    expect("g(10)", g_closed(10).unwrap(), 682)?;
    expect("g'(4)", g_prime_closed(4).unwrap(), 10)?;
    expect("table rows", bounds_table(30).unwrap().len(), 30)
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |name: &str, check: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let out = check();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(()) => println!("PASS {name} ({secs:.1}s)"),
            Err(e) => {
                failed += 1;
                println!("FAIL {name} ({secs:.1}s): {e}");
            }
        }
    };

    // shared by several criteria; run on first use
    let (g_small, g_gap, atoms) = (OnceLock::new(), OnceLock::new(), OnceLock::new());
    let g_small = || g_small.get_or_init(|| campaign("g-small"));
    let g_gap = || g_gap.get_or_init(|| campaign("g-gap"));
    let atoms = || atoms.get_or_init(|| campaign("atoms-table"));
    let is_synthesis = |k: &str| k.ends_with(" synthesis");

    report("f-table", &|| passed(&campaign("f-table"), |_| true));
    report("g-small", &|| passed(g_small(), |k| !is_synthesis(k)));
    report("intro pair", &intro_pair);
    report("atoms boundary", &|| passed(atoms(), |k| k == "r=3 a=05 b=04" || k == "r=3 a=06 b=05"));
    report("g'_forall contrast", &|| passed(atoms(), |k| k == "r=3 a=05 b=04 first-on-b"));
    report("sentence boundaries", &|| passed(&campaign("sentence-boundaries"), |_| true));
    report("synthesis soundness", &|| {
        passed(g_small(), is_synthesis)?;
        passed(atoms(), is_synthesis)
    });
    report("gap at g(r)", &|| {
        passed(g_gap(), |k| !is_synthesis(k))?;
        passed(g_small(), |k| !is_synthesis(k))
    });
    report("prefix discrepancy", &|| passed(&campaign("prefix-discrepancy"), |_| true));
    report("certified scripts", &certified_scripts);
    report("invariant suites", &|| passed(&campaign("invariants"), |_| true));
    report("bounds table sanity", &table_sanity);

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
