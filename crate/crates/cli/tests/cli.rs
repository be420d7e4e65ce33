use std::process::{Command, Output};

fn msgames(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msgames"))
        .args(args)
        .env_remove("MSGAMES_BUDGET_NODES")
        .env_remove("MSGAMES_BUDGET_MS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_exit_codes_name_the_winner() {
    let o = msgames(&["solve", "ms", "--a", "lo:3", "--b", "lo:2", "--rounds", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("Duplicator\nnodes: "));
    let o = msgames(&["solve", "ms", "--a", "lo:3", "--b", "lo:2", "--rounds", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("Spoiler\n"));
    let o = msgames(&["solve", "ef", "--a", "lo:3", "--b", "lo:2", "--rounds", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = msgames(&["solve", "ef", "--a", "lo:4", "--b", "lo:3", "--rounds", "2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn several_boards_per_side() {
    let o = msgames(&["solve", "ms", "--a", "lo:3", "lo:4", "--b", "lo:2", "--rounds", "2"]);
    assert!(matches!(o.status.code(), Some(0 | 1)));
}

#[test]
fn prefix_fixes_the_sides() {
    let o = msgames(&["solve", "ms", "--a", "lo:5", "--b", "lo:4", "--prefix", "EAE"]);
    assert!(matches!(o.status.code(), Some(0 | 1)), "{o:?}");
    let o = msgames(&["solve", "ms", "--a", "lo:5", "--b", "lo:4", "--prefix", "EA", "--rounds", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(msgames(&["solve"]).status.code(), Some(2));
    assert_eq!(msgames(&["solve", "ms", "--a", "lo:x", "--b", "lo:2", "--rounds", "1"]).status.code(), Some(2));
    assert_eq!(msgames(&["solve", "ms", "--a", "lo:3", "--b", "lo:2"]).status.code(), Some(2));
    assert_eq!(msgames(&["certify", "--script", "nope", "--a", "lo:3", "--b", "lo:2", "--rounds", "1"]).status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_3() {
    let o = Command::new(env!("CARGO_BIN_EXE_msgames"))
        .args(["solve", "ms", "--a", "lo:10", "--b", "lo:9", "--rounds", "3"])
        .env("MSGAMES_BUDGET_NODES", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3), "{o:?}");
}

#[test]
fn sentence_eval() {
    let o = msgames(&["sentence", "eval", "--name", "phi2", "--model", "lo:1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "false");
    let o = msgames(&["sentence", "eval", "--name", "phi2", "--model", "lo:2"]);
    assert_eq!(stdout(&o).trim(), "true");
}

#[test]
fn certificate_round_trips_through_synthesis() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    let cert_s = cert.to_str().unwrap();
    let o = msgames(&["solve", "ms", "--a", "lo:3", "--b", "lo:2", "--rounds", "3", "--certificate", cert_s]);
    assert_eq!(o.status.code(), Some(1));
    let o = msgames(&["sentence", "synth", "--from", cert_s]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let phi = stdout(&o);
    let phi = phi.trim();
    let on = |m: &str| stdout(&msgames(&["sentence", "eval", "--text", phi, "--model", m])).trim().to_string();
    assert_ne!(on("lo:3"), on("lo:2"));
}

#[test]
fn scripts_and_traces() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.trace");
    let t = trace.to_str().unwrap();
    let o = msgames(&["run", "--script", "ten_v_nine", "--a", "lo:10", "--b", "lo:9", "--rounds", "4", "--trace", t]);
    assert_eq!(o.status.code(), Some(1), "{o:?}");
    let o = msgames(&["replay", t]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("after round 4"));

    let o = msgames(&["certify", "--script", "split_board", "--a", "lo:11", "--b", "lo:10", "--rounds", "3", "--atoms"]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    assert!(stdout(&o).starts_with("certified"));
}

#[test]
fn table_last_row() {
    let o = msgames(&["table", "--max-r", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().last(), Some("6\t63\t42\t42\t42"));
}

#[test]
fn campaign_report() {
    let o = msgames(&["campaign", "f-table", "--max-r", "3"]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    assert!(stdout(&o).lines().all(|l| l.split('\t').count() == 7));
    assert_eq!(msgames(&["campaign", "nope"]).status.code(), Some(2));
}
