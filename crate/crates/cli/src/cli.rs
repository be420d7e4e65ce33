//! Command-line interface.
//!
//! Exit codes: for `solve`, `certify` and `run`, 0 when Duplicator wins and
//! 1 when Spoiler wins; 2 on usage errors; 3 when the search budget runs
//! out.

use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use msgames_bounds::{bounds_table, render_table, verify_campaign, Caps};
use msgames_core::{Board, Budget, Quantifier, Side, Winner};
use msgames_ef::{EfError, EfSolver};
use msgames_lab::{certify_duplicator, duplicator_script, run_spoiler, run_spoiler_against, spoiler_script, LabError, Trace};
use msgames_ms::doc::{parse_board_spec, parse_structure_spec};
use msgames_ms::{GameState, MsError, MsSolver, SpoilerCertificate, Variant};
use msgames_sentences::{eval_with_budget, library, parse, synthesize, Model, SentenceError};

use crate::service::{self, Config};
use crate::session::DEFAULT_CAP;

pub const EXIT_DUPLICATOR: i32 = 0;
pub const EXIT_SPOILER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

const DEFAULT_NODES: u64 = 1_000_000_000;
const DEFAULT_TIME: Duration = Duration::from_secs(1800);

#[derive(Debug, Parser)]
#[command(name = "msgames", version, about = "Multi-structural and Ehrenfeucht-Fraisse games on finite structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide who wins a game.
    Solve(SolveArgs),
    /// Evaluate or synthesise sentences.
    #[command(subcommand)]
    Sentence(SentenceCmd),
    /// Certify a scripted Duplicator against every Spoiler.
    Certify(ScriptArgs),
    /// Play a scripted Spoiler against the oblivious or a scripted Duplicator.
    Run(RunArgs),
    /// Check a trace file and print its rounds.
    Replay {
        path: PathBuf,
    },
    /// Print the table of threshold sizes.
    Table {
        #[arg(long, default_value_t = 10)]
        max_r: usize,
    },
    /// Run a verification campaign and report one line per instance.
    Campaign {
        name: String,
        #[arg(long)]
        max_r: Option<usize>,
        #[arg(long)]
        max_n: Option<usize>,
        /// Append the report to this file instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Start the HTTP session service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Directory for session files.
        #[arg(long)]
        sessions: Option<PathBuf>,
        /// Most boards in one engine Duplicator reply.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Game {
    Ef,
    Ms,
}

#[derive(Debug, Args)]
pub struct GameArgs {
    /// Side A boards: `lo:N`, JSON, `@file`, each optionally `@3,a1`.
    #[arg(long, num_args = 1.., required = true)]
    pub a: Vec<String>,
    #[arg(long, num_args = 1.., required = true)]
    pub b: Vec<String>,
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long)]
    pub atoms: bool,
    #[arg(long)]
    pub no_play_on_top: bool,
    /// Quantifier prefix such as `EAE`; fixes the side of every round.
    #[arg(long)]
    pub prefix: Option<String>,
    /// Side of the first round.
    #[arg(long)]
    pub constrain_first: Option<String>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(value_enum)]
    pub game: Game,
    #[command(flatten)]
    pub game_args: GameArgs,
    /// Write the Spoiler certificate here as JSON.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScriptArgs {
    #[arg(long)]
    pub script: String,
    #[command(flatten)]
    pub game_args: GameArgs,
    /// Write the refuting trace here.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub script: String,
    /// Duplicator script to play against instead of the oblivious one.
    #[arg(long)]
    pub against: Option<String>,
    #[command(flatten)]
    pub game_args: GameArgs,
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SentenceCmd {
    /// Truth value of a sentence on a structure.
    Eval {
        /// Library name: phi2..phi6, phi6_literal, phi4_K, chain:R.
        #[arg(long, conflicts_with = "text", required_unless_present = "text")]
        name: Option<String>,
        #[arg(long)]
        text: Option<String>,
        #[arg(long)]
        model: String,
        /// Atoms adjoined to the model.
        #[arg(long, default_value_t = 0)]
        atoms: usize,
    },
    /// Sentence separating the two sides of a certificate file.
    Synth {
        #[arg(long)]
        from: PathBuf,
    },
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, msg: msg.into() }
}

impl From<MsError> for Failure {
    fn from(e: MsError) -> Self {
        match e {
            MsError::Budget(b) => Failure { code: EXIT_BUDGET, msg: b.to_string() },
            e => usage(e.to_string()),
        }
    }
}

impl From<EfError> for Failure {
    fn from(e: EfError) -> Self {
        match e {
            EfError::Budget(b) => Failure { code: EXIT_BUDGET, msg: b.to_string() },
            e => usage(e.to_string()),
        }
    }
}

impl From<SentenceError> for Failure {
    fn from(e: SentenceError) -> Self {
        match e {
            SentenceError::Budget(b) => Failure { code: EXIT_BUDGET, msg: b.to_string() },
            e => usage(e.to_string()),
        }
    }
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        match e {
            LabError::Budget(b) => Failure { code: EXIT_BUDGET, msg: b.to_string() },
            e => usage(e.to_string()),
        }
    }
}

impl From<msgames_core::CoreError> for Failure {
    fn from(e: msgames_core::CoreError) -> Self {
        usage(e.to_string())
    }
}

fn io(e: std::io::Error) -> Failure {
    usage(e.to_string())
}

fn budget() -> Budget {
    Budget::from_env(DEFAULT_NODES, Some(DEFAULT_TIME))
}

/// A board spec, reading `@file` first.
fn read_spec(text: &str) -> Result<Board, Failure> {
    let owned;
    let text = match text.strip_prefix('@') {
        Some(path) => {
            owned = std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
            owned.trim()
        }
        None => text,
    };
    Ok(parse_board_spec(text)?)
}

impl GameArgs {
    fn boards(specs: &[String]) -> Result<Vec<Board>, Failure> {
        specs.iter().map(|s| read_spec(s)).collect()
    }

    fn prefix(&self) -> Result<Option<Vec<Quantifier>>, Failure> {
        self.prefix.as_deref().map(Quantifier::parse_prefix).transpose().map_err(|e| usage(e.to_string()))
    }

    fn constraints(&self) -> Result<Vec<Option<Side>>, Failure> {
        let mut cons = match (self.prefix()?, self.rounds) {
            (Some(p), Some(r)) if p.len() != r => return Err(usage("--prefix length differs from --rounds")),
            (Some(p), _) => p.into_iter().map(|q| Some(q.side())).collect(),
            (None, Some(r)) => vec![None; r],
            (None, None) => return Err(usage("give --rounds or --prefix")),
        };
        if let Some(f) = &self.constrain_first {
            let side: Side = f.parse().map_err(|_| usage(format!("unknown side `{f}`")))?;
            match cons.first_mut() {
                Some(c @ None) => *c = Some(side),
                Some(Some(s)) if *s == side => {}
                Some(_) => return Err(usage("--constrain-first contradicts --prefix")),
                None => return Err(usage("--constrain-first needs at least one round")),
            }
        }
        Ok(cons)
    }

    fn variant(&self) -> Variant {
        Variant { atoms: self.atoms, no_play_on_top: self.no_play_on_top }
    }

    fn state(&self) -> Result<GameState, Failure> {
        Ok(GameState::new(Self::boards(&self.a)?, Self::boards(&self.b)?, self.constraints()?, self.variant())?)
    }
}

fn exit_for(w: Winner) -> i32 {
    match w {
        Winner::Duplicator => EXIT_DUPLICATOR,
        Winner::Spoiler => EXIT_SPOILER,
    }
}

/// Runs `cli`, writing results to `out`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> i32 {
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            f.code
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Solve(args) => solve(args, out),
        Command::Sentence(cmd) => sentence(cmd, out),
        Command::Certify(args) => certify(args, out),
        Command::Run(args) => run_script(args, out),
        Command::Replay { path } => replay(&path, out),
        Command::Table { max_r } => {
            let rows = bounds_table(max_r).map_err(|e| usage(e.to_string()))?;
            write!(out, "{}", render_table(&rows)).map_err(io)?;
            Ok(0)
        }
        Command::Campaign { name, max_r, max_n, out: path } => {
            let rep = verify_campaign(&name, Caps { max_r, max_n }).map_err(|e| usage(e.to_string()))?;
            match path {
                Some(p) => rep.append_to(&p).map_err(io)?,
                None => write!(out, "{}", rep.to_tsv()).map_err(io)?,
            }
            let (pass, total) = (rep.count(msgames_bounds::Status::Pass), rep.records.len());
            eprintln!("{name}: {pass}/{total} PASS");
            Ok(if rep.all_pass() { 0 } else { 1 })
        }
        Command::Serve { port, sessions, cap } => {
            let rt = tokio::runtime::Runtime::new().map_err(io)?;
            rt.block_on(service::serve(port, Config { cap, dir: sessions })).map_err(io)?;
            Ok(0)
        }
    }
}

fn solve(args: SolveArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let g = &args.game_args;
    let b = budget();
    let winner = match args.game {
        Game::Ef => {
            let (a, bb) = (GameArgs::boards(&g.a)?, GameArgs::boards(&g.b)?);
            if a.len() != 1 || bb.len() != 1 {
                return Err(usage("an E-F game takes one board per side"));
            }
            if g.atoms || g.no_play_on_top {
                return Err(usage("--atoms and --no-play-on-top apply to MS games only"));
            }
            let cons = g.constraints()?;
            EfSolver::new().solve_constrained(&a[0], &bb[0], &cons, &b)?.winner
        }
        Game::Ms => {
            let st = g.state()?;
            let v = MsSolver::new().solve(&st, &b)?;
            if let (Some(path), Some(c)) = (&args.certificate, &v.certificate) {
                std::fs::write(path, c.to_json(&st)).map_err(io)?;
                writeln!(out, "certificate: {}", path.display()).map_err(io)?;
            }
            v.winner
        }
    };
    writeln!(out, "{winner}").map_err(io)?;
    writeln!(out, "nodes: {}", b.nodes()).map_err(io)?;
    Ok(exit_for(winner))
}

fn sentence(cmd: SentenceCmd, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        SentenceCmd::Eval { name, text, model, atoms } => {
            let s = match (name, text) {
                (Some(n), None) => library(&n)?,
                (None, Some(t)) => parse(&t)?,
                _ => return Err(usage("give exactly one of --name and --text")),
            };
            let st = match model.strip_prefix('@') {
                Some(path) => parse_structure_spec(std::fs::read_to_string(path).map_err(io)?.trim())?,
                None => parse_structure_spec(&model)?,
            };
            let t = eval_with_budget(&s, &Model::with_atoms(&st, atoms), &budget())?;
            writeln!(out, "{t}").map_err(io)?;
            Ok(0)
        }
        SentenceCmd::Synth { from } => {
            let text = std::fs::read_to_string(&from).map_err(io)?;
            let (st, cert) = SpoilerCertificate::from_json(&text)?;
            let s = synthesize(&cert, &st)?;
            writeln!(out, "{s}").map_err(io)?;
            Ok(0)
        }
    }
}

fn certify(args: ScriptArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let script = duplicator_script(&args.script).ok_or_else(|| usage(format!("unknown Duplicator script `{}`", args.script)))?;
    let st = args.game_args.state()?;
    let b = budget();
    let c = certify_duplicator(script.as_ref(), &st, &b)?;
    writeln!(out, "{}", if c.certified() { "certified" } else { "refuted" }).map_err(io)?;
    writeln!(out, "nodes: {}", c.nodes).map_err(io)?;
    if let Some(t) = &c.trace {
        match &args.trace {
            Some(p) => std::fs::write(p, t.render()).map_err(io)?,
            None => write!(out, "{}", t.render()).map_err(io)?,
        }
    }
    Ok(exit_for(c.winner))
}

fn run_script(args: RunArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let script = spoiler_script(&args.script).ok_or_else(|| usage(format!("unknown Spoiler script `{}`", args.script)))?;
    let st = args.game_args.state()?;
    let run = match &args.against {
        Some(name) => {
            let d = duplicator_script(name).ok_or_else(|| usage(format!("unknown Duplicator script `{name}`")))?;
            run_spoiler_against(script.as_ref(), d.as_ref(), &st)?
        }
        None => run_spoiler(script.as_ref(), &st)?,
    };
    writeln!(out, "{}", run.winner).map_err(io)?;
    match &args.trace {
        Some(p) => std::fs::write(p, run.trace.render()).map_err(io)?,
        None => write!(out, "{}", run.trace.render()).map_err(io)?,
    }
    Ok(exit_for(run.winner))
}

fn replay(path: &PathBuf, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = std::fs::read_to_string(path).map_err(io)?;
    let t = Trace::parse(&text)?;
    let snaps = t.replay()?;
    for (i, s) in snaps.iter().enumerate() {
        writeln!(out, "after round {i}: {} A boards, {} B boards", s.a.len(), s.b.len()).map_err(io)?;
    }
    Ok(0)
}
