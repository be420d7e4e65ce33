//! Threshold sizes for games on linear orders.
//!
//! `f(r)`: below it Spoiler wins the r-round Ehrenfeucht-Fraisse game.
//! `g(r)`: the same for multi-structural games, `g'(r)` with atoms, and
//! `g'_forall(r)` with atoms and Spoiler's first move forced onto the
//! smaller side, for which only an upper bound is known.

use std::fmt::Write as _;

use thiserror::Error;

pub mod campaign;

pub use campaign::{verify_campaign, Caps, Record, Report, Status, CAMPAIGNS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("round counts start at 1")]
    ZeroRounds,
    #[error("value for r = {0} does not fit in 64 bits")]
    Overflow(usize),
    #[error("unknown campaign `{0}`; expected one of {list}", list = CAMPAIGNS.join(", "))]
    UnknownCampaign(String),
}

pub fn f_closed(r: usize) -> Result<u64, BoundsError> {
    if r == 0 {
        return Err(BoundsError::ZeroRounds);
    }
    1u64.checked_shl(r as u32).filter(|_| r < 64).map(|p| p - 1).ok_or(BoundsError::Overflow(r))
}

/// Doubles from round 4 on, adding one on odd rounds.
fn recur(base: &[u64], r: usize) -> Result<u64, BoundsError> {
    if r == 0 {
        return Err(BoundsError::ZeroRounds);
    }
    if r <= base.len() {
        return Ok(base[r - 1]);
    }
    let mut v = base[base.len() - 1];
    for k in base.len() + 1..=r {
        v = v.checked_mul(2).and_then(|x| x.checked_add(u64::from(k % 2 == 1))).ok_or(BoundsError::Overflow(r))?;
    }
    Ok(v)
}

pub fn g_closed(r: usize) -> Result<u64, BoundsError> {
    recur(&[1, 2, 4, 10], r)
}

pub fn g_prime_closed(r: usize) -> Result<u64, BoundsError> {
    recur(&[1, 2, 5], r)
}

/// Upper bound `2 g'(r - 1)`; none for one round.
pub fn g_forall_bound(r: usize) -> Result<Option<u64>, BoundsError> {
    if r == 0 {
        return Err(BoundsError::ZeroRounds);
    }
    if r == 1 {
        return Ok(None);
    }
    let v = g_prime_closed(r - 1)?;
    v.checked_mul(2).map(Some).ok_or(BoundsError::Overflow(r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundsRow {
    pub r: usize,
    pub f: u64,
    pub g: u64,
    pub g_prime: u64,
    pub g_forall: Option<u64>,
}

pub fn bounds_table(max_r: usize) -> Result<Vec<BoundsRow>, BoundsError> {
    (1..=max_r)
        .map(|r| {
            Ok(BoundsRow { r, f: f_closed(r)?, g: g_closed(r)?, g_prime: g_prime_closed(r)?, g_forall: g_forall_bound(r)? })
        })
        .collect()
}

/// Tab-separated table with a header line.
pub fn render_table(rows: &[BoundsRow]) -> String {
    let mut out = String::from("r\tf\tg\tg'\tg'_forall<=\n");
    for row in rows {
        let gf = row.g_forall.map_or("-".to_string(), |v| v.to_string());
        let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}", row.r, row.f, row.g, row.g_prime, gf);
    }
    out
}
