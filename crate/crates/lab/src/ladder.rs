//! Chaining adjacent-size certifications.
//!
//! Duplicator winning the r-round game on sizes n + 1 and n for every n in
//! a range makes the r-round equivalence hold between all sizes in it, by
//! transitivity. Only adjacent pairs are searched.

use msgames_core::{Board, Budget};
use msgames_ms::{GameState, Variant};

use crate::duplicator::{certify_duplicator, DuplicatorScript};
use crate::LabError;

#[derive(Debug, Clone)]
pub struct LadderStep {
    pub big: usize,
    pub small: usize,
    pub script: String,
    pub nodes: u64,
}

#[derive(Debug, Clone)]
pub struct LadderReport {
    pub rounds: usize,
    pub atoms: bool,
    pub steps: Vec<LadderStep>,
    /// Every pair `(big, small)` of distinct sizes in range, all Duplicator
    /// wins.
    pub pairs: Vec<(usize, usize)>,
}

/// Certifies each adjacent pair in `lo..=hi` with the scripts `family`
/// yields for it, tried in order, and derives every pair in range.
pub fn ladder(
    family: &dyn Fn(usize, usize) -> Vec<Box<dyn DuplicatorScript>>,
    lo: usize,
    hi: usize,
    rounds: usize,
    atoms: bool,
    budget: &Budget,
) -> Result<LadderReport, LabError> {
    let v = Variant { atoms, no_play_on_top: false };
    let mut steps = Vec::new();
    for small in lo..hi {
        let big = small + 1;
        let state = GameState::free(vec![Board::linear(big)?], vec![Board::linear(small)?], rounds, v)?;
        let mut done = None;
        for script in family(big, small) {
            let before = budget.nodes();
            let c = certify_duplicator(script.as_ref(), &state, budget)?;
            if c.certified() {
                done = Some(LadderStep { big, small, script: c.script, nodes: budget.nodes() - before });
                break;
            }
        }
        steps.push(done.ok_or(LabError::Gap { big, small })?);
    }
    let pairs = (lo..=hi).flat_map(|s| (s + 1..=hi).map(move |b| (b, s))).collect();
    Ok(LadderReport { rounds, atoms, steps, pairs })
}
