//! Exact solver for multi-structural games.
//!
//! Duplicator's best strategy is to make every possible reply on separate
//! copies, so the game reduces to a one-player search for Spoiler over sets
//! of boards. Boards with no alive partner are dropped, sets are
//! deduplicated by canonical key, and positions on plain linear orders are
//! normalised by gap capping and mirror symmetry before memo lookup.

mod certificate;
pub mod doc;
mod solver;
mod state;

use msgames_core::{BudgetExceeded, CoreError};
use thiserror::Error;

pub use certificate::{replay_certificate, CertRound, SpoilerCertificate};
pub use solver::{ms_winner, MsSolver, MsVerdict};
pub use state::{alive_pairs, alive_pairs_idx, dedup, duplicator_expand, prune_dead, GameState, Variant};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MsError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Core(#[from] CoreError),
    /// A certificate that does not fit the game it is replayed on.
    #[error("malformed certificate: {0}")]
    Certificate(String),
}
