//! Scripted strategies for multi-structural games on linear orders, with
//! harnesses that pit them against exhaustive opponents and replayable
//! traces of every run.

use msgames_core::{BudgetExceeded, CoreError};
use msgames_ms::MsError;
use thiserror::Error;

pub mod duplicator;
pub mod ef;
pub mod ladder;
pub mod spoiler;
pub mod trace;

pub use duplicator::{certify_duplicator, duplicator_script, Certification, DuplicatorScript, Reply};
pub use ef::{run_ef_spoiler, EfScriptRun};
pub use ladder::{ladder, LadderReport};
pub use spoiler::{finisher, run_spoiler, run_spoiler_against, spoiler_script, SpoilerRun, SpoilerScript};
pub use trace::{Actor, Snapshot, Trace, TraceLine};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("trace line {line}: {msg}")]
    Trace { line: usize, msg: String },
    /// A script broke its own contract: an illegal move, too many copies.
    #[error("script defect: {0}")]
    ScriptDefect(String),
    /// A state outside the script's declared domain.
    #[error("{0}")]
    Domain(String),
    /// Adjacent sizes a ladder could not certify.
    #[error("no certification for {big} against {small}")]
    Gap { big: usize, small: usize },
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Ms(MsError),
}

impl From<MsError> for LabError {
    fn from(e: MsError) -> LabError {
        match e {
            MsError::Budget(b) => LabError::Budget(b),
            e => LabError::Ms(e),
        }
    }
}

impl From<CoreError> for LabError {
    fn from(e: CoreError) -> LabError {
        LabError::Ms(MsError::Core(e))
    }
}
