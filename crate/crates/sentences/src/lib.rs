//! First-order sentences over linear orders with constants and an atom
//! predicate: text syntax, quantifier metrics, a memoising model checker,
//! a library of separating sentences, and synthesis of a distinguishing
//! sentence from a Spoiler certificate.

mod ast;
mod eval;
pub mod library;
mod parse;
mod synth;

use msgames_core::{BudgetExceeded, CoreError};
use msgames_ms::MsError;
use thiserror::Error;

pub use ast::{Formula, QuantifierProfile, Sentence, Term};
pub use eval::{eval, eval_with_budget, Model};
pub use library::library;
pub use parse::{parse, parse_with_constants};
pub use synth::{distinguishes, model_for, synthesize};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SentenceError {
    /// Syntax error at a character offset.
    #[error("syntax error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// A symbol the model does not interpret, or a free variable.
    #[error("{0}")]
    Usage(String),
    #[error("unknown sentence `{0}`")]
    UnknownName(String),
    #[error("invalid certificate: {0}")]
    Certificate(String),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

impl From<MsError> for SentenceError {
    fn from(e: MsError) -> Self {
        match e {
            MsError::Budget(b) => SentenceError::Budget(b),
            MsError::Core(c) => SentenceError::Usage(c.to_string()),
            MsError::Certificate(m) => SentenceError::Certificate(m),
        }
    }
}

impl From<CoreError> for SentenceError {
    fn from(e: CoreError) -> Self {
        SentenceError::Usage(e.to_string())
    }
}

/// Quantifier count, rank and prenex prefix.
pub fn quantifier_profile(s: &Sentence) -> QuantifierProfile {
    s.profile()
}
