//! JSON bodies of the session service.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Spoiler,
    Duplicator,
}

/// `POST /sessions`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    /// Board specs for side A, e.g. `lo:3` or `lo:5@2`.
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub rounds: usize,
    #[serde(default)]
    pub atoms: bool,
    #[serde(default)]
    pub no_play_on_top: bool,
    /// One character per round: `A`, `B` or `-` for free.
    #[serde(default)]
    pub constraints: Option<String>,
    pub human: Role,
}

/// One Duplicator copy: board `board` of the other side extended by
/// `selection`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReplyDoc {
    pub board: usize,
    pub selection: String,
}

/// `POST /sessions/{id}/move`: `side` and `selections` (board id to
/// selection) for a Spoiler move, or `replies` for a Duplicator move.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRequest {
    #[serde(default)]
    pub side: Option<String>,
    #[serde(default)]
    pub selections: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub replies: Option<Vec<ReplyDoc>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct BoardView {
    pub id: usize,
    pub spec: String,
    pub size: usize,
    pub history: Vec<String>,
    pub alive: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SpoilerMoveView {
    pub side: String,
    pub selections: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SessionView {
    pub id: String,
    pub human: Role,
    pub rounds: usize,
    pub rounds_left: usize,
    pub atoms: bool,
    pub no_play_on_top: bool,
    /// `spoiler`, `duplicator` or `finished`.
    pub turn: String,
    pub winner: Option<String>,
    pub a: Vec<BoardView>,
    pub b: Vec<BoardView>,
    /// Alive cross pairs as `[a id, b id]`.
    pub alive_pairs: Vec<[usize; 2]>,
    /// Engine Spoiler move awaiting a Duplicator reply.
    pub pending: Option<SpoilerMoveView>,
    /// The engine's last reply was not verified optimal.
    pub heuristic: bool,
    pub log: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct HintView {
    pub role: Role,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spoiler: Option<SpoilerMoveView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replies: Option<Vec<ReplyDoc>>,
    /// No winning move exists for the human's role.
    pub losing: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorView {
    pub error: String,
}

pub fn parse_create(text: &str) -> Result<CreateSession, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn parse_move(text: &str) -> Result<MoveRequest, serde_json::Error> {
    serde_json::from_str(text)
}
