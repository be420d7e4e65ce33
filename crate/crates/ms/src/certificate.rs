use std::collections::{BTreeMap, HashMap};

use msgames_core::linear::lift;
use msgames_core::{canonical_key, Board, Budget, CanonicalKey, Selection, Side};
use serde::{Deserialize, Serialize};

use crate::doc::{describe, StateDoc};
use crate::solver::{normalise, normalise_one, MsSolver};
use crate::state::{alive_pairs_idx, duplicator_expand, prune_dead, GameState};
use crate::MsError;

/// Spoiler's play in one round: the side, and the selection for every
/// alive board on it, keyed by the board's canonical key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertRound {
    pub side: Side,
    pub choices: BTreeMap<CanonicalKey, Selection>,
}

/// A Spoiler strategy against the oblivious Duplicator.
///
/// The oblivious Duplicator has one reply to every move, so the strategy is
/// a chain with one entry per round. Rounds after every pair has died carry
/// no choices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpoilerCertificate {
    pub rounds: Vec<CertRound>,
}

impl SpoilerCertificate {
    pub fn sides(&self) -> Vec<Side> {
        self.rounds.iter().map(|r| r.side).collect()
    }

    /// JSON form, with the state it applies to and readable board labels.
    pub fn to_json(&self, state: &GameState) -> String {
        let mut labels: HashMap<CanonicalKey, String> = HashMap::new();
        for_each_board(state, self, |b| {
            labels.entry(canonical_key(b)).or_insert_with(|| describe(b));
        });
        let doc = CertificateDoc {
            state: StateDoc::from_state(state),
            rounds: self
                .rounds
                .iter()
                .map(|r| RoundDoc {
                    side: r.side.to_string(),
                    choices: r
                        .choices
                        .iter()
                        .map(|(k, s)| ChoiceDoc {
                            key: k.to_hex(),
                            board: labels.get(k).cloned().unwrap_or_default(),
                            selection: s.to_string(),
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serialisable")
    }

    pub fn from_json(text: &str) -> Result<(GameState, SpoilerCertificate), MsError> {
        let doc: CertificateDoc =
            serde_json::from_str(text).map_err(|e| MsError::Certificate(format!("bad certificate JSON: {e}")))?;
        let state = doc.state.to_state()?;
        let mut rounds = Vec::with_capacity(doc.rounds.len());
        for r in doc.rounds {
            let side: Side = r.side.parse()?;
            let mut choices = BTreeMap::new();
            for c in r.choices {
                let key = CanonicalKey::from_hex(&c.key)
                    .ok_or_else(|| MsError::Certificate(format!("bad board key `{}`", c.key)))?;
                choices.insert(key, c.selection.parse::<Selection>()?);
            }
            rounds.push(CertRound { side, choices });
        }
        Ok((state, SpoilerCertificate { rounds }))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CertificateDoc {
    state: StateDoc,
    rounds: Vec<RoundDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RoundDoc {
    side: String,
    choices: Vec<ChoiceDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ChoiceDoc {
    key: String,
    /// Informational only.
    #[serde(default)]
    board: String,
    selection: String,
}

/// Visits every board that appears on a side Spoiler moves on, replaying
/// the certificate as far as it is well formed.
fn for_each_board(state: &GameState, cert: &SpoilerCertificate, mut f: impl FnMut(&Board)) {
    let v = state.variant();
    let (mut a, mut b) = (state.side_a().to_vec(), state.side_b().to_vec());
    for r in &cert.rounds {
        let (pa, pb) = prune_dead(&a, &b);
        let (mover, other) = match r.side {
            Side::A => (pa, pb),
            Side::B => (pb, pa),
        };
        let mut moved = Vec::new();
        for x in &mover {
            f(x);
            if let Some(s) = r.choices.get(&canonical_key(x)) {
                moved.push(x.extend_unchecked(*s));
            }
        }
        let expanded = duplicator_expand(&other, v);
        (a, b) = match r.side {
            Side::A => (moved, expanded),
            Side::B => (expanded, moved),
        };
    }
}

/// Builds the certificate for a state the solver has found Spoiler-winning.
pub(crate) fn extract(solver: &MsSolver, state: &GameState, budget: &Budget) -> Result<SpoilerCertificate, MsError> {
    let v = state.variant();
    let cons = state.constraints();
    let (mut a, mut b) = (state.side_a().to_vec(), state.side_b().to_vec());
    let mut rounds = Vec::with_capacity(cons.len());
    for r in 0..cons.len() {
        let rest = &cons[r..];
        let k = rest.len();
        let (pa, pb) = prune_dead(&a, &b);
        if pa.is_empty() || pb.is_empty() {
            rounds.push(CertRound { side: cons[r].unwrap_or(Side::A), choices: BTreeMap::new() });
            (a, b) = (pa, pb);
            continue;
        }
        let na = normalise(&pa, k, v);
        let nb = normalise(&pb, k, v);
        let choice = solver
            .choose(&na, &nb, rest, v, budget)?
            .expect("certificate requested for a position Spoiler does not win");
        let (mover, other, nmover) = match choice.side {
            Side::A => (pa, pb, na),
            Side::B => (pb, pa, nb),
        };
        let by_key: HashMap<CanonicalKey, Selection> =
            nmover.iter().map(canonical_key).zip(choice.picks.iter().copied()).collect();
        let mut choices = BTreeMap::new();
        let mut moved = Vec::with_capacity(mover.len());
        for x in &mover {
            let (nx, emb) = normalise_one(x, k, v);
            let s = by_key[&canonical_key(&nx)];
            let s = match &emb {
                Some(e) => lift(s, e),
                None => s,
            };
            choices.insert(canonical_key(x), s);
            moved.push(x.extend_unchecked(s));
        }
        let expanded = duplicator_expand(&other, v);
        (a, b) = match choice.side {
            Side::A => (moved, expanded),
            Side::B => (expanded, moved),
        };
        rounds.push(CertRound { side: choice.side, choices });
    }
    Ok(SpoilerCertificate { rounds })
}

/// Plays `cert` against the oblivious Duplicator and reports whether every
/// cross pair is dead at the end. Uses no solver code.
pub fn replay_certificate(state: &GameState, cert: &SpoilerCertificate) -> Result<bool, MsError> {
    if cert.rounds.len() != state.rounds_left() {
        return Err(MsError::Certificate(format!(
            "certificate has {} rounds, game has {}",
            cert.rounds.len(),
            state.rounds_left()
        )));
    }
    let v = state.variant();
    let (mut a, mut b) = (state.side_a().to_vec(), state.side_b().to_vec());
    for (i, r) in cert.rounds.iter().enumerate() {
        if let Some(c) = state.constraints()[i] {
            if c != r.side {
                return Err(MsError::Certificate(format!("round {} must be played on side {c}", i + 1)));
            }
        }
        (a, b) = prune_dead(&a, &b);
        if a.is_empty() || b.is_empty() {
            continue;
        }
        let (mover, other) = match r.side {
            Side::A => (&a, &b),
            Side::B => (&b, &a),
        };
        let mut moved = Vec::with_capacity(mover.len());
        for x in mover {
            let s = *r.choices.get(&canonical_key(x)).ok_or_else(|| {
                MsError::Certificate(format!("round {}: no selection for board {}", i + 1, describe(x)))
            })?;
            if v.no_play_on_top && x.is_selected(s) {
                return Err(MsError::Certificate(format!(
                    "round {}: {s} on {} plays on top",
                    i + 1,
                    describe(x)
                )));
            }
            moved.push(x.extend(s, v.atoms)?);
        }
        let expanded = duplicator_expand(other, v);
        (a, b) = match r.side {
            Side::A => (moved, expanded),
            Side::B => (expanded, moved),
        };
    }
    Ok(alive_pairs_idx(&a, &b).is_empty())
}
