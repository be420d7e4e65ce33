//! HTTP session service.
//!
//! `POST /sessions`, `GET /sessions/{id}`, and `POST` to
//! `/sessions/{id}/move`, `/hint` and `/undo`. Bodies are JSON; errors
//! come back as `{"error": "..."}` with 400 for malformed or illegal
//! moves, 404 for unknown sessions, 409 for moves out of turn and 422
//! when a hint runs out of budget.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use msgames_core::Budget;
use tokio::sync::{Mutex, RwLock};

use crate::api::{parse_create, parse_move, ErrorView};
use crate::session::{Session, SessionError, DEFAULT_CAP};

/// Default per-request node cap, overridable with `MSGAMES_BUDGET_NODES`.
const DEFAULT_NODES: u64 = 20_000_000;
/// Default per-request time cap, overridable with `MSGAMES_BUDGET_MS`.
const DEFAULT_TIME: Duration = Duration::from_secs(10);

#[derive(Debug, Clone)]
pub struct Config {
    /// Board limit for engine Duplicator replies.
    pub cap: usize,
    /// One trace file per session, restored on start.
    pub dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config { cap: DEFAULT_CAP, dir: None }
    }
}

pub struct AppState {
    config: Config,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
}

fn budget() -> Budget {
    Budget::from_env(DEFAULT_NODES, Some(DEFAULT_TIME))
}

struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(ErrorView { error: self.1 })).into_response()
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        match e {
            SessionError::BadRequest(m) => ApiError(StatusCode::BAD_REQUEST, m),
            SessionError::OutOfTurn(m) => ApiError(StatusCode::CONFLICT, m),
            SessionError::Budget(m) => ApiError(StatusCode::UNPROCESSABLE_ENTITY, m),
        }
    }
}

type ApiResult = Result<Response, ApiError>;

/// Loads persisted sessions, if a directory is configured.
pub fn load(config: Config) -> std::io::Result<Arc<AppState>> {
    let mut sessions = HashMap::new();
    if let Some(dir) = &config.dir {
        std::fs::create_dir_all(dir)?;
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "trace") {
                let text = std::fs::read_to_string(&path)?;
                match Session::restore(&text, config.cap, &budget()) {
                    Ok(s) => {
                        sessions.insert(s.id.clone(), Arc::new(Mutex::new(s)));
                    }
                    Err(e) => eprintln!("skipping {}: {e:?}", path.display()),
                }
            }
        }
    }
    Ok(Arc::new(AppState { config, sessions: RwLock::new(sessions) }))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/move", post(play))
        .route("/sessions/{id}/hint", post(hint))
        .route("/sessions/{id}/undo", post(undo))
        .with_state(state)
}

pub async fn serve(port: u16, config: Config) -> std::io::Result<()> {
    let app = router(load(config)?);
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    axum::serve(listener, app).await
}

fn persist(state: &AppState, s: &Session) -> Result<(), ApiError> {
    if let Some(dir) = &state.config.dir {
        std::fs::write(dir.join(format!("{}.trace", s.id)), s.to_trace_text())
            .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    }
    Ok(())
}

async fn lookup(state: &AppState, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
    state
        .sessions
        .read()
        .await
        .get(id)
        .cloned()
        .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("no session `{id}`")))
}

fn bad_json(e: serde_json::Error) -> ApiError {
    ApiError(StatusCode::BAD_REQUEST, format!("invalid JSON body: {e}"))
}

async fn create(State(state): State<Arc<AppState>>, body: String) -> ApiResult {
    let req = parse_create(&body).map_err(bad_json)?;
    let id = uuid::Uuid::new_v4().simple().to_string();
    let s = Session::create(id.clone(), &req, state.config.cap, &budget())?;
    persist(&state, &s)?;
    let view = s.view();
    state.sessions.write().await.insert(id, Arc::new(Mutex::new(s)));
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn show(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let s = lookup(&state, &id).await?;
    let view = s.lock().await.view();
    Ok(Json(view).into_response())
}

async fn play(State(state): State<Arc<AppState>>, Path(id): Path<String>, body: String) -> ApiResult {
    let s = lookup(&state, &id).await?;
    let req = parse_move(&body).map_err(bad_json)?;
    let mut s = s.lock().await;
    s.apply(&req, &budget())?;
    persist(&state, &s)?;
    Ok(Json(s.view()).into_response())
}

async fn hint(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let s = lookup(&state, &id).await?;
    let h = s.lock().await.hint(&budget())?;
    Ok(Json(h).into_response())
}

async fn undo(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let s = lookup(&state, &id).await?;
    let mut s = s.lock().await;
    s.undo(&budget())?;
    persist(&state, &s)?;
    Ok(Json(s.view()).into_response())
}
