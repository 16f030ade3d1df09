//! JSON over HTTP front end for a live engine.
//!
//! Every response body carries `"v": 1`. Malformed requests get 400, input
//! that cannot be segmented, converted or learned gets 422.

use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use omwa_core::pinyin::join_syllables;
use omwa_core::{topk_score, Candidate, Engine, Syllable};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::{Mutex, RwLock};

pub const API_VERSION: u32 = 1;
const MAX_TOP: usize = 1000;

#[derive(Debug, Default, Clone, Copy, PartialEq)]
pub struct Session {
    pub commits: u64,
    top1_sum: f64,
}

impl Session {
    /// Mean top-1 score of committed text against the conversion shown
    /// just before each commit.
    pub fn top1(&self) -> f64 {
        if self.commits == 0 {
            0.0
        } else {
            self.top1_sum / self.commits as f64
        }
    }
}

pub struct AppState {
    engine: RwLock<Engine>,
    session: Mutex<Session>,
    snapshot: Option<PathBuf>,
}

impl AppState {
    pub fn new(engine: Engine, snapshot: Option<PathBuf>) -> Arc<Self> {
        Arc::new(AppState {
            engine: RwLock::new(engine),
            session: Mutex::new(Session::default()),
            snapshot,
        })
    }

    /// Saves to the snapshot directory, if there is one.
    pub async fn save(&self) -> anyhow::Result<()> {
        if let Some(dir) = &self.snapshot {
            self.engine.read().await.save(dir)?;
        }
        Ok(())
    }
}

pub struct ApiError(StatusCode, String);

impl ApiError {
    fn bad_request(msg: impl ToString) -> Self {
        ApiError(StatusCode::BAD_REQUEST, msg.to_string())
    }

    fn unprocessable(msg: impl ToString) -> Self {
        ApiError(StatusCode::UNPROCESSABLE_ENTITY, msg.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::bad_request(e.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        ApiError::bad_request(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "v": API_VERSION, "error": self.1 }))).into_response()
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/convert", post(convert))
        .route("/commit", post(commit))
        .route("/stats", get(stats))
        .route("/reset", post(reset))
        .with_state(state)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConvertRequest {
    pinyin: String,
    k: Option<usize>,
}

#[derive(Serialize)]
struct ConvertResponse<'a> {
    v: u32,
    syllables: Vec<&'a str>,
    candidates: &'a [Candidate],
}

async fn convert(State(state): State<Arc<AppState>>, body: Result<Json<ConvertRequest>, JsonRejection>) -> ApiResult {
    let Json(req) = body?;
    if req.k == Some(0) {
        return Err(ApiError::bad_request("k must be positive"));
    }
    let engine = state.engine.read().await;
    let (syllables, mut result) = engine.convert(&req.pinyin).map_err(ApiError::unprocessable)?;
    if let Some(k) = req.k {
        result.candidates.truncate(k);
    }
    let body = ConvertResponse {
        v: API_VERSION,
        syllables: syllables.iter().map(Syllable::as_str).collect(),
        candidates: &result.candidates,
    };
    Ok(Json(serde_json::to_value(body).expect("response serializes")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CommitRequest {
    pinyin: String,
    text: String,
}

/// Learns `text` as the reading of the first syllables of `pinyin`; any
/// syllables beyond the text are returned as `rest`.
async fn commit(State(state): State<Arc<AppState>>, body: Result<Json<CommitRequest>, JsonRejection>) -> ApiResult {
    let Json(req) = body?;
    let chars = req.text.chars().count();
    if chars == 0 {
        return Err(ApiError::bad_request("text is empty"));
    }
    let mut engine = state.engine.write().await;
    let syllables = engine.segment(&req.pinyin).map_err(ApiError::unprocessable)?;
    if chars > syllables.len() {
        return Err(ApiError::unprocessable(format!(
            "{chars} characters but only {} syllables",
            syllables.len()
        )));
    }
    let (used, rest) = syllables.split_at(chars);
    let shown = engine.convert_syllables(used).map_err(ApiError::unprocessable)?;
    engine.commit(&req.text, used).map_err(ApiError::unprocessable)?;
    let n = engine.updates();
    let mut session = state.session.lock().await;
    session.commits += 1;
    session.top1_sum += topk_score(&shown.texts(), &req.text, 1);
    let per = engine.config().per;
    if let Some(dir) = state.snapshot.as_ref().filter(|_| n % per == 0) {
        if let Err(e) = engine.save(dir) {
            eprintln!("autosave to {} failed: {e}", dir.display());
        }
    }
    Ok(Json(json!({
        "v": API_VERSION,
        "ok": true,
        "n": n,
        "consumed": chars,
        "rest": join_syllables(rest),
    })))
}

#[derive(Deserialize)]
struct StatsQuery {
    top: Option<usize>,
}

async fn stats(State(state): State<Arc<AppState>>, query: Result<Query<StatsQuery>, QueryRejection>) -> ApiResult {
    let Query(q) = query?;
    let top = q.top.unwrap_or(10).min(MAX_TOP);
    let engine = state.engine.read().await;
    let session = *state.session.lock().await;
    let words: Vec<Value> = engine
        .top_words(top)
        .into_iter()
        .map(|(word, iwl)| json!({ "word": word, "iwl": iwl }))
        .collect();
    Ok(Json(json!({
        "v": API_VERSION,
        "n": engine.updates(),
        "vocab_size": engine.vocab().len(),
        "session": { "commits": session.commits, "top1": session.top1() },
        "top": words,
    })))
}

async fn reset(State(state): State<Arc<AppState>>) -> ApiResult {
    state.engine.write().await.reset();
    *state.session.lock().await = Session::default();
    Ok(Json(json!({ "v": API_VERSION, "ok": true })))
}
