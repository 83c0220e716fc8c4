//! Session service: each session holds a program, its current
//! configuration and the path that led there. Steps on one session are
//! serialised by its lock; different sessions proceed in parallel.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use parking_lot::{Mutex, RwLock};
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::cors::{Any, CorsLayer};

use rtpl_core::analysis::{independent, key_order, keys_of};
use rtpl_core::script::{select, Move, StepError};
use rtpl_core::semantics::{Direction, KeyAllocator, Semantics, Transition};
use rtpl_core::syntax::{parse_program, Config, DefinitionEnv, Process};
use rtpl_core::trace::{parse_action, Trace, TraceStep};
use rtpl_core::verify::{parabolic_normalize, Path as StepPath, PlError, Stepper};

pub const DEFAULT_PORT: u16 = 7411;

#[derive(Debug)]
pub enum ApiError {
    NotFound(String),
    Conflict(String),
    BadRequest(String),
    Internal(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (code, msg) = match self {
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, m),
            ApiError::Conflict(m) => (StatusCode::CONFLICT, m),
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, m),
            ApiError::Internal(m) => (StatusCode::INTERNAL_SERVER_ERROR, m),
        };
        (code, Json(json!({ "error": msg }))).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::BadRequest(e.body_text())
    }
}

type ApiResult<T> = Result<T, ApiError>;

struct Session {
    env: DefinitionEnv,
    /// The process as written; `start` is its folded form.
    root: Process,
    start: Config,
    current: Config,
    history: Vec<Transition>,
    alloc: KeyAllocator,
}

impl Session {
    fn new(env: DefinitionEnv, root: Process) -> Self {
        let start = Config::Std(env.fold(&root));
        Session {
            env,
            root,
            current: start.clone(),
            start,
            history: Vec::new(),
            alloc: KeyAllocator::new(),
        }
    }

    fn trace(&self) -> Trace {
        Trace::from_path(&self.env, &self.root, &self.history)
    }

    fn view(&self, id: &str) -> Value {
        let keys: Vec<Value> = keys_of(&self.current)
            .into_iter()
            .map(|k| json!({ "id": k.id, "kind": k.kind.to_string() }))
            .collect();
        json!({
            "session_id": id,
            "state": self.current.to_string(),
            "keys": keys,
            "key_order": key_order(&self.current).to_json(),
            "history": self.trace().to_json(),
        })
    }

    fn transitions(&self) -> ApiResult<(Vec<Transition>, Vec<Transition>)> {
        let sem = Semantics::new(&self.env);
        // a copy, so that listing does not use up keys
        let mut alloc = self.alloc.clone();
        let fwd = sem.forward_steps(&self.current, &mut alloc).map_err(internal)?;
        let bk = sem.backward_steps(&self.current).map_err(internal)?;
        Ok((fwd, bk))
    }
}

fn internal(e: impl ToString) -> ApiError {
    ApiError::Internal(e.to_string())
}

#[derive(Clone)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<String, Arc<Mutex<Session>>>>>,
    save_dir: Arc<PathBuf>,
}

impl AppState {
    /// Saved traces go to `save_dir`, one file per session.
    pub fn new(save_dir: impl Into<PathBuf>) -> Self {
        AppState {
            sessions: Arc::default(),
            save_dir: Arc::new(save_dir.into()),
        }
    }

    fn get(&self, id: &str) -> ApiResult<Arc<Mutex<Session>>> {
        self.sessions
            .read()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::NotFound(format!("no session {id}")))
    }
}

/// Routes with CORS opened to `ui_origin`, or to any origin if none is
/// given.
pub fn router(state: AppState, ui_origin: Option<HeaderValue>) -> Router {
    let cors = CorsLayer::new()
        .allow_methods([Method::GET, Method::POST, Method::DELETE])
        .allow_headers(Any);
    let cors = match ui_origin {
        Some(o) => cors.allow_origin(o),
        None => cors.allow_origin(Any),
    };
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show).delete(remove))
        .route("/sessions/{id}/transitions", get(transitions))
        .route("/sessions/{id}/step", post(step))
        .route("/sessions/{id}/normalize", post(normalize))
        .route("/sessions/{id}/save", post(save))
        .layer(cors)
        .with_state(state)
}

/// Either a program text or a saved trace to resume.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateReq {
    program: Option<String>,
    trace: Option<Trace>,
}

async fn create(
    State(st): State<AppState>,
    body: Result<Json<CreateReq>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let Json(req) = body?;
    let session = match (req.program, req.trace) {
        (Some(text), None) => {
            let (env, root) = parse_program(&text).map_err(|e| ApiError::BadRequest(e.to_string()))?;
            Session::new(env, root)
        }
        (None, Some(trace)) => {
            let (env, current, history) = trace.replay().map_err(|e| ApiError::BadRequest(e.to_string()))?;
            let (_, root) = parse_program(&trace.source()).map_err(|e| ApiError::BadRequest(e.to_string()))?;
            let mut s = Session::new(env, root);
            for t in &history {
                s.alloc.observe(t.label.key.id);
            }
            s.current = current;
            s.history = history;
            s
        }
        _ => return Err(ApiError::BadRequest("give exactly one of `program` and `trace`".into())),
    };
    let id = uuid::Uuid::new_v4().to_string();
    let view = session.view(&id);
    st.sessions.write().insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(view)))
}

async fn show(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let s = st.get(&id)?;
    let view = s.lock().view(&id);
    Ok(Json(view))
}

async fn remove(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult<StatusCode> {
    match st.sessions.write().remove(&id) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(ApiError::NotFound(format!("no session {id}"))),
    }
}

async fn transitions(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let s = st.get(&id)?;
    let s = s.lock();
    let (fwd, bk) = s.transitions()?;
    let all: Vec<&Transition> = fwd.iter().chain(&bk).collect();
    let independence: Vec<Vec<Option<bool>>> = all
        .iter()
        .map(|t| all.iter().map(|u| independent(t, u).ok()).collect())
        .collect();
    let steps = |ts: &[Transition]| ts.iter().map(TraceStep::from).collect::<Vec<_>>();
    Ok(Json(json!({
        "state": s.current.to_string(),
        "fwd": steps(&fwd),
        "bk": steps(&bk),
        "independence": independence,
    })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StepReq {
    dir: Direction,
    act: String,
    key: Option<u32>,
    /// Printed target, when several moves share label and key.
    target: Option<String>,
}

async fn step(
    State(st): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<StepReq>, JsonRejection>,
) -> ApiResult<Json<Value>> {
    let s = st.get(&id)?;
    let Json(req) = body?;
    let act = parse_action(&req.act).ok_or_else(|| ApiError::BadRequest(format!("unknown action `{}`", req.act)))?;
    let mv = Move {
        dir: req.dir,
        act,
        key: req.key,
        target: req.target,
    };
    let mut s = s.lock();
    let sem = Semantics::new(&s.env);
    let mut alloc = s.alloc.clone();
    let fresh = alloc.fresh_for(&s.current);
    let t = select(&sem, &s.current, &mv, fresh).map_err(|e| match e {
        StepError::Semantics(e) => internal(e),
        e => ApiError::Conflict(e.to_string()),
    })?;
    if t.is_forward() {
        s.alloc.observe(t.label.key.id);
    }
    s.current = t.target.clone();
    s.history.push(t);
    Ok(Json(s.view(&id)))
}

async fn normalize(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let s = st.get(&id)?;
    let s = s.lock();
    let sem = Semantics::new(&s.env);
    let path = StepPath {
        source: s.start.clone(),
        steps: s.history.clone(),
    };
    let q = parabolic_normalize(&Stepper::new(&sem), &path).map_err(|e| match e {
        PlError::Semantics(e) => internal(e),
        e => internal(format!("history has no parabolic form: {e}")),
    })?;
    Ok(Json(json!({
        "original_length": path.len(),
        "length": q.len(),
        "steps": q.steps.iter().map(TraceStep::from).collect::<Vec<_>>(),
        "target": q.target().to_string(),
    })))
}

async fn save(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let s = st.get(&id)?;
    let trace = s.lock().trace();
    std::fs::create_dir_all(&*st.save_dir).map_err(internal)?;
    let file = st.save_dir.join(format!("{id}.json"));
    let text = serde_json::to_string_pretty(&trace).map_err(internal)?;
    std::fs::write(&file, text + "\n").map_err(internal)?;
    Ok(Json(json!({ "path": file.display().to_string() })))
}
