//! HTTP facade over propagation sessions.
//!
//! | method | path | body | response |
//! |---|---|---|---|
//! | POST | `/models` | DIMACS text | `{model_id, stats}` |
//! | GET | `/models/{id}/classification` | | `{core, dead, free}` |
//! | POST | `/sessions` | `{"model_id": ...}` | session state |
//! | GET | `/sessions/{id}` | | session state |
//! | POST | `/sessions/{id}/decisions` | `{"literal": -3}` | session state, or 409 |
//! | DELETE | `/sessions/{id}/decisions/{var}` | | session state |
//!
//! Errors carry `{error, message}`: 404 for unknown models, sessions and
//! decisions, 409 for conflicting or repeated decisions, 422 for malformed
//! bodies, out-of-range variables and unsatisfiable uploads. All logic
//! lives in the propagation session; handlers only translate.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use backbone_core::cnf::{formula_stats, parse_dimacs_str, FormulaStats};
use backbone_core::propagate::{classify_variables, ConfigSession, PropagateError, PropagationResult};
use backbone_core::solver::new_session;
use backbone_core::{CnfFormula, Lit, LiteralSet, Var};
use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct StatsBody {
    pub num_vars: usize,
    pub num_clauses: usize,
    pub clause_var_ratio: Option<f64>,
    pub median_literals_per_clause: f64,
    pub pct_clauses_gt2: f64,
    pub num_binary_or_unit: usize,
}

impl From<&FormulaStats> for StatsBody {
    fn from(s: &FormulaStats) -> Self {
        StatsBody {
            num_vars: s.num_vars,
            num_clauses: s.num_clauses,
            clause_var_ratio: s.clause_var_ratio,
            median_literals_per_clause: s.median_literals_per_clause,
            pct_clauses_gt2: s.pct_clauses_gt2,
            num_binary_or_unit: s.num_binary_or_unit,
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ModelCreated {
    pub model_id: String,
    pub stats: StatsBody,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ClassificationBody {
    pub core: Vec<u32>,
    pub dead: Vec<u32>,
    pub free: Vec<u32>,
}

/// Wire form of a session. `decided` holds signed literals so selections
/// and exclusions stay distinguishable; the other lists hold variables.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SessionState {
    pub session_id: String,
    pub model_id: String,
    pub decided: Vec<i32>,
    pub implied_true: Vec<u32>,
    pub implied_false: Vec<u32>,
    pub free: Vec<u32>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
    /// Unchanged session state, for conflicts.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub state: Option<Box<SessionState>>,
}

#[derive(Deserialize)]
struct CreateSession {
    model_id: String,
}

#[derive(Deserialize)]
struct Decision {
    literal: i32,
}

struct Model {
    formula: Arc<CnfFormula>,
}

struct SessionEntry {
    model_id: String,
    session: Arc<Mutex<ConfigSession>>,
    last_used: Instant,
}

/// Shared service state: uploaded models and live sessions.
pub struct AppState {
    models: Mutex<HashMap<String, Arc<Model>>>,
    sessions: Mutex<HashMap<String, SessionEntry>>,
    next_id: AtomicU64,
    session_ttl: Duration,
}

impl AppState {
    pub fn new(session_ttl: Duration) -> Arc<Self> {
        Arc::new(AppState {
            models: Mutex::new(HashMap::new()),
            sessions: Mutex::new(HashMap::new()),
            next_id: AtomicU64::new(1),
            session_ttl,
        })
    }

    fn fresh_id(&self, prefix: &str) -> String {
        format!("{prefix}{}", self.next_id.fetch_add(1, Ordering::Relaxed))
    }

    /// Drops sessions idle for longer than the TTL; returns how many.
    pub fn evict_idle(&self) -> usize {
        let now = Instant::now();
        let mut sessions = self.sessions.lock();
        let before = sessions.len();
        sessions.retain(|_, s| now.duration_since(s.last_used) <= self.session_ttl);
        before - sessions.len()
    }

    pub fn num_sessions(&self) -> usize {
        self.sessions.lock().len()
    }

    fn session(&self, id: &str) -> Result<(String, Arc<Mutex<ConfigSession>>), ApiError> {
        self.evict_idle();
        let mut sessions = self.sessions.lock();
        let entry = sessions
            .get_mut(id)
            .ok_or_else(|| ApiError::not_found("unknown_session", format!("no session `{id}`")))?;
        entry.last_used = Instant::now();
        Ok((entry.model_id.clone(), entry.session.clone()))
    }

    fn model(&self, id: &str) -> Result<Arc<Model>, ApiError> {
        self.models
            .lock()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found("unknown_model", format!("no model `{id}`")))
    }
}

#[derive(Debug)]
struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, error: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                error: error.into(),
                message: message.into(),
                state: None,
            },
        }
    }

    fn not_found(error: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, error, message)
    }

    fn unprocessable(error: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, error, message)
    }

    fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

fn var_indices(vars: &[Var]) -> Vec<u32> {
    vars.iter().map(|v| v.index()).collect()
}

fn wire_state(session_id: &str, model_id: &str, r: &PropagationResult) -> SessionState {
    SessionState {
        session_id: session_id.into(),
        model_id: model_id.into(),
        decided: LiteralSet::to_dimacs_values(&r.decided),
        implied_true: var_indices(&r.implied_true),
        implied_false: var_indices(&r.implied_false),
        free: var_indices(&r.free),
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::unprocessable("malformed_body", e.to_string()))
}

/// Runs CPU-bound propagation off the async workers.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::internal(e.to_string()))
}

async fn create_model(State(app): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let text =
        std::str::from_utf8(&body).map_err(|_| ApiError::unprocessable("malformed_body", "body is not UTF-8"))?;
    let formula = parse_dimacs_str(text)
        .map_err(|e| ApiError::unprocessable("invalid_dimacs", e.to_string()))?
        .formula;
    let (formula, satisfiable) = blocking(move || {
        let sat = new_session(&formula).solve(&LiteralSet::new()).is_sat();
        (formula, sat)
    })
    .await?;
    if !satisfiable {
        return Err(ApiError::unprocessable("unsatisfiable_model", "formula has no model"));
    }
    let stats = StatsBody::from(&formula_stats(&formula));
    let model_id = app.fresh_id("m");
    app.models.lock().insert(
        model_id.clone(),
        Arc::new(Model {
            formula: Arc::new(formula),
        }),
    );
    Ok((StatusCode::CREATED, Json(ModelCreated { model_id, stats })).into_response())
}

async fn classification(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<ClassificationBody>, ApiError> {
    let model = app.model(&id)?;
    let c = blocking(move || classify_variables(&model.formula))
        .await?
        .map_err(|e| ApiError::internal(e.to_string()))?;
    Ok(Json(ClassificationBody {
        core: var_indices(&c.core),
        dead: var_indices(&c.dead),
        free: var_indices(&c.free),
    }))
}

async fn create_session(State(app): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: CreateSession = parse_json(&body)?;
    let model = app.model(&req.model_id)?;
    let session = blocking(move || ConfigSession::new(model.formula.clone()))
        .await?
        .map_err(|e| ApiError::internal(e.to_string()))?;
    let session_id = app.fresh_id("s");
    let state = wire_state(&session_id, &req.model_id, session.state());
    app.evict_idle();
    app.sessions.lock().insert(
        session_id,
        SessionEntry {
            model_id: req.model_id,
            session: Arc::new(Mutex::new(session)),
            last_used: Instant::now(),
        },
    );
    Ok((StatusCode::CREATED, Json(state)).into_response())
}

async fn get_session(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<SessionState>, ApiError> {
    let (model_id, session) = app.session(&id)?;
    let state = wire_state(&id, &model_id, session.lock().state());
    Ok(Json(state))
}

async fn add_decision(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<SessionState>, ApiError> {
    let req: Decision = parse_json(&body)?;
    let lit =
        Lit::new(req.literal).ok_or_else(|| ApiError::unprocessable("invalid_literal", "literal must be non-zero"))?;
    let (model_id, session) = app.session(&id)?;
    let sid = id.clone();
    blocking(move || {
        let mut s = session.lock();
        if lit.var().index() as usize > s.formula().num_vars() {
            return Err(ApiError::unprocessable(
                "unknown_variable",
                format!("variable {} is not in the model", lit.var()),
            ));
        }
        match s.assert_decision(lit) {
            Ok(r) => Ok(Json(wire_state(&sid, &model_id, r))),
            Err(e) => {
                let error = match e {
                    PropagateError::ConflictingDecisions => "conflicting_decisions",
                    PropagateError::AlreadyDecided(_) => "already_decided",
                    _ => return Err(ApiError::internal(e.to_string())),
                };
                let mut err = ApiError::new(StatusCode::CONFLICT, error, e.to_string());
                err.body.state = Some(Box::new(wire_state(&sid, &model_id, s.state())));
                Err(err)
            }
        }
    })
    .await?
}

async fn remove_decision(
    State(app): State<Arc<AppState>>,
    Path((id, var)): Path<(String, String)>,
) -> Result<Json<SessionState>, ApiError> {
    let var = var
        .parse::<u32>()
        .ok()
        .and_then(Var::new)
        .ok_or_else(|| ApiError::unprocessable("invalid_variable", format!("`{var}` is not a variable index")))?;
    let (model_id, session) = app.session(&id)?;
    let sid = id.clone();
    blocking(move || {
        let mut s = session.lock();
        if var.index() as usize > s.formula().num_vars() {
            return Err(ApiError::unprocessable(
                "unknown_variable",
                format!("variable {var} is not in the model"),
            ));
        }
        match s.retract_decision(var) {
            Ok(r) => Ok(Json(wire_state(&sid, &model_id, r))),
            Err(PropagateError::NotADecision(v)) => Err(ApiError::not_found(
                "not_a_decision",
                format!("variable {v} is not a decision"),
            )),
            Err(e) => Err(ApiError::internal(e.to_string())),
        }
    })
    .await?
}

pub fn router(app: Arc<AppState>) -> Router {
    Router::new()
        .route("/models", post(create_model))
        .route("/models/{id}/classification", get(classification))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/decisions", post(add_decision))
        .route("/sessions/{id}/decisions/{var}", delete(remove_decision))
        .with_state(app)
}

/// Binds `host:port` and serves until the process ends.
pub fn serve(host: &str, port: u16, session_ttl: Duration) -> std::io::Result<()> {
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    runtime.block_on(async move {
        let app = AppState::new(session_ttl);
        let sweeper = app.clone();
        tokio::spawn(async move {
            let mut tick = tokio::time::interval(session_ttl.max(Duration::from_secs(1)));
            loop {
                tick.tick().await;
                sweeper.evict_idle();
            }
        });
        let listener = tokio::net::TcpListener::bind((host, port)).await?;
        eprintln!("listening on {}", listener.local_addr()?);
        axum::serve(listener, router(app)).await
    })
}
