//! In-memory session API over HTTP.
//!
//! Each session holds a window, a current slice and the mutations applied
//! to it. Mutations take the session's write lock, so readers never observe
//! a half-applied change and writers on one session are serialized.

use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock, RwLock};

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use qslice::io::QuiverDocument;
use qslice::zquiver::{
    build_window, double_slice, hammock, is_complete_slice, mutate_slice, Direction, MutationDir, Side, WindowKind,
    ZBase, ZVertex, ZWindow,
};
use qslice::{BoundQuiver, Bounds, Error};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::commands::named_fixture;
use crate::views::{labels, side_name, ClassificationView, DoubleSliceView, HammockView, WindowView};

/// Widest window a client may request.
pub const MAX_WINDOW_LEVELS: i64 = 400;
const DEFAULT_RANGE: (i64, i64) = (-6, 10);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mutation {
    #[serde(skip)]
    pub vertex: ZVertex,
    pub dir: MutationDir,
    pub side: Side,
}

pub struct Session {
    pub id: String,
    pub gamma: BoundQuiver,
    pub window: ZWindow,
    pub side: Side,
    pub initial: BTreeSet<ZVertex>,
    pub slice: BTreeSet<ZVertex>,
    pub history: Vec<Mutation>,
    classification: OnceLock<Result<Value, Error>>,
}

impl Session {
    /// Re-applies the history to the initial slice.
    fn replay(&self, history: &[Mutation]) -> qslice::Result<BTreeSet<ZVertex>> {
        let mut s = self.initial.clone();
        for m in history {
            s = mutate_slice(&self.window, &s, m.vertex, m.dir, m.side)?;
        }
        Ok(s)
    }

    fn state(&self) -> Value {
        let w = &self.window;
        let verdict = is_complete_slice(w, &self.slice, self.side).ok();
        let list = |vs: Vec<ZVertex>| vs.into_iter().map(|v| w.label(v)).collect::<Vec<_>>();
        let history: Vec<Value> = self
            .history
            .iter()
            .map(|m| json!({ "vertex": w.label(m.vertex), "dir": m.dir, "side": side_name(m.side) }))
            .collect();
        json!({
            "id": self.id,
            "kind": format!("{:?}", w.kind()),
            "range": [w.range().0, w.range().1],
            "side": side_name(self.side),
            "slice": labels(w, &self.slice),
            "complete": verdict.as_ref().map(|v| v.complete),
            "sources": list(w.sources_of(&self.slice)),
            "sinks": list(w.sinks_of(&self.slice)),
            "history": history,
        })
    }
}

/// All live sessions.
#[derive(Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<RwLock<Session>>>>,
    next: AtomicU64,
    pub bounds: Bounds,
}

impl SessionStore {
    pub fn new(bounds: Bounds) -> Self {
        SessionStore {
            bounds,
            ..SessionStore::default()
        }
    }

    fn get(&self, id: &str) -> Result<Arc<RwLock<Session>>, ApiError> {
        self.sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(format!("no session `{id}`")))
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn not_found(message: String) -> Self {
        ApiError {
            status: StatusCode::NOT_FOUND,
            body: json!({ "error": "not-found", "message": message }),
        }
    }

    fn bad_request(message: String) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            body: json!({ "error": "bad-request", "message": message }),
        }
    }

    fn conflict(message: String, witness: Option<String>) -> Self {
        ApiError {
            status: StatusCode::CONFLICT,
            body: json!({ "error": "conflict", "message": message, "witness": witness }),
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::UnknownVertex(_) => ApiError::not_found(message),
            Error::Margin {
                lo,
                hi,
                need_lo,
                need_hi,
            } => ApiError {
                status: StatusCode::UNPROCESSABLE_ENTITY,
                body: json!({
                    "error": "margin",
                    "message": message,
                    "window": [lo, hi],
                    "required": [need_lo, need_hi],
                }),
            },
            Error::NotSourceOrSink { witness, .. } => ApiError::conflict(message, Some(witness)),
            Error::IncompleteSlice(ref w) => {
                let w = w.clone();
                ApiError::conflict(message, Some(w))
            }
            Error::Parse(_) | Error::Schema { .. } | Error::EmptyRange(..) => ApiError::bad_request(message),
            e if e.is_refutation() => ApiError::conflict(message, None),
            _ => ApiError {
                status: StatusCode::INTERNAL_SERVER_ERROR,
                body: json!({ "error": "internal", "message": message }),
            },
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult = Result<Json<Value>, ApiError>;
type Store = State<Arc<SessionStore>>;

#[derive(Debug, Deserialize)]
pub struct CreateSession {
    pub document: Option<Value>,
    pub fixture: Option<String>,
    #[serde(default)]
    pub kind: Option<String>,
    pub range: Option<[i64; 2]>,
    /// Initial slice; defaults to `Q` placed by the nice grading of `Λ`.
    pub slice: Option<String>,
    pub side: Option<String>,
}

fn parse_err(e: Error) -> ApiError {
    ApiError::from(e)
}

async fn create(State(store): Store, Json(req): Json<CreateSession>) -> Result<(StatusCode, Json<Value>), ApiError> {
    let gamma = match (&req.document, &req.fixture) {
        (Some(doc), _) => QuiverDocument::from_value(doc)
            .and_then(|d| d.to_quiver())
            .map_err(parse_err)?,
        (None, Some(name)) => {
            named_fixture(name).ok_or_else(|| ApiError::not_found(format!("no fixture `{name}`")))?
        }
        (None, None) => return Err(ApiError::bad_request("give a `document` or a `fixture`".into())),
    };
    let kind = WindowKind::parse(req.kind.as_deref().unwrap_or("zv"))?;
    let side = Side::parse(req.side.as_deref().unwrap_or("tau"))?;
    let [lo, hi] = req.range.unwrap_or([DEFAULT_RANGE.0, DEFAULT_RANGE.1]);
    if hi - lo >= MAX_WINDOW_LEVELS {
        return Err(ApiError::bad_request(format!("at most {MAX_WINDOW_LEVELS} levels")));
    }
    let base = Arc::new(ZBase::from_gamma(&gamma, &store.bounds)?);
    let window = build_window(base, kind, lo, hi)?;
    let initial = match &req.slice {
        Some(text) => window.parse_vertices(text)?,
        None => {
            let grading = window.base().lambda().check_nicely_graded()?;
            grading.iter().enumerate().map(|(i, &d)| ZVertex::new(i, d)).collect()
        }
    };
    window.require(&initial)?;
    let verdict = is_complete_slice(&window, &initial, side)?;
    if !verdict.complete {
        return Err(Error::IncompleteSlice(verdict.witness.unwrap_or_default()).into());
    }
    let id = format!("s{}", store.next.fetch_add(1, Ordering::Relaxed) + 1);
    let session = Session {
        id: id.clone(),
        gamma,
        window,
        side,
        slice: initial.clone(),
        initial,
        history: Vec::new(),
        classification: OnceLock::new(),
    };
    let state = session.state();
    store
        .sessions
        .write()
        .unwrap()
        .insert(id, Arc::new(RwLock::new(session)));
    Ok((StatusCode::CREATED, Json(state)))
}

async fn state(State(store): Store, Path(id): Path<String>) -> ApiResult {
    let s = store.get(&id)?;
    let s = s.read().unwrap();
    Ok(Json(s.state()))
}

#[derive(Debug, Deserialize)]
pub struct WindowQuery {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

async fn window(State(store): Store, Path(id): Path<String>, Query(q): Query<WindowQuery>) -> ApiResult {
    let s = store.get(&id)?;
    let s = s.read().unwrap();
    let (lo0, hi0) = s.window.range();
    let (lo, hi) = (q.lo.unwrap_or(lo0), q.hi.unwrap_or(hi0));
    if hi - lo >= MAX_WINDOW_LEVELS {
        return Err(ApiError::bad_request(format!("at most {MAX_WINDOW_LEVELS} levels")));
    }
    let view = if (lo, hi) == (lo0, hi0) {
        WindowView::new(&s.window)
    } else {
        WindowView::new(&build_window(s.window.base().clone(), s.window.kind(), lo, hi)?)
    };
    Ok(Json(serde_json::to_value(view).expect("views serialize")))
}

#[derive(Debug, Deserialize)]
pub struct MutateRequest {
    pub vertex: String,
    pub dir: String,
    pub side: Option<String>,
}

async fn mutate(State(store): Store, Path(id): Path<String>, Json(req): Json<MutateRequest>) -> ApiResult {
    let s = store.get(&id)?;
    let mut s = s.write().unwrap();
    let vertex = s.window.parse_vertex(&req.vertex)?;
    if !s.window.contains(vertex) {
        return Err(ApiError::not_found(format!("{} is outside the window", req.vertex)));
    }
    let dir = MutationDir::parse(&req.dir)?;
    let side = match &req.side {
        Some(text) => Side::parse(text)?,
        None => s.side,
    };
    if side != s.side {
        return Err(ApiError::conflict(
            format!("the session slice is a {}-slice", side_name(s.side)),
            None,
        ));
    }
    let next = mutate_slice(&s.window, &s.slice, vertex, dir, side)?;
    s.history.push(Mutation { vertex, dir, side });
    s.slice = next;
    Ok(Json(s.state()))
}

async fn undo(State(store): Store, Path(id): Path<String>) -> ApiResult {
    let s = store.get(&id)?;
    let mut s = s.write().unwrap();
    if s.history.is_empty() {
        return Err(ApiError::conflict("nothing to undo".into(), None));
    }
    let keep = s.history.len() - 1;
    let slice = s.replay(&s.history[..keep])?;
    s.history.truncate(keep);
    s.slice = slice;
    Ok(Json(s.state()))
}

#[derive(Debug, Deserialize)]
pub struct HammockQuery {
    pub vertex: String,
    pub dir: Option<String>,
}

async fn get_hammock(State(store): Store, Path(id): Path<String>, Query(q): Query<HammockQuery>) -> ApiResult {
    let s = store.get(&id)?;
    let s = s.read().unwrap();
    let v = s.window.parse_vertex(&q.vertex)?;
    if !s.window.contains(v) {
        return Err(ApiError::not_found(format!("{} is outside the window", q.vertex)));
    }
    let dir = Direction::parse(q.dir.as_deref().unwrap_or("forward"))?;
    let h = hammock(&s.window, v, dir)?;
    Ok(Json(serde_json::to_value(HammockView::new(&s.window, &h)).expect("views serialize")))
}

#[derive(Debug, Deserialize)]
pub struct DirQuery {
    pub dir: Option<String>,
}

async fn get_double_slice(State(store): Store, Path(id): Path<String>, Query(q): Query<DirQuery>) -> ApiResult {
    let s = store.get(&id)?;
    let s = s.read().unwrap();
    if s.side != Side::Tau {
        return Err(ApiError::conflict("double slices are built from a τ-slice".into(), None));
    }
    let dir = Direction::parse(q.dir.as_deref().unwrap_or("forward"))?;
    let d = double_slice(&s.window, &s.slice, dir)?;
    Ok(Json(serde_json::to_value(DoubleSliceView::new(&s.window, &d)).expect("views serialize")))
}

async fn classification(State(store): Store, Path(id): Path<String>) -> ApiResult {
    let s = store.get(&id)?;
    let s = s.read().unwrap();
    let bounds = store.bounds;
    let result = s.classification.get_or_init(|| {
        qslice::classify(&s.gamma, &bounds)
            .map(|r| serde_json::to_value(ClassificationView::new(&r)).expect("views serialize"))
    });
    match result {
        Ok(v) => Ok(Json(v.clone())),
        Err(e) => Err(e.clone().into()),
    }
}

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/session", post(create))
        .route("/session/:id/state", get(state))
        .route("/session/:id/window", get(window))
        .route("/session/:id/mutate", post(mutate))
        .route("/session/:id/undo", post(undo))
        .route("/session/:id/hammock", get(get_hammock))
        .route("/session/:id/double-slice", get(get_double_slice))
        .route("/session/:id/classification", get(classification))
        .with_state(store)
}

pub async fn serve(addr: &str, store: Arc<SessionStore>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(store)).await
}
