use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use swarmbench_core::trace_io::write_jsonl;
use swarmbench_core::{
    builtin_problem, catalog, parse_problem_xml, AlgorithmId, AlgorithmParams, Diagnostic, Error, IterationRecord,
    ParamSpec, Problem, RunConfig, SearchSpace, SpaceKind,
};

use crate::pool::WorkerPool;
use crate::store::{RunEntry, RunRequestEcho, RunStatus, RunStore};

/// Largest accepted problem upload.
pub const MAX_UPLOAD_BYTES: usize = 1024 * 1024;

struct Upload {
    id: String,
    problem: Arc<Problem>,
}

/// Shared service state: uploaded problems, runs, and the worker pool.
pub struct AppState {
    uploads: Mutex<Vec<Upload>>,
    runs: RunStore,
    pool: WorkerPool,
}

impl AppState {
    pub fn new(workers: usize) -> Self {
        Self {
            uploads: Mutex::new(Vec::new()),
            runs: RunStore::default(),
            pool: WorkerPool::new(workers),
        }
    }

    pub fn runs(&self) -> &RunStore {
        &self.runs
    }

    pub fn workers(&self) -> usize {
        self.pool.size()
    }

    fn upload(&self, id: &str) -> Option<Arc<Problem>> {
        let uploads = self.uploads.lock().unwrap_or_else(|e| e.into_inner());
        uploads.iter().find(|u| u.id == id).map(|u| Arc::clone(&u.problem))
    }

    fn problem(&self, id: &str, dimension: Option<usize>) -> Result<Arc<Problem>, ApiError> {
        if let Some(p) = self.upload(id) {
            if dimension.is_some() {
                return Err(ApiError::invalid(
                    "dimension",
                    "only builtin continuous problems take a dimension",
                ));
            }
            return Ok(p);
        }
        match builtin_problem(id, dimension) {
            Ok(p) => {
                if dimension.is_some() && p.kind() == SpaceKind::Tour {
                    return Err(ApiError::invalid("dimension", "tour problems have a fixed size"));
                }
                Ok(Arc::new(p))
            }
            Err(Error::NotFound { .. }) => Err(ApiError::not_found(format!("unknown problem `{id}`"))),
            Err(e) => Err(e.into()),
        }
    }
}

/// JSON error body: `{"error": message, "field"?: name, "diagnostics"?: [...]}`.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    field: Option<String>,
    diagnostics: Option<Vec<Diagnostic>>,
    current: Option<RunStatus>,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
            field: None,
            diagnostics: None,
            current: None,
        }
    }

    fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, message)
    }

    fn invalid(field: &str, message: impl Into<String>) -> Self {
        let mut e = Self::new(StatusCode::UNPROCESSABLE_ENTITY, message);
        e.field = Some(field.to_string());
        e
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::Config { field, .. } => Self::invalid(&field, message),
            Error::UnknownParameter { name, .. } => Self::invalid(&format!("params.{name}"), message),
            Error::UnknownAlgorithm(_) => Self::invalid("algorithm", message),
            Error::NotFound { .. } => Self::not_found(message),
            Error::InvalidProblem(diagnostics) => {
                let mut err = Self::invalid("problem_id", message);
                err.diagnostics = Some(diagnostics);
                err
            }
            Error::ProblemFile(file) => {
                let mut err = Self::new(StatusCode::UNPROCESSABLE_ENTITY, message);
                err.diagnostics = Some(file.diagnostics);
                err
            }
            _ => Self::new(StatusCode::INTERNAL_SERVER_ERROR, message),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "error": self.message });
        if let Some(field) = self.field {
            body["field"] = json!(field);
        }
        if let Some(d) = self.diagnostics {
            body["diagnostics"] = json!(d);
        }
        if let Some(s) = self.current {
            body["status"] = json!(s);
        }
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

pub fn routes(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/v1/algorithms", get(list_algorithms))
        .route(
            "/api/v1/problems",
            get(list_problems)
                .post(upload_problem)
                .layer(DefaultBodyLimit::max(MAX_UPLOAD_BYTES)),
        )
        .route("/api/v1/problems/{id}", get(problem_detail))
        .route("/api/v1/runs", post(submit_run))
        .route("/api/v1/runs/{id}", get(poll_run))
        .route("/api/v1/runs/{id}/cancel", post(cancel_run))
        .route("/api/v1/runs/{id}/trace", get(export_trace))
        .with_state(state)
}

#[derive(Serialize)]
struct AlgorithmInfo {
    id: AlgorithmId,
    name: &'static str,
    kind: SpaceKind,
    params: &'static [ParamSpec],
}

async fn list_algorithms() -> Json<Vec<AlgorithmInfo>> {
    Json(
        AlgorithmId::ALL
            .iter()
            .map(|&id| AlgorithmInfo {
                id,
                name: id.name(),
                kind: id.space_kind(),
                params: id.schema(),
            })
            .collect(),
    )
}

#[derive(Serialize)]
struct ProblemInfo {
    id: String,
    name: String,
    kind: SpaceKind,
    source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    description: Option<String>,
}

fn summary(id: &str, problem: &Problem, source: &'static str) -> ProblemInfo {
    let (dimension, nodes) = match &problem.space {
        SearchSpace::Continuous(b) => (Some(b.dimension()), None),
        SearchSpace::Tour(t) => (None, Some(t.node_count())),
    };
    ProblemInfo {
        id: id.to_string(),
        name: problem.name.clone(),
        kind: problem.kind(),
        source,
        dimension,
        nodes,
        description: None,
    }
}

async fn list_problems(State(state): State<Arc<AppState>>) -> Json<Vec<ProblemInfo>> {
    let mut out: Vec<ProblemInfo> = catalog()
        .into_iter()
        .map(|entry| {
            let p = builtin_problem(&entry.id, None).expect("catalog entry");
            let mut info = summary(&entry.id, &p, "builtin");
            info.description = Some(entry.description);
            info
        })
        .collect();
    let uploads = state.uploads.lock().unwrap_or_else(|e| e.into_inner());
    out.extend(uploads.iter().map(|u| summary(&u.id, &u.problem, "upload")));
    Json(out)
}

#[derive(Deserialize)]
struct DetailQuery {
    dimension: Option<usize>,
}

async fn problem_detail(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<DetailQuery>,
) -> ApiResult<Json<Value>> {
    let problem = state.problem(&id, q.dimension)?;
    let source = if state.upload(&id).is_some() {
        "upload"
    } else {
        "builtin"
    };
    let mut body = serde_json::to_value(summary(&id, &problem, source)).expect("plain data");
    match &problem.space {
        SearchSpace::Continuous(b) => {
            let (_, f) = problem.continuous_parts()?;
            body["lower"] = json!(b.lower);
            body["upper"] = json!(b.upper);
            body["objective"] = json!(f);
        }
        SearchSpace::Tour(t) => {
            body["cities"] = json!(t.cities);
            if t.cities.is_none() {
                let n = t.node_count();
                let rows: Vec<&[f64]> = (0..n).map(|i| t.distances.row(i)).collect();
                body["distances"] = json!(rows);
            }
        }
    }
    Ok(Json(body))
}

async fn upload_problem(
    State(state): State<Arc<AppState>>,
    headers: HeaderMap,
    body: Bytes,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let content_type = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .unwrap_or("")
        .split(';')
        .next()
        .unwrap_or("")
        .trim()
        .to_ascii_lowercase();
    if !content_type.is_empty() && !content_type.ends_with("/xml") && !content_type.ends_with("+xml") {
        return Err(ApiError::new(
            StatusCode::UNSUPPORTED_MEDIA_TYPE,
            format!("problem uploads are XML; got content type `{content_type}`"),
        ));
    }
    let text =
        std::str::from_utf8(&body).map_err(|_| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "body is not UTF-8"))?;
    let problem = parse_problem_xml(text).map_err(|e| ApiError::from(Error::from(e)))?;
    let mut uploads = state.uploads.lock().unwrap_or_else(|e| e.into_inner());
    let id = format!("upload-{}", uploads.len() + 1);
    let info = summary(&id, &problem, "upload");
    uploads.push(Upload {
        id: id.clone(),
        problem: Arc::new(problem),
    });
    Ok((StatusCode::CREATED, Json(json!({ "id": id, "problem": info }))))
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RunRequest {
    algorithm: String,
    problem_id: String,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    seed: u64,
    iterations: usize,
    population: usize,
    #[serde(default)]
    stride: Option<usize>,
    #[serde(default)]
    target: Option<f64>,
    #[serde(default)]
    dimension: Option<usize>,
}

fn parse_run_request(body: &[u8]) -> ApiResult<RunRequest> {
    let de = &mut serde_json::Deserializer::from_slice(body);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let field = if path == "." {
            // missing or unknown fields are reported at the top level; the message names them
            inner
                .to_string()
                .split('`')
                .nth(1)
                .map_or_else(|| "body".to_string(), str::to_string)
        } else {
            path
        };
        ApiError::invalid(&field, inner.to_string())
    })
}

async fn submit_run(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<(StatusCode, Json<Value>)> {
    let req = parse_run_request(&body)?;
    let algorithm: AlgorithmId = req.algorithm.parse()?;
    let params = AlgorithmParams::with_overrides(algorithm, req.params.iter().map(|(k, v)| (k.as_str(), *v)))?;
    let problem = state.problem(&req.problem_id, req.dimension)?;
    let mut config = RunConfig::new(req.seed, req.iterations, req.population);
    config.target = req.target;
    if let Some(stride) = req.stride {
        config.stride = stride;
    }
    config.validate()?;
    params.resolve(&problem, &config)?;

    let echo = RunRequestEcho {
        problem_id: req.problem_id,
        params,
        seed: config.seed,
        iterations: config.iterations,
        population: config.population,
        stride: config.stride,
        target: config.target,
        dimension: req.dimension,
    };
    let entry = state.runs.insert(|id| RunEntry::new(id, echo, problem, config));
    state.pool.submit(Arc::clone(&entry));
    Ok((
        StatusCode::ACCEPTED,
        Json(json!({ "run_id": entry.id, "status": RunStatus::Pending })),
    ))
}

#[derive(Deserialize)]
struct PollQuery {
    #[serde(default)]
    from: usize,
}

#[derive(Serialize)]
struct PollResponse<'a> {
    id: &'a str,
    status: RunStatus,
    request: &'a RunRequestEcho,
    from: usize,
    total: usize,
    records: &'a [IterationRecord],
    #[serde(skip_serializing_if = "Option::is_none")]
    solution: Option<&'a swarmbench_core::Solution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stop: Option<swarmbench_core::StopReason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
    cancel_requested: bool,
    history: &'a [RunStatus],
    created_at: u64,
    started_at: Option<u64>,
    finished_at: Option<u64>,
}

fn lookup(state: &AppState, id: &str) -> ApiResult<Arc<RunEntry>> {
    state
        .runs
        .get(id)
        .ok_or_else(|| ApiError::not_found(format!("unknown run `{id}`")))
}

async fn poll_run(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<PollQuery>,
) -> ApiResult<Json<Value>> {
    let entry = lookup(&state, &id)?;
    let run = entry.state();
    let total = run.records.len();
    let from = q.from.min(total);
    let response = PollResponse {
        id: &entry.id,
        status: run.status,
        request: &entry.request,
        from,
        total,
        records: &run.records[from..],
        solution: run.trace.as_ref().map(|t| &t.solution),
        stop: run.trace.as_ref().map(|t| t.stop),
        error: run.error.as_deref(),
        cancel_requested: entry.cancel_requested(),
        history: &run.history,
        created_at: entry.created_at,
        started_at: run.started_at,
        finished_at: run.finished_at,
    };
    Ok(Json(serde_json::to_value(response).expect("plain data")))
}

async fn cancel_run(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let entry = lookup(&state, &id)?;
    match entry.request_cancel() {
        Ok(status) => Ok(Json(json!({
            "id": entry.id,
            "status": status,
            "cancel_requested": status == RunStatus::Running,
        }))),
        Err(current) => {
            let mut err = ApiError::new(
                StatusCode::CONFLICT,
                format!("run `{id}` is already {}", current.as_str()),
            );
            err.current = Some(current);
            Err(err)
        }
    }
}

/// The finished trace as JSONL, byte-identical to the CLI's output for the same run.
async fn export_trace(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Response> {
    let entry = lookup(&state, &id)?;
    let run = entry.state();
    let Some(trace) = &run.trace else {
        let mut err = ApiError::new(StatusCode::CONFLICT, format!("run `{id}` has no finished trace"));
        err.current = Some(run.status);
        return Err(err);
    };
    let mut body = Vec::new();
    write_jsonl(trace, &mut body)?;
    Ok(([(header::CONTENT_TYPE, "application/x-ndjson")], body).into_response())
}
