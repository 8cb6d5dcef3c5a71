use std::collections::HashMap;
use std::sync::{Arc, Mutex, MutexGuard};

use ahp_core::catalog::{self, attach_metrics, CatalogFilter, MetricRecord};
use ahp_core::format::parse_model_with_warnings;
use ahp_core::report::AnalysisDocument;
use ahp_core::{
    evaluate, serialize_model, validate_model, whatif, AnalysisDelta, DecisionModel, NodePath, ParseError, Ratio,
    ValidationReport,
};
use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::ApiError;
use crate::session::{SessionState, SessionStore};

pub type Shared = Arc<SessionStore>;

pub fn api_routes() -> Router<Shared> {
    Router::new()
        .route("/api/health", get(health))
        .route("/api/session", get(create_session).post(create_session))
        .route("/api/session/{id}/model", get(get_model).put(put_model))
        .route("/api/session/{id}/analyze", post(analyze))
        .route("/api/session/{id}/whatif", post(run_whatif))
        .route("/api/session/{id}/metrics", get(get_metrics).put(put_metrics))
        .route("/api/catalog", get(get_catalog))
}

type ApiResult<T> = Result<Json<T>, ApiError>;

// Bodies are decoded by hand so malformed JSON gets the same error shape as
// everything else.
fn json_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid request body: {e}")))
}

fn session(store: &SessionStore, id: &str) -> Result<Arc<Mutex<SessionState>>, ApiError> {
    store.get(id).ok_or_else(|| ApiError::unknown_session(id))
}

fn lock(session: &Mutex<SessionState>) -> MutexGuard<'_, SessionState> {
    // a panic mid-request leaves the state as it was before the mutation
    session.lock().unwrap_or_else(|p| p.into_inner())
}

#[derive(Debug, Serialize)]
struct Health {
    status: &'static str,
    version: &'static str,
    sessions: usize,
}

async fn health(State(store): State<Shared>) -> Json<Health> {
    Json(Health {
        status: "ok",
        version: env!("CARGO_PKG_VERSION"),
        sessions: store.len(),
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SessionCreated {
    pub session_id: String,
    pub revision: u64,
}

async fn create_session(State(store): State<Shared>) -> (StatusCode, Json<SessionCreated>) {
    let session_id = store.create();
    log::info!("created session {session_id}");
    (
        StatusCode::CREATED,
        Json(SessionCreated {
            session_id,
            revision: 0,
        }),
    )
}

/// `model` and `text` are both null until a model is stored.
#[derive(Debug, Serialize)]
struct ModelDocument {
    session_id: String,
    revision: u64,
    model: Option<DecisionModel>,
    text: Option<String>,
}

async fn get_model(State(store): State<Shared>, Path(id): Path<String>) -> ApiResult<ModelDocument> {
    let session = session(&store, &id)?;
    let state = lock(&session);
    Ok(Json(ModelDocument {
        session_id: id,
        revision: state.revision,
        text: state.model.as_ref().map(serialize_model),
        model: state.model.clone(),
    }))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PutModel {
    expected_revision: u64,
    /// The model file as text.
    text: Option<String>,
    /// The same model in structured JSON form.
    model: Option<DecisionModel>,
}

#[derive(Debug, Serialize)]
struct ModelStored {
    revision: u64,
    report: ValidationReport,
    parse_warnings: Vec<ParseError>,
}

async fn put_model(State(store): State<Shared>, Path(id): Path<String>, body: Bytes) -> ApiResult<ModelStored> {
    let session = session(&store, &id)?;
    let request: PutModel = json_body(&body)?;
    let (model, parse_warnings) = match (request.text, request.model) {
        (Some(text), None) => {
            let parsed = parse_model_with_warnings(&text)?;
            (parsed.model, parsed.warnings)
        }
        (None, Some(model)) => (model, Vec::new()),
        _ => return Err(ApiError::bad_request("give exactly one of `text` or `model`")),
    };

    let mut state = lock(&session);
    if request.expected_revision != state.revision {
        return Err(ApiError::revision_conflict(request.expected_revision, state.revision));
    }
    let report = validate_model(&model);
    if !report.is_ok() {
        return Err(ApiError::invalid(report));
    }
    state.model = Some(model);
    state.revision += 1;
    log::info!("session {id}: stored model at revision {}", state.revision);
    Ok(Json(ModelStored {
        revision: state.revision,
        report,
        parse_warnings,
    }))
}

fn stored_model(state: &SessionState) -> Result<&DecisionModel, ApiError> {
    state.model.as_ref().ok_or_else(ApiError::no_model)
}

async fn analyze(State(store): State<Shared>, Path(id): Path<String>) -> Result<Json<serde_json::Value>, ApiError> {
    let session = session(&store, &id)?;
    let state = lock(&session);
    let result = evaluate(stored_model(&state)?)?;
    // same document the CLI prints for `analyze --format json`
    let document = serde_json::to_value(AnalysisDocument::new(&result)).expect("analysis results serialize");
    Ok(Json(document))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WhatIfRequest {
    path: NodePath,
    pair: (String, String),
    value: Ratio,
}

#[derive(Debug, Serialize)]
struct WhatIfResponse {
    revision: u64,
    #[serde(flatten)]
    delta: AnalysisDelta,
}

async fn run_whatif(State(store): State<Shared>, Path(id): Path<String>, body: Bytes) -> ApiResult<WhatIfResponse> {
    let session = session(&store, &id)?;
    let request: WhatIfRequest = json_body(&body)?;
    let state = lock(&session);
    let model = stored_model(&state)?;
    let delta = whatif(model, &request.path, (&request.pair.0, &request.pair.1), request.value)?;
    Ok(Json(WhatIfResponse {
        revision: state.revision,
        delta,
    }))
}

#[derive(Debug, Serialize)]
struct MetricsDocument {
    revision: u64,
    metrics: Vec<MetricRecord>,
    /// Leaf path → records, for records that match a leaf of the stored model.
    evidence: HashMap<String, Vec<MetricRecord>>,
    /// Attributes of records that match no leaf of the stored model.
    unattached: Vec<String>,
}

fn metrics_document(state: &SessionState) -> MetricsDocument {
    let mut evidence: HashMap<String, Vec<MetricRecord>> = HashMap::new();
    let mut unattached = Vec::new();
    for record in &state.metrics {
        let attached = state
            .model
            .as_ref()
            .and_then(|m| attach_metrics(m, std::slice::from_ref(record)).ok());
        match attached {
            Some(annotated) => {
                for (path, records) in annotated.evidence {
                    evidence.entry(path).or_default().extend(records);
                }
            }
            None => unattached.push(record.attribute.clone()),
        }
    }
    MetricsDocument {
        revision: state.revision,
        metrics: state.metrics.clone(),
        evidence,
        unattached,
    }
}

async fn get_metrics(State(store): State<Shared>, Path(id): Path<String>) -> ApiResult<MetricsDocument> {
    let session = session(&store, &id)?;
    let state = lock(&session);
    Ok(Json(metrics_document(&state)))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PutMetrics {
    expected_revision: u64,
    metrics: Option<Vec<MetricRecord>>,
    /// Records in the CSV layout written by `write_metrics_csv`.
    csv: Option<String>,
}

async fn put_metrics(State(store): State<Shared>, Path(id): Path<String>, body: Bytes) -> ApiResult<MetricsDocument> {
    let session = session(&store, &id)?;
    let request: PutMetrics = json_body(&body)?;
    let metrics = match (request.metrics, request.csv) {
        (Some(metrics), None) => metrics,
        (None, Some(csv)) => catalog::read_metrics_csv(csv.as_bytes())?,
        _ => return Err(ApiError::bad_request("give exactly one of `metrics` or `csv`")),
    };

    let mut state = lock(&session);
    if request.expected_revision != state.revision {
        return Err(ApiError::revision_conflict(request.expected_revision, state.revision));
    }
    match &state.model {
        Some(model) => {
            attach_metrics(model, &metrics)?;
        }
        None => {
            for record in &metrics {
                record.check()?;
            }
        }
    }
    state.metrics = metrics;
    state.revision += 1;
    Ok(Json(metrics_document(&state)))
}

#[derive(Debug, Serialize)]
struct CatalogDocument {
    count: usize,
    entries: Vec<catalog::AttributeCatalogEntry>,
}

async fn get_catalog(Query(query): Query<HashMap<String, String>>) -> ApiResult<CatalogDocument> {
    let mut filter = CatalogFilter::default();
    for (key, value) in query {
        match key.as_str() {
            "category" => filter.category = Some(value.parse()?),
            "dimension" => filter.dimension = Some(value.parse()?),
            "keyword" => filter.keyword = Some(value),
            other => {
                return Err(ApiError::new(
                    StatusCode::BAD_REQUEST,
                    "BAD_FILTER",
                    format!("unknown filter key `{other}`; use category, dimension or keyword"),
                ))
            }
        }
    }
    let entries = catalog::catalog_entries(&filter);
    Ok(Json(CatalogDocument {
        count: entries.len(),
        entries,
    }))
}
