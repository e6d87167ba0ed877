//! Stateless JSON API over the model: preset catalog, evaluation and sweeps.
//!
//! Request bodies use the same schema as the command line configuration
//! file, so a scenario exported from a client runs unchanged in `qea run`.

use std::sync::Arc;

use axum::body::Body;
use axum::extract::State;
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use futures::stream;
use qea_core::config::{resolve, Diagnostic, Resolved, RunConfig};
use qea_core::model::{CurveSet, ModelError};
use qea_core::presets::Catalog;
use qea_core::report::{self, round_row, FailureKind, RunError, Summary};
use qea_core::sensitivity::SensitivityError;
use qea_core::solver::report_year;
use serde::Serialize;
use serde_json::json;
use tower_http::cors::{AllowOrigin, CorsLayer};

/// Most samples a single curve in a response may hold.
pub const MAX_CURVE_SAMPLES: usize = 2000;

pub const NDJSON: &str = "application/x-ndjson";

/// Preset data shared by all requests, or the reason it failed to load.
#[derive(Clone)]
pub struct AppState {
    catalog: Arc<Result<Catalog<f64>, String>>,
}

impl AppState {
    pub fn new(catalog: Result<Catalog<f64>, String>) -> Self {
        Self {
            catalog: Arc::new(catalog),
        }
    }
}

#[derive(Serialize)]
pub struct EvaluateResponse {
    pub summary: Summary,
    pub curves: CurveSet<f64>,
}

pub enum ApiError {
    Invalid(Vec<Diagnostic>),
    Solver(String, Option<(f64, f64)>),
    Presets(String),
    Internal(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::Invalid(diagnostics) => (
                StatusCode::BAD_REQUEST,
                json!({ "error": "invalid_request", "diagnostics": diagnostics }),
            ),
            ApiError::Solver(message, range) => (
                StatusCode::UNPROCESSABLE_ENTITY,
                json!({
                    "error": "solver_failure",
                    "message": message,
                    "scanned_range": range.map(|(from, to)| json!({ "from": from, "to": to })),
                }),
            ),
            ApiError::Presets(message) => (
                StatusCode::INTERNAL_SERVER_ERROR,
                json!({ "error": "preset_corrupt", "message": message }),
            ),
            ApiError::Internal(message) => (
                StatusCode::INTERNAL_SERVER_ERROR,
                json!({ "error": "internal", "message": message }),
            ),
        };
        (status, Json(body)).into_response()
    }
}

impl From<RunError> for ApiError {
    fn from(e: RunError) -> Self {
        let range = match &e {
            RunError::Model(ModelError::NoConvergence { from, to, .. })
            | RunError::Sweep(SensitivityError::Model(ModelError::NoConvergence { from, to, .. })) => {
                Some((*from, *to))
            }
            _ => None,
        };
        match (e.kind(), e) {
            (_, RunError::Config(d)) => ApiError::Invalid(d),
            (FailureKind::Config, e) => ApiError::Invalid(vec![Diagnostic::new("parameters", e.to_string())]),
            (FailureKind::Solver, e) => ApiError::Solver(e.to_string(), range),
        }
    }
}

impl AppState {
    fn catalog(&self) -> Result<&Catalog<f64>, ApiError> {
        self.catalog.as_ref().as_ref().map_err(|e| ApiError::Presets(e.clone()))
    }

    fn resolve(&self, body: serde_json::Value) -> Result<Resolved, ApiError> {
        let config: RunConfig = serde_json::from_value(body)
            .map_err(|e| ApiError::Invalid(vec![Diagnostic::new("document", e.to_string())]))?;
        resolve(&config, self.catalog()?).map_err(ApiError::Invalid)
    }
}

/// Runs CPU-bound work off the async executor.
async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
}

async fn presets(State(state): State<AppState>) -> Result<Json<Catalog<f64>>, ApiError> {
    Ok(Json(state.catalog()?.clone()))
}

async fn evaluate(
    State(state): State<AppState>,
    Json(body): Json<serde_json::Value>,
) -> Result<Json<EvaluateResponse>, ApiError> {
    let mut resolved = state.resolve(body)?;
    let samples = resolved.curve_samples();
    if samples > MAX_CURVE_SAMPLES {
        return Err(ApiError::Invalid(vec![Diagnostic::new(
            "curves",
            format!("{samples} samples requested, at most {MAX_CURVE_SAMPLES} per curve; narrow the window or widen the step"),
        )]));
    }
    resolved.sweep = None;
    blocking(move || {
        let (summary, curves) = report::summarize(&resolved)?;
        Ok(Json(EvaluateResponse { summary, curves }))
    })
    .await
}

fn wants_ndjson(headers: &HeaderMap) -> bool {
    headers
        .get(header::ACCEPT)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.contains(NDJSON))
}

/// Sweep report as one JSON document, or as NDJSON lines (a header, then
/// one row per line) when the client accepts `application/x-ndjson`.
async fn sweep(
    State(state): State<AppState>,
    headers: HeaderMap,
    Json(body): Json<serde_json::Value>,
) -> Result<Response, ApiError> {
    let resolved = state.resolve(body)?;
    if resolved.sweep.is_none() {
        return Err(ApiError::Invalid(vec![Diagnostic::new("sweep", "a sweep section is required")]));
    }
    if !wants_ndjson(&headers) {
        let report = blocking(move || Ok(report::sweep(&resolved)?.expect("sweep present"))).await?;
        return Ok(Json(report).into_response());
    }

    let spec = resolved.sweep.expect("sweep present");
    let cases = spec
        .cases()
        .map_err(|e| ApiError::from(RunError::from(e)))?;
    let baseline = blocking({
        let spec = spec.clone();
        move || spec.baseline_year().map_err(|e| RunError::from(e).into())
    })
    .await?;
    let (tx, rx) = tokio::sync::mpsc::channel::<String>(16);
    tokio::task::spawn_blocking(move || {
        let rounded = baseline.map(report_year);
        let header = json!({
            "target_size_log10": spec.target_size_log10,
            "mode": spec.mode,
            "baseline_year": rounded,
        });
        if tx.blocking_send(header.to_string()).is_err() {
            return;
        }
        let rows = std::iter::once(Ok(spec.baseline_row(baseline)))
            .chain(cases.iter().map(|c| spec.run_case(c, baseline)));
        for row in rows {
            let line = match row {
                Ok(r) => serde_json::to_string(&round_row(r, rounded)).expect("row serializes"),
                Err(e) => json!({ "error": "solver_failure", "message": e.to_string() }).to_string(),
            };
            let stop = line.starts_with("{\"error\"");
            if tx.blocking_send(line).is_err() || stop {
                return;
            }
        }
    });
    let lines = stream::unfold(rx, |mut rx| async move {
        rx.recv()
            .await
            .map(|line| (Ok::<_, std::io::Error>(line + "\n"), rx))
    });
    let mut response = Body::from_stream(lines).into_response();
    response
        .headers_mut()
        .insert(header::CONTENT_TYPE, HeaderValue::from_static(NDJSON));
    Ok(response)
}

/// Cross-origin policy: a single allowed origin, or any origin when `None`.
pub fn cors(origin: Option<&str>) -> CorsLayer {
    let layer = CorsLayer::new()
        .allow_methods([axum::http::Method::GET, axum::http::Method::POST])
        .allow_headers([header::CONTENT_TYPE, header::ACCEPT]);
    match origin.and_then(|o| HeaderValue::from_str(o).ok()) {
        Some(o) => layer.allow_origin(AllowOrigin::exact(o)),
        None => layer.allow_origin(AllowOrigin::any()),
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/presets", get(presets))
        .route("/evaluate", post(evaluate))
        .route("/sweep", post(sweep))
        .with_state(state)
}
