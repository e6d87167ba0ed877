use std::fs;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use qea_core::config::{resolve, RunConfig};
use qea_core::presets::Catalog;
use qea_core::report;
use qea_service::{router, AppState, NDJSON};
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> Router {
    router(AppState::new(Ok(Catalog::bundled().unwrap())))
}

async fn call(app: Router, req: Request<Body>) -> (StatusCode, Vec<u8>) {
    let resp = app.oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, bytes)
}

async fn post(path: &str, body: &Value) -> (StatusCode, Value) {
    let req = Request::post(path)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let (status, bytes) = call(app(), req).await;
    (status, serde_json::from_slice(&bytes).unwrap())
}

fn search_quera() -> Value {
    json!({
        "problem": { "preset": "search" },
        "hardware": { "preset": "QuEra" },
        "overrides": { "t0": 2025 }
    })
}

#[tokio::test]
async fn presets_catalog_is_stable() {
    let get = || Request::get("/presets").body(Body::empty()).unwrap();
    let (s1, a) = call(app(), get()).await;
    let (s2, b) = call(app(), get()).await;
    assert_eq!((s1, s2), (StatusCode::OK, StatusCode::OK));
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    let names: Vec<&str> = v["hardware"].as_array().unwrap().iter().map(|h| h["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["IBM", "IonQ", "QuEra"]);
    assert_eq!(v["problems"][1]["quantum_work"], "sqrt(n) * q");
    assert!(v["roadmaps"].as_array().unwrap().len() >= 3);
}

#[tokio::test]
async fn corrupt_presets_give_500() {
    let dir = std::env::temp_dir().join(format!("qea-service-corrupt-{}", std::process::id()));
    fs::create_dir_all(dir.join("roadmaps")).unwrap();
    fs::write(dir.join("problems.toml"), "[[problem]]\nname = 3\n").unwrap();
    fs::write(dir.join("hardware.toml"), "").unwrap();
    let catalog = Catalog::<f64>::load_dir(&dir).map_err(|e| e.to_string());
    fs::remove_dir_all(&dir).unwrap();
    let app = router(AppState::new(catalog));
    let (status, body) = call(app, Request::get("/presets").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::INTERNAL_SERVER_ERROR);
    let v: Value = serde_json::from_slice(&body).unwrap();
    assert_eq!(v["error"], "preset_corrupt");
    assert!(v["message"].as_str().unwrap().contains("problems.toml"));
}

#[tokio::test]
async fn evaluate_search_quera() {
    let (status, v) = post("/evaluate", &search_quera()).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["summary"]["status"], "advantage_at");
    let t = v["summary"]["t_star"].as_f64().unwrap();
    assert!((t - 2025.0).abs() <= 1.0);
    assert_eq!(v["summary"]["parameters"]["hws"], 5.1);
    assert_eq!(v["curves"]["adv"].as_array().unwrap().len(), 301);
    assert_eq!(v["curves"]["feas"][0]["kind"], "sample");
    let (_, again) = post("/evaluate", &search_quera()).await;
    assert_eq!(v, again);
}

#[tokio::test]
async fn evaluate_rejects_low_plqr() {
    let mut body = search_quera();
    body["overrides"]["plqr"] = json!(1);
    let (status, v) = post("/evaluate", &body).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let d = &v["diagnostics"][0];
    assert!(d["field"].as_str().unwrap().ends_with("plqr"));
    assert!(d["message"].as_str().unwrap().contains('3'));
}

#[tokio::test]
async fn evaluate_rejects_malformed_and_oversized() {
    let (status, v) = post("/evaluate", &json!({ "problem": {} })).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["diagnostics"][0]["field"], "document");

    let mut body = search_quera();
    body["curves"] = json!({ "start": 2025, "end": 2400, "step": 0.1 });
    let (status, v) = post("/evaluate", &body).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["diagnostics"][0]["field"], "curves");
}

#[tokio::test]
async fn evaluate_solver_failure_is_422() {
    let body = json!({
        "problem": {
            "classical_runtime": "n / procs",
            "quantum_runtime": "ln(n - 5)",
            "qps": "linear"
        },
        "hardware": { "preset": "IonQ" },
        "overrides": { "t0": 2025 }
    });
    let (status, v) = post("/evaluate", &body).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"], "solver_failure");
}

#[tokio::test]
async fn evaluate_matches_cli_output() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../cli/configs/factoring_ibm.toml");
    let config = RunConfig::from_toml(&fs::read_to_string(path).unwrap()).unwrap();
    let resolved = resolve(&config, &Catalog::bundled().unwrap()).unwrap();
    let cli = report::evaluate(&resolved).unwrap();
    let cli_summary: Value = serde_json::from_str(&report::to_json(&cli.summary)).unwrap();

    let body = serde_json::to_value(&config).unwrap();
    let (status, v) = post("/evaluate", &body).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["summary"], cli_summary);
    assert_eq!(v["curves"], serde_json::to_value(&cli.curves).unwrap());
}

fn sweep_body(perturbations: Value) -> Value {
    let mut body = search_quera();
    body["hardware"]["preset"] = json!("IonQ");
    body["sweep"] = json!({ "target_size_log10": 20, "perturbations": perturbations });
    body
}

#[tokio::test]
async fn sweep_empty_is_baseline_only() {
    let (status, v) = post("/sweep", &sweep_body(json!([]))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    assert_eq!(v["rows"][0]["parameter"], Value::Null);
}

#[tokio::test]
async fn sweep_default_set_matches_in_process() {
    let body = sweep_body(json!("default"));
    let (status, v) = post("/sweep", &body).await;
    assert_eq!(status, StatusCode::OK);
    let config: RunConfig = serde_json::from_value(body).unwrap();
    let resolved = resolve(&config, &Catalog::bundled().unwrap()).unwrap();
    let direct = report::sweep(&resolved).unwrap().unwrap();
    assert_eq!(v, serde_json::to_value(&direct).unwrap());
    let params: Vec<&str> = v["rows"].as_array().unwrap()[1..]
        .iter()
        .map(|r| r["parameter"].as_str().unwrap())
        .collect();
    for p in ["hws", "qir_pct", "plqr", "rir_pct", "processors_log10", "cir_pct"] {
        assert!(params.contains(&p), "{p}");
    }
}

#[tokio::test]
async fn sweep_streams_rows() {
    let body = sweep_body(json!("default"));
    let req = Request::post("/sweep")
        .header("content-type", "application/json")
        .header("accept", NDJSON)
        .body(Body::from(body.to_string()))
        .unwrap();
    let (status, bytes) = call(app(), req).await;
    assert_eq!(status, StatusCode::OK);
    let (_, whole) = post("/sweep", &body).await;
    let lines: Vec<Value> = String::from_utf8(bytes)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines[0]["baseline_year"], whole["baseline_year"]);
    assert_eq!(&lines[1..], whole["rows"].as_array().unwrap().as_slice());
}

#[tokio::test]
async fn sweep_unknown_parameter_is_400() {
    let (status, _) = post(
        "/sweep",
        &sweep_body(json!([{ "parameter": "gate_speed", "multipliers": [10] }])),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, v) = post("/sweep", &search_quera()).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["diagnostics"][0]["field"], "sweep");
}

#[tokio::test]
async fn cors_preflight_allowed() {
    let app = app().layer(qea_service::cors(None));
    let req = Request::options("/evaluate")
        .header("origin", "http://localhost:5173")
        .header("access-control-request-method", "POST")
        .body(Body::empty())
        .unwrap();
    let resp = app.oneshot(req).await.unwrap();
    assert_eq!(
        resp.headers().get("access-control-allow-origin").unwrap(),
        "*"
    );
}
