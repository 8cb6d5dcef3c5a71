use std::sync::Arc;

use ahp_server::{app, SessionStore};
use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

const MODEL: &str = include_str!("../../core/tests/fixtures/chatbot_quality.yaml");

fn new_app() -> Router {
    app(Arc::new(SessionStore::new()), None)
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let request = Request::builder().method(method).uri(uri);
    let request = match body {
        Some(body) => request
            .header("content-type", "application/json")
            .body(Body::from(body.to_string())),
        None => request.body(Body::empty()),
    }
    .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()))
    };
    (status, value)
}

async fn new_session(app: &Router) -> String {
    let (status, body) = call(app, Method::GET, "/api/session", None).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(body["revision"], 0);
    body["session_id"].as_str().unwrap().to_string()
}

async fn session_with_model(app: &Router) -> String {
    let id = new_session(app).await;
    let (status, body) = call(
        app,
        Method::PUT,
        &format!("/api/session/{id}/model"),
        Some(json!({"expected_revision": 0, "text": MODEL})),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    id
}

#[tokio::test]
async fn health() {
    let (status, body) = call(&new_app(), Method::GET, "/api/health", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "ok");
}

#[tokio::test]
async fn fresh_session_has_no_model() {
    let app = new_app();
    let id = new_session(&app).await;
    let (status, body) = call(&app, Method::GET, &format!("/api/session/{id}/model"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["revision"], 0);
    assert!(body["model"].is_null());
    assert!(body["text"].is_null());
}

#[tokio::test]
async fn unknown_session_is_404() {
    let app = new_app();
    for (method, route) in [
        (Method::GET, "model"),
        (Method::POST, "analyze"),
        (Method::GET, "metrics"),
    ] {
        let (status, body) = call(&app, method, &format!("/api/session/nope/{route}"), None).await;
        assert_eq!(status, StatusCode::NOT_FOUND);
        assert_eq!(body["code"], "UNKNOWN_SESSION");
    }
}

#[tokio::test]
async fn upload_then_read_back() {
    let app = new_app();
    let id = new_session(&app).await;
    let (status, body) = call(
        &app,
        Method::PUT,
        &format!("/api/session/{id}/model"),
        Some(json!({"expected_revision": 0, "text": MODEL})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["revision"], 1);
    assert_eq!(body["report"]["errors"], json!([]));

    let (status, body) = call(&app, Method::GET, &format!("/api/session/{id}/model"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["revision"], 1);
    assert_eq!(body["model"]["metadata"]["name"], "Select Between Old and New Chatbots");
    assert!(body["text"].as_str().unwrap().starts_with("Version: 2.0\n"));

    // the structured form is accepted back as-is
    let model = body["model"].clone();
    let (status, body) = call(
        &app,
        Method::PUT,
        &format!("/api/session/{id}/model"),
        Some(json!({"expected_revision": 1, "model": model})),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["revision"], 2);
}

#[tokio::test]
async fn parse_errors_carry_a_span() {
    let app = new_app();
    let id = new_session(&app).await;
    let broken = MODEL.replacen("[Humanity, Affect, 1/5]", "[Humanity, Affect, 1/x]", 1);
    let (status, body) = call(
        &app,
        Method::PUT,
        &format!("/api/session/{id}/model"),
        Some(json!({"expected_revision": 0, "text": broken})),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "BAD_RATIO");
    assert_eq!(body["span"]["line"], 35);
    assert_eq!(body["span"]["column"], 28);
}

#[tokio::test]
async fn conflicting_pair_is_422_and_not_stored() {
    let app = new_app();
    let id = new_session(&app).await;
    let broken = MODEL.replacen(
        "      - [Affect, Accessibility, 1/7]\n",
        "      - [Affect, Accessibility, 1/7]\n      - [Accessibility, Affect, 5]\n",
        1,
    );
    let (status, body) = call(
        &app,
        Method::PUT,
        &format!("/api/session/{id}/model"),
        Some(json!({"expected_revision": 0, "text": broken})),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "CONFLICTING_PAIR");
    assert_eq!(body["report"]["errors"][0]["code"], "CONFLICTING_PAIR");
    let (_, body) = call(&app, Method::GET, &format!("/api/session/{id}/model"), None).await;
    assert_eq!(body["revision"], 0);
}

#[tokio::test]
async fn stale_revision_is_409() {
    let app = new_app();
    let id = session_with_model(&app).await;
    let (status, body) = call(
        &app,
        Method::PUT,
        &format!("/api/session/{id}/model"),
        Some(json!({"expected_revision": 0, "text": MODEL})),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["code"], "REVISION_CONFLICT");
    let (_, body) = call(&app, Method::GET, &format!("/api/session/{id}/model"), None).await;
    assert_eq!(body["revision"], 1);
}

#[tokio::test]
async fn malformed_bodies_are_400() {
    let app = new_app();
    let id = new_session(&app).await;
    let uri = format!("/api/session/{id}/model");
    for body in [json!({"text": MODEL}), json!({"expected_revision": 0}), json!([1, 2])] {
        let (status, reply) = call(&app, Method::PUT, &uri, Some(body)).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{reply}");
        assert_eq!(reply["status"], 400);
    }
}

#[tokio::test]
async fn analyze_reproduces_the_reference_table() {
    let app = new_app();
    let id = session_with_model(&app).await;
    let (status, body) = call(&app, Method::POST, &format!("/api/session/{id}/analyze"), None).await;
    assert_eq!(status, StatusCode::OK);
    let old = body["alternative_totals"]["OLD"].as_f64().unwrap();
    let new = body["alternative_totals"]["NEW"].as_f64().unwrap();
    assert!((old - 0.662).abs() <= 0.0015);
    assert!((new - 0.338).abs() <= 0.0015);
    assert!((body["overall_consistency"].as_f64().unwrap() - 0.184).abs() <= 0.005);
    assert_eq!(body["ranking"][0]["name"], "OLD");
    let rows = body["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 14);
    assert_eq!(rows[0]["consistency_status"], "ACCEPTABLE");
    assert!(rows[1..].iter().all(|r| r["consistency_status"] == "IDEAL"));
}

#[tokio::test]
async fn analyze_without_model_is_409() {
    let app = new_app();
    let id = new_session(&app).await;
    let (status, body) = call(&app, Method::POST, &format!("/api/session/{id}/analyze"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["code"], "NO_MODEL");
}

#[tokio::test]
async fn analyze_matches_engine_bit_for_bit() {
    let app = new_app();
    let id = session_with_model(&app).await;
    let (_, body) = call(&app, Method::POST, &format!("/api/session/{id}/analyze"), None).await;
    let result = ahp_core::evaluate(&ahp_core::parse_model(MODEL).unwrap()).unwrap();
    let direct = ahp_core::report::render_report(&result, ahp_core::report::AnalysisFormat::Json);
    let direct: Value = serde_json::from_str(&direct).unwrap();
    assert_eq!(body, direct);
}

#[tokio::test]
async fn whatif_previews_without_mutating() {
    let app = new_app();
    let id = session_with_model(&app).await;
    let uri = format!("/api/session/{id}/whatif");
    let (status, body) = call(
        &app,
        Method::POST,
        &uri,
        Some(json!({"path": "Goal/Performance/Escalation", "pair": ["OLD", "NEW"], "value": "1/7"})),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let after = body["after"]["alternative_totals"]["OLD"].as_f64().unwrap();
    assert!((after - 0.633).abs() <= 0.002);
    assert_eq!(body["changed"]["old_value"], "7");
    assert_eq!(body["revision"], 1);

    let (status, body) = call(
        &app,
        Method::POST,
        &uri,
        Some(json!({"path": "Goal/Performance/Escalation", "pair": ["OLD", "NEW"], "value": 7})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["total_shift"]["OLD"], 0.0);

    let (_, model) = call(&app, Method::GET, &format!("/api/session/{id}/model"), None).await;
    assert_eq!(model["revision"], 1);
    assert!(model["text"].as_str().unwrap().contains("[OLD, NEW, 7]"));
}

#[tokio::test]
async fn whatif_errors() {
    let app = new_app();
    let id = session_with_model(&app).await;
    let uri = format!("/api/session/{id}/whatif");
    let cases = [
        (
            json!({"path": "Goal/Nowhere", "pair": ["OLD", "NEW"], "value": 3}),
            StatusCode::NOT_FOUND,
            "UNKNOWN_PATH",
        ),
        (
            json!({"path": "Goal/Performance", "pair": ["OLD", "NEW"], "value": 3}),
            StatusCode::NOT_FOUND,
            "UNKNOWN_PAIR",
        ),
        (
            json!({"path": "Goal/Performance/Escalation", "pair": ["OLD", "NEW"], "value": 0}),
            StatusCode::BAD_REQUEST,
            "BAD_VALUE",
        ),
        (
            json!({"path": "Goal", "pair": ["OLD", "NEW"], "value": "x"}),
            StatusCode::BAD_REQUEST,
            "BAD_REQUEST",
        ),
    ];
    for (request, status, code) in cases {
        let (got, body) = call(&app, Method::POST, &uri, Some(request)).await;
        assert_eq!((got, body["code"].as_str().unwrap()), (status, code), "{body}");
    }
}

#[tokio::test]
async fn metrics_attach_to_leaves() {
    let app = new_app();
    let id = session_with_model(&app).await;
    let uri = format!("/api/session/{id}/metrics");
    let records = serde_json::to_value(ahp_core::catalog::example_metric_records()).unwrap();
    let (status, body) = call(
        &app,
        Method::PUT,
        &uri,
        Some(json!({"expected_revision": 1, "metrics": records})),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["revision"], 2);
    assert_eq!(body["evidence"].as_object().unwrap().len(), 9);
    assert_eq!(body["unattached"], json!([]));

    let (status, body) = call(&app, Method::GET, &uri, None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["metrics"].as_array().unwrap().len(), 9);
    assert_eq!(
        body["evidence"]["Goal/Performance/Escalation"][0]["values"]["NEW"]["rate"],
        1.0
    );

    let bad =
        json!([{"attribute": "Nope", "metric_name": "m", "kind": "SUCCESS_RATE", "values": {"OLD": {"rate": 0.5}}}]);
    let (status, body) = call(
        &app,
        Method::PUT,
        &uri,
        Some(json!({"expected_revision": 2, "metrics": bad})),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "UNKNOWN_ATTRIBUTE");
}

#[tokio::test]
async fn metrics_accept_csv() {
    let app = new_app();
    let id = session_with_model(&app).await;
    let mut csv = Vec::new();
    ahp_core::catalog::write_metrics_csv(&ahp_core::catalog::example_metric_records(), &mut csv).unwrap();
    let (status, body) = call(
        &app,
        Method::PUT,
        &format!("/api/session/{id}/metrics"),
        Some(json!({"expected_revision": 1, "csv": String::from_utf8(csv).unwrap()})),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["metrics"].as_array().unwrap().len(), 9);
}

#[tokio::test]
async fn catalog_filters() {
    let app = new_app();
    let (status, body) = call(&app, Method::GET, "/api/catalog", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["count"], 38);

    let (status, body) = call(&app, Method::GET, "/api/catalog?category=Accessibility", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["count"], 3);
    let names: Vec<&str> = body["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["attribute"].as_str().unwrap())
        .collect();
    assert!(names.iter().any(|n| n.starts_with("Meets neurodiverse needs")));

    let (status, body) = call(
        &app,
        Method::GET,
        "/api/catalog?dimension=EFFICIENCY&keyword=robust",
        None,
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["count"], 2);

    for bad in ["/api/catalog?category=Bogus", "/api/catalog?colour=red"] {
        let (status, body) = call(&app, Method::GET, bad, None).await;
        assert_eq!(status, StatusCode::BAD_REQUEST);
        assert_eq!(body["code"], "BAD_FILTER");
    }
}

#[tokio::test]
async fn unknown_route_is_json_404() {
    let (status, body) = call(&new_app(), Method::GET, "/api/nothing", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "NOT_FOUND");
}

#[tokio::test]
async fn ui_directory_is_served() {
    let dir = std::env::temp_dir().join(format!("ahp-ui-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("index.html"), "<h1>ahp</h1>").unwrap();
    let app = app(Arc::new(SessionStore::new()), Some(dir.clone()));
    let (status, body) = call(&app, Method::GET, "/index.html", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, Value::String("<h1>ahp</h1>".into()));
    let (status, _) = call(&app, Method::GET, "/api/health", None).await;
    assert_eq!(status, StatusCode::OK);
    std::fs::remove_dir_all(dir).unwrap();
}

#[tokio::test]
async fn concurrent_writers_get_one_winner() {
    let app = new_app();
    let id = new_session(&app).await;
    let uri = format!("/api/session/{id}/model");
    let attempts = (0..8).map(|_| {
        let app = app.clone();
        let uri = uri.clone();
        tokio::spawn(async move {
            call(
                &app,
                Method::PUT,
                &uri,
                Some(json!({"expected_revision": 0, "text": MODEL})),
            )
            .await
            .0
        })
    });
    let mut statuses = Vec::new();
    for attempt in attempts {
        statuses.push(attempt.await.unwrap());
    }
    assert_eq!(statuses.iter().filter(|s| **s == StatusCode::OK).count(), 1);
    assert_eq!(statuses.iter().filter(|s| **s == StatusCode::CONFLICT).count(), 7);
}

#[test]
fn snapshot_roundtrip() {
    let store = SessionStore::new();
    let id = store.create();
    store.get(&id).unwrap().lock().unwrap().model = Some(ahp_core::parse_model(MODEL).unwrap());
    let snapshot = store.snapshot();
    let text = serde_json::to_string(&snapshot).unwrap();
    let restored = SessionStore::restore(serde_json::from_str(&text).unwrap());
    assert_eq!(restored.snapshot(), snapshot);
}
