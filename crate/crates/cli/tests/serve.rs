use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use qslice::Bounds;
use qslice_cli::serve::{router, SessionStore};
use serde_json::{json, Value};
use tower::ServiceExt;

const S1: &str = "(1,0),(2,1),(3,2),(5,0),(6,1),(4,2)";

fn app() -> Router {
    router(Arc::new(SessionStore::new(Bounds::default())))
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string()))
            .unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()))
    };
    (status, value)
}

async fn session(app: &Router) -> String {
    let (status, body) = call(
        app,
        "POST",
        "/session",
        Some(json!({ "fixture": "a4-auslander", "range": [-6, 10], "slice": S1 })),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    body["id"].as_str().unwrap().to_string()
}

fn set(v: &Value) -> Vec<String> {
    let mut out: Vec<String> = v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect();
    out.sort();
    out
}

fn labels(text: &str) -> Vec<String> {
    let mut out: Vec<String> = text.split("),").map(|s| s.trim_end_matches(')').to_string() + ")").collect();
    out.sort();
    out
}

#[tokio::test]
async fn create_defaults_to_the_nice_grading_slice() {
    let app = app();
    let (status, body) = call(&app, "POST", "/session", Some(json!({ "fixture": "a4-auslander" }))).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(body["complete"], true);
    assert_eq!(body["side"], "tau");
    assert_eq!(body["slice"].as_array().unwrap().len(), 6);
}

#[tokio::test]
async fn mutate_then_undo() {
    let app = app();
    let id = session(&app).await;
    let (status, body) = call(
        &app,
        "POST",
        &format!("/session/{id}/mutate"),
        Some(json!({ "vertex": "(5,0)", "dir": "plus" })),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(set(&body["slice"]), labels("(1,0),(2,1),(3,2),(4,2),(5,3),(6,1)"));
    assert_eq!(body["history"].as_array().unwrap().len(), 1);

    let (status, body) = call(&app, "POST", &format!("/session/{id}/undo"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(set(&body["slice"]), labels(S1));

    let (status, body) = call(&app, "POST", &format!("/session/{id}/undo"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "conflict");
}

#[tokio::test]
async fn state_and_window() {
    let app = app();
    let id = session(&app).await;
    let (status, body) = call(&app, "GET", &format!("/session/{id}/state"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(set(&body["slice"]), labels(S1));
    let (status, body) = call(&app, "GET", &format!("/session/{id}/window?lo=0&hi=2"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["vertices"].as_array().unwrap().len(), 18);
    assert_eq!(body["components"], 3);
}

#[tokio::test]
async fn hammock_and_double_slice() {
    let app = app();
    let id = session(&app).await;
    let (status, body) = call(&app, "GET", &format!("/session/{id}/hammock?vertex=(1,0)&dir=forward"), None).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let entries: Vec<String> = body["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["vertex"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(entries, ["(1,0)", "(2,1)", "(3,2)"]);

    let (status, body) = call(&app, "GET", &format!("/session/{id}/double-slice?dir=forward"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(
        set(&body["vertices"]),
        labels("(1,0),(2,1),(3,2),(1,3),(2,4),(5,0),(4,2),(5,3),(6,1),(6,4)")
    );
}

#[tokio::test]
async fn classification_is_cached() {
    let app = app();
    let id = session(&app).await;
    let (status, first) = call(&app, "GET", &format!("/session/{id}/classification"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(first["verdict"], "Finite, Coxeter index 2");
    let (_, second) = call(&app, "GET", &format!("/session/{id}/classification"), None).await;
    assert_eq!(first, second);
}

#[tokio::test]
async fn error_statuses() {
    let app = app();
    let (status, _) = call(&app, "GET", "/session/nope/state", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let id = session(&app).await;
    let (status, _) = call(
        &app,
        "POST",
        &format!("/session/{id}/mutate"),
        Some(json!({ "vertex": "(5,99)", "dir": "plus" })),
    )
    .await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (status, body) = call(
        &app,
        "POST",
        &format!("/session/{id}/mutate"),
        Some(json!({ "vertex": "(2,1)", "dir": "plus" })),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT, "{body}");
    assert!(body["witness"].is_string());

    let (status, body) = call(
        &app,
        "POST",
        "/session",
        Some(json!({ "fixture": "a4-auslander", "range": [0, 2], "slice": "(1,0),(2,1),(3,2),(5,0),(6,1),(4,2)" })),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    let narrow = body["id"].as_str().unwrap().to_string();
    let (status, body) = call(
        &app,
        "POST",
        &format!("/session/{narrow}/mutate"),
        Some(json!({ "vertex": "(5,0)", "dir": "plus" })),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{body}");
    assert!(body["required"].is_array());

    let (status, _) = call(&app, "POST", "/session", Some(json!({}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}
