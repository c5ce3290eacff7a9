#![allow(dead_code)]

use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use swarmbench_service::{app, AppState};
use tower::ServiceExt;

pub fn router(workers: usize) -> Router {
    app(Arc::new(AppState::new(workers)), None)
}

pub async fn send(app: &Router, method: &str, uri: &str, body: Option<(&str, Vec<u8>)>) -> (StatusCode, Vec<u8>) {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some((content_type, bytes)) => {
            req = req.header(header::CONTENT_TYPE, content_type);
            Body::from(bytes)
        }
        None => Body::empty(),
    };
    let response = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, bytes)
}

pub async fn json(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let body = body.map(|v| ("application/json", serde_json::to_vec(&v).unwrap()));
    let (status, bytes) = send(app, method, uri, body).await;
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, value)
}

pub async fn submit(app: &Router, request: Value) -> String {
    let (status, body) = json(app, "POST", "/api/v1/runs", Some(request)).await;
    assert_eq!(status, StatusCode::ACCEPTED, "{body}");
    body["run_id"].as_str().unwrap().to_string()
}

pub fn is_terminal(status: &str) -> bool {
    matches!(status, "done" | "cancelled" | "failed")
}

pub async fn wait_terminal(app: &Router, id: &str) -> Value {
    let deadline = Instant::now() + Duration::from_secs(60);
    loop {
        let (status, body) = json(app, "GET", &format!("/api/v1/runs/{id}"), None).await;
        assert_eq!(status, StatusCode::OK);
        if is_terminal(body["status"].as_str().unwrap()) {
            return body;
        }
        assert!(Instant::now() < deadline, "run {id} did not finish");
        tokio::time::sleep(Duration::from_millis(2)).await;
    }
}
