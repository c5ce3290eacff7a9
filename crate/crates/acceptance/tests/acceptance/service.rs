use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use swarmbench_core::RandomStream;
use swarmbench_service::{app, AppState};
use tower::ServiceExt;

const LEGAL: [(&str, &str); 5] = [
    ("pending", "running"),
    ("pending", "cancelled"),
    ("running", "done"),
    ("running", "cancelled"),
    ("running", "failed"),
];

async fn call(app: &Router, method: &str, uri: &str, body: Option<&Value>) -> (StatusCode, Vec<u8>) {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json");
    let body = body.map_or_else(Body::empty, |v| Body::from(serde_json::to_vec(v).unwrap()));
    let response = app.clone().oneshot(request.body(body).unwrap()).await.unwrap();
    let status = response.status();
    (
        status,
        response.into_body().collect().await.unwrap().to_bytes().to_vec(),
    )
}

async fn call_json(app: &Router, method: &str, uri: &str, body: Option<&Value>) -> Result<(StatusCode, Value), String> {
    let (status, bytes) = call(app, method, uri, body).await;
    let value = serde_json::from_slice(&bytes).map_err(|e| format!("{uri}: {e}"))?;
    Ok((status, value))
}

fn status_of(body: &Value) -> String {
    body["status"].as_str().unwrap_or_default().to_string()
}

fn terminal(status: &str) -> bool {
    matches!(status, "done" | "cancelled" | "failed")
}

async fn submit(app: &Router, request: &Value) -> Result<String, String> {
    let (status, body) = call_json(app, "POST", "/api/v1/runs", Some(request)).await?;
    if status != StatusCode::ACCEPTED {
        return Err(format!("submit answered {status}: {body}"));
    }
    Ok(body["run_id"].as_str().unwrap_or_default().to_string())
}

async fn settle(app: &Router, id: &str) -> Result<Value, String> {
    let deadline = Instant::now() + Duration::from_secs(60);
    loop {
        let (_, body) = call_json(app, "GET", &format!("/api/v1/runs/{id}"), None).await?;
        if terminal(&status_of(&body)) {
            return Ok(body);
        }
        if Instant::now() > deadline {
            return Err(format!("{id} never finished"));
        }
        tokio::time::sleep(Duration::from_millis(1)).await;
    }
}

fn random_request(rng: &mut RandomStream) -> Value {
    let (algorithm, problem) = [
        ("pso", "sphere"),
        ("abc", "rosenbrock"),
        ("fa", "ackley"),
        ("aco", "tsp-circle8"),
        ("iwd", "tsp-square4"),
    ][rng.below(5)];
    json!({
        "algorithm": algorithm, "problem_id": problem, "seed": rng.next_u64() >> 12,
        "iterations": 4 + rng.below(150), "population": 4 + rng.below(8), "stride": 1 + rng.below(4),
    })
}

/// Returns the number of runs whose histories were checked.
async fn status_machine() -> Result<usize, String> {
    let mut rng = RandomStream::new(9001);
    let mut checked = 0;
    for sequence in 0..500 {
        let app = app(Arc::new(AppState::new(2)), None);
        let mut runs: Vec<(String, Vec<String>)> = Vec::new();
        for _ in 0..2 + rng.below(10) {
            match rng.below(4) {
                0 => runs.push((submit(&app, &random_request(&mut rng)).await?, vec!["pending".into()])),
                1 if !runs.is_empty() => {
                    let k = rng.below(runs.len());
                    let (_, body) = call_json(&app, "GET", &format!("/api/v1/runs/{}", runs[k].0), None).await?;
                    runs[k].1.push(status_of(&body));
                }
                2 if !runs.is_empty() => {
                    let k = rng.below(runs.len());
                    let (code, body) =
                        call_json(&app, "POST", &format!("/api/v1/runs/{}/cancel", runs[k].0), None).await?;
                    let reported = status_of(&body);
                    let coherent = match code {
                        StatusCode::OK => reported == "cancelled" || reported == "running",
                        StatusCode::CONFLICT => terminal(&reported),
                        _ => false,
                    };
                    if !coherent {
                        return Err(format!("sequence {sequence}: cancel answered {code} with {reported}"));
                    }
                    runs[k].1.push(reported);
                }
                _ => tokio::task::yield_now().await,
            }
        }
        for (id, observed) in &mut runs {
            let body = settle(&app, id).await?;
            observed.push(status_of(&body));
            observed.dedup();
            let history: Vec<String> = body["history"]
                .as_array()
                .into_iter()
                .flatten()
                .filter_map(|s| s.as_str())
                .map(String::from)
                .collect();
            let legal = history.first().map(String::as_str) == Some("pending")
                && history.last().is_some_and(|s| terminal(s))
                && history
                    .windows(2)
                    .all(|p| LEGAL.contains(&(p[0].as_str(), p[1].as_str())));
            let mut rest = history.iter();
            let consistent = observed.iter().all(|o| rest.any(|h| h == o));
            if !legal || !consistent {
                return Err(format!(
                    "sequence {sequence}, {id}: history {history:?}, observed {observed:?}"
                ));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

async fn concurrent_runs() -> Result<usize, String> {
    let app = app(Arc::new(AppState::new(4)), None);
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let specs = [
        ("pso", "sphere", 11),
        ("pso", "rastrigin", 12),
        ("abc", "sphere", 13),
        ("abc", "rosenbrock", 14),
        ("fa", "ackley", 15),
        ("fa", "sphere", 16),
        ("aco", "tsp-rand10", 17),
        ("iwd", "tsp-rand12", 18),
    ];
    let mut ids = Vec::new();
    for (algorithm, problem, seed) in specs {
        let request = json!({"algorithm": algorithm, "problem_id": problem, "seed": seed,
            "iterations": 100, "population": 16, "stride": 2});
        ids.push(submit(&app, &request).await?);
    }
    let mut matched = 0;
    for ((algorithm, problem, seed), id) in specs.iter().zip(&ids) {
        let body = settle(&app, id).await?;
        if status_of(&body) != "done" {
            return Err(format!("{id} ended {}", status_of(&body)));
        }
        let (_, served) = call(&app, "GET", &format!("/api/v1/runs/{id}/trace"), None).await;
        let out = dir.path().join(format!("{id}.jsonl"));
        let args = [
            "swarmbench".to_string(),
            "run".into(),
            format!("--algorithm={algorithm}"),
            format!("--problem={problem}"),
            format!("--seed={seed}"),
            "--iterations=100".into(),
            "--population=16".into(),
            "--stride=2".into(),
            format!("--out={}", out.display()),
        ];
        if swarmbench_cli::run_cli(args, &mut Vec::new(), &mut Vec::new()) != 0 {
            return Err(format!("CLI failed for {algorithm} on {problem}"));
        }
        if std::fs::read(&out).map_err(|e| e.to_string())? == served {
            matched += 1;
        }
    }
    Ok(matched)
}

pub fn contract() -> (bool, String) {
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .worker_threads(4)
        .enable_all()
        .build()
        .unwrap();
    runtime.block_on(async {
        let machine = status_machine().await;
        let parity = concurrent_runs().await;
        match (machine, parity) {
            (Ok(runs), Ok(8)) => (
                true,
                format!(
                    "500 request sequences ({runs} runs) with legal histories; 8/8 concurrent traces equal the CLI"
                ),
            ),
            (Ok(runs), Ok(n)) => (false, format!("{runs} runs legal, but only {n}/8 traces equal the CLI")),
            (Err(e), _) | (_, Err(e)) => (false, e),
        }
    })
}
