//! HTTP API over the swarmbench engine.
//!
//! Runs are submitted as JSON, queued FIFO onto a fixed pool of worker
//! threads, and polled incrementally with `GET /api/v1/runs/{id}?from=K`.
//! Everything lives in memory.

use std::path::Path;
use std::sync::Arc;

use axum::Router;
use tower_http::services::{ServeDir, ServeFile};

pub mod api;
pub mod pool;
pub mod store;

pub use api::{AppState, MAX_UPLOAD_BYTES};
pub use pool::{workers_from_env, DEFAULT_WORKERS};
pub use store::{RunStatus, RUN_CAPACITY};

pub const DEFAULT_LISTEN: &str = "127.0.0.1:8750";

/// The API router, plus static files from `static_dir` under `/` when that
/// directory exists.
pub fn app(state: Arc<AppState>, static_dir: Option<&Path>) -> Router {
    let router = api::routes(state);
    match static_dir {
        Some(dir) if dir.is_dir() => {
            let index = dir.join("index.html");
            router.fallback_service(ServeDir::new(dir).not_found_service(ServeFile::new(index)))
        }
        _ => router,
    }
}
