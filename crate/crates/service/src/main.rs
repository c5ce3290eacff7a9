use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use clap::Parser;
use log::info;
use swarmbench_service::{app, workers_from_env, AppState, DEFAULT_LISTEN};

#[derive(Parser, Debug)]
#[command(name = "swarmbench-serve", version, about = "HTTP API for swarmbench runs")]
struct Args {
    #[arg(long, default_value = DEFAULT_LISTEN)]
    listen: SocketAddr,
    /// Directory served under `/` (the web UI bundle), if it exists.
    #[arg(long, default_value = "webui/dist")]
    static_dir: PathBuf,
}

#[tokio::main]
async fn main() -> std::io::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = Args::parse();
    let state = Arc::new(AppState::new(workers_from_env()));
    info!("{} workers", state.workers());
    if args.static_dir.is_dir() {
        info!("serving {} under /", args.static_dir.display());
    }
    let listener = tokio::net::TcpListener::bind(args.listen).await?;
    info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app(state, Some(&args.static_dir)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
