//! HTTP API over the AHP engine: per-session model storage with optimistic
//! revision checks, analysis, what-if previews and the attribute catalog.
//!
//! | route | |
//! |---|---|
//! | `GET /api/health` | liveness |
//! | `GET /api/session` | create a session |
//! | `GET/PUT /api/session/{id}/model` | read or replace the model |
//! | `POST /api/session/{id}/analyze` | full analysis document |
//! | `POST /api/session/{id}/whatif` | preview one changed judgment |
//! | `GET/PUT /api/session/{id}/metrics` | measured evidence |
//! | `GET /api/catalog` | attribute catalog, filterable |

#![allow(clippy::result_large_err)]

mod error;
mod routes;
mod session;

use std::io;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::http::{StatusCode, Uri};
use axum::Router;
use tower_http::services::ServeDir;

pub use error::ApiError;
pub use routes::SessionCreated;
pub use session::{SessionState, SessionStore, Snapshot, SnapshotEntry};

pub const DEFAULT_PORT: u16 = 8080;

#[derive(Debug, Clone)]
pub struct ServeConfig {
    pub addr: SocketAddr,
    /// Directory of static UI assets served at `/`.
    pub ui_dir: Option<PathBuf>,
    /// Sessions are loaded from here at startup (when present) and written
    /// back on shutdown.
    pub snapshot: Option<PathBuf>,
}

/// The full application: API routes plus, optionally, static UI assets.
pub fn app(store: Arc<SessionStore>, ui_dir: Option<PathBuf>) -> Router {
    let router = routes::api_routes().with_state(store);
    match ui_dir {
        Some(dir) => router.fallback_service(ServeDir::new(dir)),
        None => router.fallback(not_found),
    }
}

async fn not_found(uri: Uri) -> ApiError {
    ApiError::new(
        StatusCode::NOT_FOUND,
        "NOT_FOUND",
        format!("no route for {}", uri.path()),
    )
}

fn load_snapshot(path: &PathBuf) -> io::Result<SessionStore> {
    match std::fs::read(path) {
        Ok(bytes) => {
            let snapshot: Snapshot = serde_json::from_slice(&bytes).map_err(io::Error::other)?;
            log::info!(
                "restored {} session(s) from {}",
                snapshot.sessions.len(),
                path.display()
            );
            Ok(SessionStore::restore(snapshot))
        }
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(SessionStore::new()),
        Err(e) => Err(e),
    }
}

/// Binds and serves until Ctrl-C.
pub async fn serve(config: ServeConfig) -> io::Result<()> {
    let store = Arc::new(match &config.snapshot {
        Some(path) => load_snapshot(path)?,
        None => SessionStore::new(),
    });
    let listener = tokio::net::TcpListener::bind(config.addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app(Arc::clone(&store), config.ui_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    if let Some(path) = &config.snapshot {
        let text = serde_json::to_vec_pretty(&store.snapshot()).map_err(io::Error::other)?;
        std::fs::write(path, text)?;
        log::info!("wrote {} session(s) to {}", store.len(), path.display());
    }
    Ok(())
}
