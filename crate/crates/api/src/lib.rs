//! HTTP/JSON façade over the archive.
//!
//! | Method | Path | Access |
//! |---|---|---|
//! | GET | `/api/health` | anyone |
//! | POST | `/api/login` | anyone (credentials) |
//! | POST | `/api/logout`, GET `/api/me` | session |
//! | GET | `/api/explore/{category}` | session, or anyone with public reads |
//! | GET | `/api/search?q=&category=` | session, or anyone with public reads |
//! | GET | `/api/documents/{id}`, `/api/documents/{id}/file` | session, or anyone with public reads |
//! | POST | `/api/documents` (multipart) | Admin |
//! | PUT, DELETE | `/api/documents/{id}` | Admin |
//!
//! Everything outside `/api` is served from the optional static directory.

pub mod error;
pub mod extract;
mod handlers;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::DefaultBodyLimit;
use axum::routing::{get, post};
use axum::Router;
use tower_http::services::{ServeDir, ServeFile};

use arsip_core::auth::{AuthError, SessionStore, UserDirectory, DEFAULT_SESSION_TTL};
use arsip_core::{Archive, BudgetPolicy, Clock, StoreError, SystemClock};

pub use error::ApiError;

/// Upper bound on request bodies (uploads included).
pub const MAX_BODY_BYTES: usize = 32 * 1024 * 1024;

#[derive(Clone)]
pub struct AppState {
    pub archive: Arc<Archive>,
    pub users: Arc<UserDirectory>,
    pub sessions: Arc<SessionStore>,
    pub public_read: bool,
}

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub addr: SocketAddr,
    pub data_dir: PathBuf,
    pub session_ttl: chrono::Duration,
    pub public_read: bool,
    pub policy: BudgetPolicy,
    pub static_dir: Option<PathBuf>,
}

impl ServerConfig {
    pub fn new(addr: SocketAddr, data_dir: impl Into<PathBuf>) -> Self {
        Self {
            addr,
            data_dir: data_dir.into(),
            session_ttl: DEFAULT_SESSION_TTL,
            public_read: false,
            policy: BudgetPolicy::default(),
            static_dir: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Auth(#[from] AuthError),
    #[error("cannot listen on {addr}: {source}")]
    Bind { addr: SocketAddr, source: std::io::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl AppState {
    /// Loads the archive and user accounts from `config.data_dir`.
    pub fn load(config: &ServerConfig, clock: Arc<dyn Clock>) -> Result<Self, ServeError> {
        let archive = Archive::open_with_clock(&config.data_dir, config.policy, clock.clone())?;
        let users = UserDirectory::open(&config.data_dir)?;
        Ok(Self {
            archive: Arc::new(archive),
            users: Arc::new(users),
            sessions: Arc::new(SessionStore::new(config.session_ttl, clock)),
            public_read: config.public_read,
        })
    }
}

pub fn router(state: AppState, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/health", get(handlers::health))
        .route("/login", post(handlers::session::login))
        .route("/logout", post(handlers::session::logout))
        .route("/me", get(handlers::session::me))
        .route("/explore/{category}", get(handlers::documents::explore))
        .route("/search", get(handlers::search::search))
        .route("/documents", post(handlers::documents::create))
        .route(
            "/documents/{id}",
            get(handlers::documents::get_one)
                .put(handlers::documents::update)
                .delete(handlers::documents::delete),
        )
        .route("/documents/{id}/file", get(handlers::documents::file))
        .fallback(handlers::not_found)
        .method_not_allowed_fallback(handlers::method_not_allowed);

    let app = Router::new()
        .nest("/api", api)
        .layer(DefaultBodyLimit::max(MAX_BODY_BYTES));
    let app = match static_dir {
        Some(dir) => {
            let index = dir.join("index.html");
            app.fallback_service(ServeDir::new(dir).fallback(ServeFile::new(index)))
        }
        None => app.fallback(handlers::not_found),
    };
    app.with_state(state)
}

/// Binds `config.addr` and serves until ctrl-c.
pub async fn serve(config: ServerConfig) -> Result<(), ServeError> {
    let state = AppState::load(&config, Arc::new(SystemClock))?;
    let listener = tokio::net::TcpListener::bind(config.addr)
        .await
        .map_err(|source| ServeError::Bind { addr: config.addr, source })?;
    tracing::info!(addr = %listener.local_addr()?, data_dir = %config.data_dir.display(), "listening");
    axum::serve(listener, router(state, config.static_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
