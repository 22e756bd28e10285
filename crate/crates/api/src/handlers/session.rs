use axum::body::Bytes;
use axum::extract::State;
use axum::http::header::AUTHORIZATION;
use axum::http::HeaderMap;
use axum::Json;
use serde::{Deserialize, Serialize};

use arsip_core::Role;

use crate::error::{ApiError, Result};
use crate::extract::{parse_json, Auth};
use crate::AppState;

#[derive(Deserialize)]
struct LoginRequest {
    username: String,
    password: String,
}

#[derive(Serialize)]
pub struct LoginResponse {
    token: String,
    role: Role,
    username: String,
    expires_at: chrono::DateTime<chrono::Utc>,
}

#[derive(Serialize)]
pub struct Me {
    username: String,
    role: Role,
}

pub async fn login(State(state): State<AppState>, body: Bytes) -> Result<Json<LoginResponse>> {
    let req: LoginRequest = parse_json(&body)?;
    let users = state.users.clone();
    let principal = tokio::task::spawn_blocking(move || users.verify(&req.username, &req.password))
        .await?
        .ok_or_else(|| ApiError::new(axum::http::StatusCode::UNAUTHORIZED, "unauthorized", "invalid credentials"))?;
    let session = state.sessions.issue(principal.clone());
    tracing::info!(user = %principal.username, role = %principal.role, "login");
    Ok(Json(LoginResponse {
        token: session.token,
        role: principal.role,
        username: principal.username,
        expires_at: session.expires_at,
    }))
}

pub async fn logout(State(state): State<AppState>, _auth: Auth, headers: HeaderMap) -> Json<serde_json::Value> {
    if let Some(token) = headers
        .get(AUTHORIZATION)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.strip_prefix("Bearer "))
    {
        state.sessions.revoke(token.trim());
    }
    Json(serde_json::json!({ "status": "ok" }))
}

pub async fn me(Auth(p): Auth) -> Json<Me> {
    Json(Me { username: p.username, role: p.role })
}
