use axum::body::Bytes;
use axum::extract::{FromRequest, Multipart, Request, State};
use axum::http::header::{CONTENT_DISPOSITION, CONTENT_TYPE};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};

use arsip_core::{Category, DocId, DocumentMeta, DocumentRecord, Page, Upload};

use crate::error::{ApiError, Result};
use crate::extract::{parse_json, ApiPath, ApiQuery, Auth, Reader};
use crate::AppState;

const MAX_PAGE: usize = 500;

#[derive(Deserialize)]
pub struct PageParams {
    offset: Option<usize>,
    limit: Option<usize>,
}

#[derive(Serialize)]
pub struct Listing {
    category: Category,
    offset: usize,
    limit: usize,
    documents: Vec<DocumentRecord>,
}

pub async fn explore(
    State(state): State<AppState>,
    _reader: Reader,
    ApiPath(label): ApiPath<String>,
    ApiQuery(params): ApiQuery<PageParams>,
) -> Result<Json<Listing>> {
    let category: Category = label.parse()?;
    let page = Page::new(
        params.offset.unwrap_or(0),
        params.limit.unwrap_or(Page::DEFAULT_LIMIT).min(MAX_PAGE),
    );
    let documents = state.archive.list_by_category(category, page);
    Ok(Json(Listing { category, offset: page.offset, limit: page.limit, documents }))
}

pub async fn get_one(
    State(state): State<AppState>,
    _reader: Reader,
    ApiPath(id): ApiPath<DocId>,
) -> Result<Json<DocumentRecord>> {
    Ok(Json(state.archive.get_document(id)?))
}

fn content_disposition(file_name: &str) -> HeaderValue {
    let safe: String = file_name
        .chars()
        .map(|c| if c.is_ascii_graphic() && c != '"' && c != '\\' || c == ' ' { c } else { '_' })
        .collect();
    HeaderValue::from_str(&format!("inline; filename=\"{safe}\"")).unwrap_or(HeaderValue::from_static("inline"))
}

pub async fn file(
    State(state): State<AppState>,
    _reader: Reader,
    ApiPath(id): ApiPath<DocId>,
) -> Result<Response> {
    let archive = state.archive.clone();
    let (record, bytes) = tokio::task::spawn_blocking(move || {
        let record = archive.get_document(id)?;
        let bytes = archive.read_blob(id)?;
        Ok::<_, arsip_core::StoreError>((record, bytes))
    })
    .await??;
    let content_type = HeaderValue::from_str(&record.content_type)
        .unwrap_or(HeaderValue::from_static("application/octet-stream"));
    Ok((
        [(CONTENT_TYPE, content_type), (CONTENT_DISPOSITION, content_disposition(&record.file_name))],
        bytes,
    )
        .into_response())
}

fn guess_content_type(file_name: &str) -> &'static str {
    let ext = file_name.rsplit_once('.').map(|(_, e)| e.to_ascii_lowercase());
    match ext.as_deref() {
        Some("pdf") => "application/pdf",
        Some("png") => "image/png",
        Some("jpg" | "jpeg") => "image/jpeg",
        _ => "application/octet-stream",
    }
}

fn multipart_error(e: axum::extract::multipart::MultipartError) -> ApiError {
    ApiError::bad_request(format!("malformed multipart body: {}", e.body_text()))
}

fn missing(field: &str) -> ApiError {
    ApiError::new(StatusCode::BAD_REQUEST, "validation", format!("missing form field {field:?}"))
}

/// Reads the five upload parts: perihal, no_surat, deskripsi, kategori, file.
async fn read_upload(mut form: Multipart) -> Result<(DocumentMeta, Upload)> {
    let (mut perihal, mut no_surat, mut deskripsi, mut kategori, mut upload) = (None, None, None, None, None);
    while let Some(field) = form.next_field().await.map_err(multipart_error)? {
        let name = field.name().unwrap_or_default().to_string();
        match name.as_str() {
            "file" => {
                let file_name = field.file_name().unwrap_or("upload").to_string();
                let content_type = field
                    .content_type()
                    .filter(|ct| !ct.is_empty() && *ct != "application/octet-stream")
                    .map(str::to_string)
                    .unwrap_or_else(|| guess_content_type(&file_name).to_string());
                let bytes = field.bytes().await.map_err(multipart_error)?.to_vec();
                upload = Some(Upload { file_name, content_type, bytes });
            }
            "perihal" | "no_surat" | "deskripsi" | "kategori" => {
                let text = field.text().await.map_err(multipart_error)?;
                let slot = match name.as_str() {
                    "perihal" => &mut perihal,
                    "no_surat" => &mut no_surat,
                    "deskripsi" => &mut deskripsi,
                    _ => &mut kategori,
                };
                *slot = Some(text);
            }
            other => tracing::debug!(field = other, "ignoring unknown form field"),
        }
    }
    let kategori: Category = kategori.ok_or_else(|| missing("kategori"))?.trim().parse()?;
    let meta = DocumentMeta {
        perihal: perihal.ok_or_else(|| missing("perihal"))?,
        no_surat: no_surat.ok_or_else(|| missing("no_surat"))?,
        deskripsi: deskripsi.unwrap_or_default(),
        kategori,
    };
    Ok((meta, upload.ok_or_else(|| missing("file"))?))
}

pub async fn create(
    State(state): State<AppState>,
    auth: Auth,
    request: Request,
) -> Result<(StatusCode, Json<DocumentRecord>)> {
    auth.require_admin()?;
    let form = Multipart::from_request(request, &state)
        .await
        .map_err(|e| ApiError::bad_request(e.body_text()))?;
    let (meta, upload) = read_upload(form).await?;
    let archive = state.archive.clone();
    let record = tokio::task::spawn_blocking(move || archive.create_document(&meta, upload, &auth.0)).await??;
    tracing::info!(id = %record.id, kategori = %record.kategori, "document created");
    Ok((StatusCode::CREATED, Json(record)))
}

#[derive(Deserialize)]
struct UpdateBody {
    perihal: String,
    no_surat: String,
    #[serde(default)]
    deskripsi: String,
    kategori: String,
}

pub async fn update(
    State(state): State<AppState>,
    auth: Auth,
    ApiPath(id): ApiPath<DocId>,
    body: Bytes,
) -> Result<Json<DocumentRecord>> {
    auth.require_admin()?;
    let body: UpdateBody = parse_json(&body)?;
    let meta = DocumentMeta {
        kategori: body.kategori.trim().parse()?,
        perihal: body.perihal,
        no_surat: body.no_surat,
        deskripsi: body.deskripsi,
    };
    let archive = state.archive.clone();
    let record = tokio::task::spawn_blocking(move || archive.update_document(id, &meta, &auth.0)).await??;
    Ok(Json(record))
}

pub async fn delete(
    State(state): State<AppState>,
    auth: Auth,
    ApiPath(id): ApiPath<DocId>,
) -> Result<Json<serde_json::Value>> {
    auth.require_admin()?;
    let archive = state.archive.clone();
    tokio::task::spawn_blocking(move || archive.delete_document(id, &auth.0)).await??;
    Ok(Json(serde_json::json!({ "deleted": id })))
}
