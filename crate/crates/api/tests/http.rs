use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use chrono::{Duration, TimeZone, Utc};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use arsip_api::{router, AppState, ServerConfig};
use arsip_core::{ManualClock, Role};

const BOUNDARY: &str = "arsip-test-boundary";

struct Harness {
    _dir: tempfile::TempDir,
    app: Router,
    clock: Arc<ManualClock>,
}

struct Reply {
    status: StatusCode,
    headers: axum::http::HeaderMap,
    bytes: Vec<u8>,
}

impl Reply {
    fn json(&self) -> Value {
        serde_json::from_slice(&self.bytes).unwrap_or(Value::Null)
    }
}

fn harness_with(public_read: bool, static_dir: Option<std::path::PathBuf>) -> Harness {
    let dir = tempfile::tempdir().unwrap();
    let clock = Arc::new(ManualClock::new(Utc.with_ymd_and_hms(2016, 4, 1, 8, 0, 0).unwrap()));
    let mut config = ServerConfig::new("127.0.0.1:0".parse().unwrap(), dir.path());
    config.public_read = public_read;
    let state = AppState::load(&config, clock.clone()).unwrap();
    state.users.add("admin", "admin-pw", Role::Admin).unwrap();
    state.users.add("staff", "staff-pw", Role::Staff).unwrap();
    Harness { _dir: dir, app: router(state, static_dir), clock }
}

fn harness() -> Harness {
    harness_with(false, None)
}

fn multipart(fields: &[(&str, &str)], file: Option<(&str, &str, &[u8])>) -> Vec<u8> {
    let mut body = Vec::new();
    for (name, value) in fields {
        body.extend(format!("--{BOUNDARY}\r\nContent-Disposition: form-data; name=\"{name}\"\r\n\r\n{value}\r\n").bytes());
    }
    if let Some((file_name, content_type, bytes)) = file {
        body.extend(
            format!(
                "--{BOUNDARY}\r\nContent-Disposition: form-data; name=\"file\"; filename=\"{file_name}\"\r\nContent-Type: {content_type}\r\n\r\n"
            )
            .bytes(),
        );
        body.extend_from_slice(bytes);
        body.extend(b"\r\n");
    }
    body.extend(format!("--{BOUNDARY}--\r\n").bytes());
    body
}

fn doc_form(perihal: &str, no_surat: &str, kategori: &str) -> Vec<u8> {
    multipart(
        &[("perihal", perihal), ("no_surat", no_surat), ("deskripsi", "arsip kecamatan"), ("kategori", kategori)],
        Some(("surat.pdf", "application/pdf", b"%PDF-1.4 test")),
    )
}

impl Harness {
    async fn send(&self, method: Method, uri: &str, token: Option<&str>, body: Option<(&str, Vec<u8>)>) -> Reply {
        let mut req = Request::builder().method(method).uri(uri);
        if let Some(t) = token {
            req = req.header(header::AUTHORIZATION, format!("Bearer {t}"));
        }
        let req = match body {
            Some((ct, bytes)) => req.header(header::CONTENT_TYPE, ct).body(Body::from(bytes)).unwrap(),
            None => req.body(Body::empty()).unwrap(),
        };
        let res = self.app.clone().oneshot(req).await.unwrap();
        let status = res.status();
        let headers = res.headers().clone();
        let bytes = res.into_body().collect().await.unwrap().to_bytes().to_vec();
        Reply { status, headers, bytes }
    }

    async fn get(&self, uri: &str, token: Option<&str>) -> Reply {
        self.send(Method::GET, uri, token, None).await
    }

    async fn login(&self, user: &str, pw: &str) -> Reply {
        let body = json!({ "username": user, "password": pw }).to_string().into_bytes();
        self.send(Method::POST, "/api/login", None, Some(("application/json", body))).await
    }

    async fn token(&self, user: &str, pw: &str) -> String {
        let r = self.login(user, pw).await;
        assert_eq!(r.status, StatusCode::OK);
        r.json()["token"].as_str().unwrap().to_string()
    }

    async fn upload(&self, token: Option<&str>, form: Vec<u8>) -> Reply {
        let ct = format!("multipart/form-data; boundary={BOUNDARY}");
        self.send(Method::POST, "/api/documents", token, Some((&ct, form))).await
    }

    async fn put(&self, uri: &str, token: Option<&str>, body: Value) -> Reply {
        self.send(Method::PUT, uri, token, Some(("application/json", body.to_string().into_bytes()))).await
    }
}

fn assert_envelope(r: &Reply, status: StatusCode) {
    assert_eq!(r.status, status, "{}", String::from_utf8_lossy(&r.bytes));
    let v = r.json();
    assert!(v["error"]["code"].is_string(), "{v}");
    assert!(v["error"]["message"].is_string(), "{v}");
}

#[tokio::test]
async fn login_flows() {
    let h = harness();
    let ok = h.login("admin", "admin-pw").await;
    assert_eq!(ok.status, StatusCode::OK);
    assert_eq!(ok.json()["role"], "Admin");
    assert!(ok.json()["token"].as_str().unwrap().len() >= 22);

    assert_eq!(h.login("staff", "staff-pw").await.json()["role"], "Staff");

    let wrong = h.login("admin", "nope").await;
    let unknown = h.login("ghost", "admin-pw").await;
    assert_envelope(&wrong, StatusCode::UNAUTHORIZED);
    assert_envelope(&unknown, StatusCode::UNAUTHORIZED);
    assert_eq!(wrong.json(), unknown.json(), "no hint which part failed");

    let malformed = h.send(Method::POST, "/api/login", None, Some(("application/json", b"{\"username\":".to_vec()))).await;
    assert_envelope(&malformed, StatusCode::BAD_REQUEST);
    let missing = h.send(Method::POST, "/api/login", None, Some(("application/json", b"{}".to_vec()))).await;
    assert_envelope(&missing, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn sessions_expire_and_logout_revokes() {
    let h = harness();
    let t = h.token("staff", "staff-pw").await;
    assert_eq!(h.get("/api/me", Some(&t)).await.json()["username"], "staff");
    h.clock.advance(Duration::hours(8));
    assert_envelope(&h.get("/api/me", Some(&t)).await, StatusCode::UNAUTHORIZED);
    assert_envelope(&h.get("/api/explore/Artikel", Some(&t)).await, StatusCode::UNAUTHORIZED);

    let t2 = h.token("staff", "staff-pw").await;
    assert_eq!(h.send(Method::POST, "/api/logout", Some(&t2), None).await.status, StatusCode::OK);
    assert_envelope(&h.get("/api/me", Some(&t2)).await, StatusCode::UNAUTHORIZED);
    assert_envelope(&h.get("/api/me", Some("garbage")).await, StatusCode::UNAUTHORIZED);
}

#[tokio::test]
async fn upload_rules() {
    let h = harness();
    let admin = h.token("admin", "admin-pw").await;
    let staff = h.token("staff", "staff-pw").await;

    let created = h.upload(Some(&admin), doc_form("Surat Pengantar", "470/1", "Dokumen Surat Keluar")).await;
    assert_eq!(created.status, StatusCode::CREATED);
    let rec = created.json();
    assert_eq!(rec["perihal"], "Surat Pengantar");
    assert_eq!(rec["kategori"], "Dokumen Surat Keluar");
    assert_eq!(rec["content_type"], "application/pdf");
    assert_eq!(rec["deleted"], false);

    assert_envelope(&h.upload(Some(&staff), doc_form("X", "9", "Artikel")).await, StatusCode::FORBIDDEN);
    assert_envelope(&h.upload(None, doc_form("X", "9", "Artikel")).await, StatusCode::UNAUTHORIZED);

    let dup = h.upload(Some(&admin), doc_form("Lain", "470/1", "Dokumen Surat Keluar")).await;
    assert_envelope(&dup, StatusCode::CONFLICT);
    assert_eq!(dup.json()["error"]["code"], "conflict");
    let other_root = h.upload(Some(&admin), doc_form("Lain", "470/1", "Dokumen Surat Masuk")).await;
    assert_eq!(other_root.status, StatusCode::CREATED);

    let bad_cat = h.upload(Some(&admin), doc_form("X", "1", "Foto")).await;
    assert_envelope(&bad_cat, StatusCode::BAD_REQUEST);
    assert_eq!(bad_cat.json()["error"]["code"], "invalid_category");

    let txt = multipart(
        &[("perihal", "X"), ("no_surat", "2"), ("kategori", "Artikel")],
        Some(("a.txt", "text/plain", b"hello")),
    );
    assert_eq!(h.upload(Some(&admin), txt).await.json()["error"]["code"], "validation");

    let png = multipart(
        &[("perihal", "Foto kegiatan"), ("no_surat", "3"), ("kategori", "Gambar")],
        Some(("a.png", "image/png", b"\x89PNG")),
    );
    assert_eq!(h.upload(Some(&admin), png).await.status, StatusCode::CREATED);

    let no_file = multipart(&[("perihal", "X"), ("no_surat", "4"), ("kategori", "Artikel")], None);
    assert_envelope(&h.upload(Some(&admin), no_file).await, StatusCode::BAD_REQUEST);

    let empty_file = multipart(
        &[("perihal", "X"), ("no_surat", "5"), ("kategori", "Artikel")],
        Some(("a.pdf", "application/pdf", b"")),
    );
    assert_envelope(&h.upload(Some(&admin), empty_file).await, StatusCode::BAD_REQUEST);

    let no_perihal = multipart(
        &[("perihal", " "), ("no_surat", "6"), ("kategori", "Artikel")],
        Some(("a.pdf", "application/pdf", b"x")),
    );
    assert_envelope(&h.upload(Some(&admin), no_perihal).await, StatusCode::BAD_REQUEST);

    let not_multipart = h.send(Method::POST, "/api/documents", Some(&admin), Some(("application/json", b"{}".to_vec()))).await;
    assert_envelope(&not_multipart, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn crud_round_trip() {
    let h = harness();
    let admin = h.token("admin", "admin-pw").await;
    let staff = h.token("staff", "staff-pw").await;
    let rec = h.upload(Some(&admin), doc_form("Kartu Keluarga", "12", "Artikel")).await.json();
    let id = rec["id"].as_u64().unwrap();

    let got = h.get(&format!("/api/documents/{id}"), Some(&staff)).await;
    assert_eq!(got.status, StatusCode::OK);
    assert_eq!(got.json(), rec);

    let file = h.get(&format!("/api/documents/{id}/file"), Some(&staff)).await;
    assert_eq!(file.status, StatusCode::OK);
    assert_eq!(file.bytes, b"%PDF-1.4 test");
    assert_eq!(file.headers[header::CONTENT_TYPE], "application/pdf");

    let upd = h
        .put(
            &format!("/api/documents/{id}"),
            Some(&admin),
            json!({"perihal": "Akta Kelahiran", "no_surat": "12", "deskripsi": "", "kategori": "Artikel"}),
        )
        .await;
    assert_eq!(upd.status, StatusCode::OK);
    assert_eq!(h.get(&format!("/api/documents/{id}"), Some(&staff)).await.json()["perihal"], "Akta Kelahiran");
    assert_eq!(h.get("/api/search?q=kelahiran", Some(&staff)).await.json()["hits"][0]["document_id"], id);
    assert_eq!(h.get("/api/search?q=keluarga", Some(&staff)).await.json()["hits"], json!([]));

    let bad_put = h.put(&format!("/api/documents/{id}"), Some(&admin), json!({"perihal": "x"})).await;
    assert_envelope(&bad_put, StatusCode::BAD_REQUEST);
    let bad_cat = h
        .put(
            &format!("/api/documents/{id}"),
            Some(&admin),
            json!({"perihal": "x", "no_surat": "1", "kategori": "Nope"}),
        )
        .await;
    assert_eq!(bad_cat.json()["error"]["code"], "invalid_category");

    assert_eq!(h.send(Method::DELETE, &format!("/api/documents/{id}"), Some(&admin), None).await.status, StatusCode::OK);
    assert_envelope(&h.send(Method::DELETE, &format!("/api/documents/{id}"), Some(&admin), None).await, StatusCode::NOT_FOUND);
    assert_envelope(&h.get(&format!("/api/documents/{id}"), Some(&staff)).await, StatusCode::NOT_FOUND);
    assert_envelope(&h.get(&format!("/api/documents/{id}/file"), Some(&staff)).await, StatusCode::NOT_FOUND);
    assert_envelope(&h.get("/api/documents/not-a-number", Some(&staff)).await, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn explore_listing() {
    let h = harness();
    let admin = h.token("admin", "admin-pw").await;
    let empty = h.get("/api/explore/Artikel", Some(&admin)).await;
    assert_eq!(empty.json()["documents"], json!([]));

    for i in 0..3 {
        h.clock.advance(Duration::minutes(1));
        h.upload(Some(&admin), doc_form("Artikel", &format!("A{i}"), "Artikel")).await;
    }
    h.upload(Some(&admin), doc_form("Gambar", "G1", "Gambar")).await;

    let all = h.get("/api/explore/Artikel", Some(&admin)).await.json();
    let nos: Vec<_> = all["documents"].as_array().unwrap().iter().map(|d| d["no_surat"].clone()).collect();
    assert_eq!(nos, [json!("A2"), json!("A1"), json!("A0")]);

    let p1 = h.get("/api/explore/Artikel?limit=2", Some(&admin)).await.json();
    let p2 = h.get("/api/explore/Artikel?offset=2&limit=2", Some(&admin)).await.json();
    assert_eq!(p1["documents"].as_array().unwrap().len(), 2);
    assert_eq!(p2["documents"].as_array().unwrap().len(), 1);

    let spaced = h.get("/api/explore/Dokumen%20Surat%20Masuk", Some(&admin)).await;
    assert_eq!(spaced.status, StatusCode::OK);
    let bad = h.get("/api/explore/Foto", Some(&admin)).await;
    assert_envelope(&bad, StatusCode::BAD_REQUEST);
    assert_eq!(bad.json()["error"]["code"], "invalid_category");
    assert_envelope(&h.get("/api/explore/Artikel?limit=abc", Some(&admin)).await, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn search_with_suggestions() {
    let h = harness();
    let admin = h.token("admin", "admin-pw").await;
    h.upload(Some(&admin), doc_form("gotong royong", "7", "Dokumen Surat Masuk")).await;

    let r = h.get("/api/search?q=gotonk", Some(&admin)).await.json();
    assert_eq!(r["hits"].as_array().unwrap().len(), 1);
    assert_eq!(r["hits"][0]["matched_terms"][0], json!({"query": "gotonk", "matched": "gotong", "distance": 1}));
    let score = r["hits"][0]["score"].as_f64().unwrap();
    assert!((score - 3.0 * (1.0 - 1.0 / 6.0)).abs() < 1e-9);
    assert_eq!(r["hits"][0]["document"]["perihal"], "gotong royong");
    assert_eq!(r["suggestions"], json!([{"token": "gotonk", "candidate": "gotong", "distance": 1, "frequency": 1}]));

    assert_eq!(h.get("/api/search?q=", Some(&admin)).await.json(), json!({"hits": [], "suggestions": []}));
    assert_eq!(h.get("/api/search", Some(&admin)).await.json(), json!({"hits": [], "suggestions": []}));

    let exact = h.get("/api/search?q=gotong", Some(&admin)).await.json();
    assert_eq!(exact["hits"].as_array().unwrap().len(), 1);
    assert_eq!(exact["suggestions"], json!([]));

    let filtered = h.get("/api/search?q=gotonk&category=Gambar", Some(&admin)).await.json();
    assert_eq!(filtered["hits"], json!([]));
    let bad = h.get("/api/search?q=gotonk&category=Foto", Some(&admin)).await;
    assert_eq!(bad.json()["error"]["code"], "invalid_category");
    let all = h.get("/api/search?q=gotonk&category=", Some(&admin)).await.json();
    assert_eq!(all["hits"].as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn error_envelope_everywhere() {
    let h = harness();
    let t = h.token("admin", "admin-pw").await;
    assert_envelope(&h.get("/api/nope", Some(&t)).await, StatusCode::NOT_FOUND);
    assert_envelope(&h.get("/nope", None).await, StatusCode::NOT_FOUND);
    assert_envelope(&h.send(Method::PATCH, "/api/documents/1", Some(&t), None).await, StatusCode::METHOD_NOT_ALLOWED);
    assert_eq!(h.get("/api/health", None).await.json(), json!({"status": "ok"}));
}

#[tokio::test]
async fn secrets_never_leak() {
    let h = harness();
    let admin = h.token("admin", "admin-pw").await;
    let id = h.upload(Some(&admin), doc_form("Surat", "1", "Artikel")).await.json()["id"].as_u64().unwrap();
    let replies = [
        h.get("/api/me", Some(&admin)).await,
        h.get("/api/explore/Artikel", Some(&admin)).await,
        h.get("/api/search?q=surat", Some(&admin)).await,
        h.get(&format!("/api/documents/{id}"), Some(&admin)).await,
    ];
    for r in replies {
        let text = String::from_utf8_lossy(&r.bytes);
        assert!(!text.contains("password"), "{text}");
        assert!(!text.contains("argon2"), "{text}");
        assert!(!text.contains(&admin), "{text}");
    }
}

#[tokio::test]
async fn public_read_mode() {
    let h = harness_with(true, None);
    assert_eq!(h.get("/api/explore/Artikel", None).await.status, StatusCode::OK);
    assert_eq!(h.get("/api/search?q=x", None).await.status, StatusCode::OK);
    assert_envelope(&h.get("/api/explore/Artikel", Some("stale")).await, StatusCode::UNAUTHORIZED);
    assert_envelope(&h.upload(None, doc_form("X", "1", "Artikel")).await, StatusCode::UNAUTHORIZED);
    assert_envelope(&h.get("/api/me", None).await, StatusCode::UNAUTHORIZED);
}

#[tokio::test]
async fn serves_static_bundle() {
    let web = tempfile::tempdir().unwrap();
    std::fs::write(web.path().join("index.html"), "<h1>arsip</h1>").unwrap();
    std::fs::write(web.path().join("app.js"), "console.log(1)").unwrap();
    let h = harness_with(false, Some(web.path().to_path_buf()));
    assert_eq!(h.get("/", None).await.bytes, b"<h1>arsip</h1>");
    assert_eq!(h.get("/app.js", None).await.bytes, b"console.log(1)");
    assert_eq!(h.get("/search", None).await.bytes, b"<h1>arsip</h1>");
    assert_envelope(&h.get("/api/missing", None).await, StatusCode::NOT_FOUND);
}
