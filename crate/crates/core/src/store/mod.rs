//! Durable document archive.
//!
//! State lives in a data directory:
//!
//! * `documents.log`: append-only record log, see [`log`].
//! * `blobs/<id>`: the raw uploaded bytes of each live document.
//!
//! Opening an [`Archive`] replays the log, checks that every live record has
//! its blob, removes blobs that no live record owns, and rebuilds the fuzzy
//! index from scratch. All mutations are serialized behind a write lock that
//! also covers the index update, so readers only ever see fully applied
//! states.

pub mod log;

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock, RwLockReadGuard};

use serde::{Deserialize, Serialize};

use self::log::Event;
use crate::clock::{Clock, SystemClock};
use crate::fuzzy::{BudgetPolicy, FuzzyIndex, SearchHit, Suggestion, Token};
use crate::model::{Category, DocId, DocumentMeta, DocumentRecord, Principal, Upload};

pub const DOCUMENTS_LOG: &str = "documents.log";
pub const BLOB_DIR: &str = "blobs";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("document {0} not found")]
    NotFound(DocId),
    #[error("no_surat {no_surat:?} already exists in {kategori}")]
    Conflict { kategori: Category, no_surat: String },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("only Admin accounts may modify the archive")]
    Forbidden,
    #[error("corrupt record log at line {line}: {reason}")]
    CorruptLog { line: usize, reason: String },
    #[error("record log line {line} has unsupported version {version}")]
    UnsupportedVersion { line: usize, version: u64 },
    #[error("blob for live document {0} is missing")]
    MissingBlob(DocId),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Offset/limit window over a listing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Page {
    #[serde(default)]
    pub offset: usize,
    #[serde(default = "Page::default_limit")]
    pub limit: usize,
}

impl Page {
    pub const DEFAULT_LIMIT: usize = 50;

    fn default_limit() -> usize {
        Self::DEFAULT_LIMIT
    }

    pub fn new(offset: usize, limit: usize) -> Self {
        Self { offset, limit }
    }

    pub fn all() -> Self {
        Self { offset: 0, limit: usize::MAX }
    }
}

impl Default for Page {
    fn default() -> Self {
        Self { offset: 0, limit: Self::DEFAULT_LIMIT }
    }
}

struct State {
    /// Latest version of every record ever written, tombstones included.
    records: BTreeMap<DocId, DocumentRecord>,
    index: FuzzyIndex,
    next_id: u64,
    log: File,
}

pub struct Archive {
    dir: PathBuf,
    clock: Arc<dyn Clock>,
    state: RwLock<State>,
}

impl std::fmt::Debug for Archive {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Archive").field("dir", &self.dir).finish_non_exhaustive()
    }
}

/// A consistent read-only view of the archive.
pub struct Snapshot<'a>(RwLockReadGuard<'a, State>);

impl Snapshot<'_> {
    pub fn get(&self, id: DocId) -> Option<&DocumentRecord> {
        self.0.records.get(&id).filter(|r| !r.deleted)
    }

    pub fn live(&self) -> impl Iterator<Item = &DocumentRecord> {
        self.0.records.values().filter(|r| !r.deleted)
    }

    pub fn index(&self) -> &FuzzyIndex {
        &self.0.index
    }

    pub fn list_by_category(&self, category: Category, page: Page) -> Vec<DocumentRecord> {
        let mut docs: Vec<&DocumentRecord> = self.live().filter(|r| r.kategori == category).collect();
        docs.sort_by(|a, b| b.uploaded_at.cmp(&a.uploaded_at).then(a.id.cmp(&b.id)));
        docs.into_iter().skip(page.offset).take(page.limit).cloned().collect()
    }
}

fn validate(meta: &DocumentMeta) -> Result<DocumentMeta, StoreError> {
    let perihal = meta.perihal.trim();
    let no_surat = meta.no_surat.trim();
    if perihal.is_empty() {
        return Err(StoreError::Validation("perihal must not be empty".into()));
    }
    if no_surat.is_empty() {
        return Err(StoreError::Validation("no_surat must not be empty".into()));
    }
    Ok(DocumentMeta {
        perihal: perihal.to_string(),
        no_surat: no_surat.to_string(),
        deskripsi: meta.deskripsi.trim().to_string(),
        kategori: meta.kategori,
    })
}

fn check_content_type(kategori: Category, content_type: &str) -> Result<(), StoreError> {
    if kategori.accepts(content_type) {
        Ok(())
    } else {
        Err(StoreError::Validation(format!(
            "content type {content_type:?} not accepted in {kategori}; expected one of {}",
            kategori.accepted_content_types().join(", ")
        )))
    }
}

fn require_admin(actor: &Principal) -> Result<(), StoreError> {
    if actor.is_admin() {
        Ok(())
    } else {
        Err(StoreError::Forbidden)
    }
}

impl State {
    fn check_unique(&self, meta: &DocumentMeta, except: Option<DocId>) -> Result<(), StoreError> {
        let taken = self.records.values().any(|r| {
            !r.deleted && Some(r.id) != except && r.kategori == meta.kategori && r.no_surat == meta.no_surat
        });
        if taken {
            Err(StoreError::Conflict { kategori: meta.kategori, no_surat: meta.no_surat.clone() })
        } else {
            Ok(())
        }
    }

    fn live(&self, id: DocId) -> Result<&DocumentRecord, StoreError> {
        self.records.get(&id).filter(|r| !r.deleted).ok_or(StoreError::NotFound(id))
    }
}

impl Archive {
    /// Opens (or initializes) the archive in `dir` with the system clock.
    pub fn open(dir: impl AsRef<Path>, policy: BudgetPolicy) -> Result<Self, StoreError> {
        Self::open_with_clock(dir, policy, Arc::new(SystemClock))
    }

    pub fn open_with_clock(
        dir: impl AsRef<Path>,
        policy: BudgetPolicy,
        clock: Arc<dyn Clock>,
    ) -> Result<Self, StoreError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(dir.join(BLOB_DIR))?;
        let log_path = dir.join(DOCUMENTS_LOG);
        let records = log::replay(&log_path)?;

        for r in records.values().filter(|r| !r.deleted) {
            if !dir.join(BLOB_DIR).join(r.id.to_string()).is_file() {
                return Err(StoreError::MissingBlob(r.id));
            }
        }
        // Blobs without a live owner are left over from an interrupted
        // create or delete.
        for entry in fs::read_dir(dir.join(BLOB_DIR))? {
            let entry = entry?;
            let owned = entry
                .file_name()
                .to_str()
                .and_then(|n| n.parse::<DocId>().ok())
                .and_then(|id| records.get(&id))
                .is_some_and(|r| !r.deleted);
            if !owned {
                tracing::info!(path = %entry.path().display(), "removing orphan blob");
                fs::remove_file(entry.path())?;
            }
        }

        let mut index = FuzzyIndex::new(policy);
        for r in records.values().filter(|r| !r.deleted) {
            index.index_document(r);
        }
        let next_id = records.keys().next_back().map_or(1, |id| id.0 + 1);
        let log = OpenOptions::new().create(true).append(true).open(&log_path)?;

        tracing::debug!(dir = %dir.display(), records = records.len(), "archive opened");
        Ok(Self {
            dir,
            clock,
            state: RwLock::new(State { records, index, next_id, log }),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn blob_path(&self, id: DocId) -> PathBuf {
        self.dir.join(BLOB_DIR).join(id.to_string())
    }

    fn write_blob(&self, id: DocId, bytes: &[u8]) -> io::Result<()> {
        let tmp = self.dir.join(BLOB_DIR).join(format!(".{id}.tmp"));
        let mut f = File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, self.blob_path(id))
    }

    pub fn snapshot(&self) -> Snapshot<'_> {
        Snapshot(self.state.read().unwrap())
    }

    pub fn create_document(
        &self,
        meta: &DocumentMeta,
        upload: Upload,
        actor: &Principal,
    ) -> Result<DocumentRecord, StoreError> {
        require_admin(actor)?;
        let meta = validate(meta)?;
        if upload.bytes.is_empty() {
            return Err(StoreError::Validation("file must not be empty".into()));
        }
        check_content_type(meta.kategori, &upload.content_type)?;

        let mut state = self.state.write().unwrap();
        state.check_unique(&meta, None)?;

        let id = DocId(state.next_id);
        let record = DocumentRecord {
            id,
            perihal: meta.perihal,
            no_surat: meta.no_surat,
            deskripsi: meta.deskripsi,
            kategori: meta.kategori,
            file_name: upload.file_name,
            file_ref: format!("{BLOB_DIR}/{id}"),
            content_type: upload.content_type,
            uploaded_by: actor.user_id,
            uploaded_at: self.clock.now(),
            deleted: false,
        };

        // Blob first: a crash before the log line leaves an orphan that the
        // next open removes.
        self.write_blob(id, &upload.bytes)?;
        if let Err(e) = log::append(&mut state.log, &Event::Create(record.clone())) {
            let _ = fs::remove_file(self.blob_path(id));
            return Err(e.into());
        }

        state.next_id += 1;
        state.index.index_document(&record);
        state.records.insert(id, record.clone());
        Ok(record)
    }

    /// Replaces the metadata of a live document; the blob is untouched.
    pub fn update_document(
        &self,
        id: DocId,
        meta: &DocumentMeta,
        actor: &Principal,
    ) -> Result<DocumentRecord, StoreError> {
        require_admin(actor)?;
        let meta = validate(meta)?;

        let mut state = self.state.write().unwrap();
        let current = state.live(id)?.clone();
        check_content_type(meta.kategori, &current.content_type)?;
        state.check_unique(&meta, Some(id))?;

        let record = DocumentRecord {
            perihal: meta.perihal,
            no_surat: meta.no_surat,
            deskripsi: meta.deskripsi,
            kategori: meta.kategori,
            ..current
        };
        log::append(&mut state.log, &Event::Update(record.clone()))?;
        state.index.index_document(&record);
        state.records.insert(id, record.clone());
        Ok(record)
    }

    pub fn delete_document(&self, id: DocId, actor: &Principal) -> Result<(), StoreError> {
        require_admin(actor)?;
        let mut state = self.state.write().unwrap();
        let current = state.live(id)?.clone();
        let tombstone = DocumentRecord { deleted: true, ..current };

        log::append(&mut state.log, &Event::Delete(tombstone.clone()))?;
        match fs::remove_file(self.blob_path(id)) {
            Ok(()) => {}
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => tracing::warn!(%id, error = %e, "blob removal failed; it will be collected on next open"),
        }
        state.index.deindex_document(&tombstone);
        state.records.insert(id, tombstone);
        Ok(())
    }

    pub fn get_document(&self, id: DocId) -> Result<DocumentRecord, StoreError> {
        self.snapshot().get(id).cloned().ok_or(StoreError::NotFound(id))
    }

    pub fn read_blob(&self, id: DocId) -> Result<Vec<u8>, StoreError> {
        let snap = self.snapshot();
        snap.get(id).ok_or(StoreError::NotFound(id))?;
        Ok(fs::read(self.blob_path(id))?)
    }

    pub fn list_by_category(&self, category: Category, page: Page) -> Vec<DocumentRecord> {
        self.snapshot().list_by_category(category, page)
    }

    pub fn live_records(&self) -> Vec<DocumentRecord> {
        self.snapshot().live().cloned().collect()
    }

    pub fn search(&self, query: &str, category: Option<Category>) -> Vec<SearchHit> {
        self.snapshot().index().search(query, category)
    }

    pub fn suggest(&self, token: &Token, limit: usize) -> Vec<Suggestion> {
        self.snapshot().index().suggest(token, limit)
    }
}
