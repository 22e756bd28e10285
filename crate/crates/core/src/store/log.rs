//! The `documents.log` record log: one JSON object per line.
//!
//! ```text
//! {"v":1,"op":"create","record":{...}}
//! {"v":1,"op":"update","record":{...}}
//! {"v":1,"op":"delete","record":{...,"deleted":true}}
//! ```

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::StoreError;
use crate::model::{DocId, DocumentRecord};

pub const LOG_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", content = "record", rename_all = "lowercase")]
pub enum Event {
    Create(DocumentRecord),
    Update(DocumentRecord),
    Delete(DocumentRecord),
}

#[derive(Serialize)]
struct LineOut<'a> {
    v: u64,
    #[serde(flatten)]
    event: &'a Event,
}

pub fn encode(event: &Event) -> String {
    let mut line = serde_json::to_string(&LineOut { v: LOG_VERSION, event })
        .expect("log events always serialize");
    line.push('\n');
    line
}

fn decode(line_no: usize, line: &str) -> Result<Event, StoreError> {
    let corrupt = |reason: String| StoreError::CorruptLog { line: line_no, reason };
    let mut value: serde_json::Value = serde_json::from_str(line).map_err(|e| corrupt(e.to_string()))?;
    let Some(fields) = value.as_object_mut() else {
        return Err(corrupt("not a JSON object".into()));
    };
    match fields.remove("v").as_ref().and_then(serde_json::Value::as_u64) {
        Some(LOG_VERSION) => {}
        Some(version) => return Err(StoreError::UnsupportedVersion { line: line_no, version }),
        None => return Err(corrupt("missing or non-integer `v` field".into())),
    }
    let event: Event = serde_json::from_value(value).map_err(|e| corrupt(e.to_string()))?;
    if let Event::Delete(r) = &event {
        if !r.deleted {
            return Err(corrupt(format!("delete event for {} without tombstone flag", r.id)));
        }
    }
    Ok(event)
}

/// Replays the log. Later events for an id replace earlier ones, so the
/// result holds the latest version of every record ever written,
/// tombstones included.
pub fn replay(path: &Path) -> Result<BTreeMap<DocId, DocumentRecord>, StoreError> {
    let mut records = BTreeMap::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(records),
        Err(e) => return Err(e.into()),
    };
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| StoreError::CorruptLog { line: line_no, reason: e.to_string() })?;
        let record = match decode(line_no, &line)? {
            Event::Create(r) | Event::Update(r) => r,
            Event::Delete(r) => r,
        };
        records.insert(record.id, record);
    }
    Ok(records)
}

pub fn append(file: &mut File, event: &Event) -> std::io::Result<()> {
    file.write_all(encode(event).as_bytes())?;
    file.sync_data()
}
