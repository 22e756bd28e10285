use std::collections::BTreeSet;

use axum::extract::State;
use axum::Json;
use serde::{Deserialize, Serialize};

use arsip_core::fuzzy::{tokenize, MatchedTerm};
use arsip_core::{Category, DocId, DocumentRecord};

use crate::error::Result;
use crate::extract::{ApiQuery, Reader};
use crate::AppState;

#[derive(Deserialize)]
pub struct SearchParams {
    #[serde(default)]
    q: String,
    category: Option<String>,
}

#[derive(Serialize)]
pub struct Hit {
    document_id: DocId,
    score: f64,
    matched_terms: Vec<MatchedTerm>,
    document: DocumentRecord,
}

#[derive(Serialize)]
pub struct DidYouMean {
    token: String,
    candidate: String,
    distance: usize,
    frequency: u32,
}

#[derive(Serialize)]
pub struct SearchResponse {
    hits: Vec<Hit>,
    suggestions: Vec<DidYouMean>,
}

/// Ranked hits plus one "did you mean" entry for every query token that is
/// not in the vocabulary verbatim and has a candidate within budget.
pub async fn search(
    State(state): State<AppState>,
    _reader: Reader,
    ApiQuery(params): ApiQuery<SearchParams>,
) -> Result<Json<SearchResponse>> {
    let category = match params.category.as_deref().map(str::trim) {
        None | Some("") => None,
        Some(label) => Some(label.parse::<Category>()?),
    };

    let snap = state.archive.snapshot();
    let index = snap.index();
    let hits = index
        .search(&params.q, category)
        .into_iter()
        .filter_map(|h| {
            let document = snap.get(h.document_id)?.clone();
            Some(Hit { document_id: h.document_id, score: h.score, matched_terms: h.matched_terms, document })
        })
        .collect();

    let mut seen = BTreeSet::new();
    let suggestions = tokenize(&params.q)
        .into_iter()
        .filter(|t| seen.insert(t.clone()) && !index.vocabulary().contains(t.as_str()))
        .filter_map(|t| {
            let top = index.suggest(&t, 1).into_iter().next()?;
            Some(DidYouMean {
                token: t.into_string(),
                candidate: top.candidate,
                distance: top.distance,
                frequency: top.frequency,
            })
        })
        .collect();

    Ok(Json(SearchResponse { hits, suggestions }))
}
