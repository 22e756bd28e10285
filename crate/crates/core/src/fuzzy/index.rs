use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::token::{tokenize, Token};
use super::vocab::{suggest_within, BudgetPolicy, Suggestion, Vocabulary};
use crate::distance::similarity_from_distance;
use crate::model::{Category, DocId, DocumentRecord};

/// Indexed metadata fields, in weight order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Perihal,
    NoSurat,
    Deskripsi,
}

impl Field {
    pub const ALL: [Field; 3] = [Field::Perihal, Field::NoSurat, Field::Deskripsi];

    pub fn weight(self) -> f64 {
        match self {
            Field::Perihal => 3.0,
            Field::NoSurat => 2.0,
            Field::Deskripsi => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedTerm {
    pub query: String,
    pub matched: String,
    pub distance: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    pub document_id: DocId,
    pub score: f64,
    pub matched_terms: Vec<MatchedTerm>,
}

#[derive(Debug, Clone, PartialEq)]
struct IndexedDoc {
    kategori: Category,
    uploaded_at: DateTime<Utc>,
    fields: [Vec<Token>; 3],
}

impl IndexedDoc {
    fn from_record(doc: &DocumentRecord) -> Self {
        Self {
            kategori: doc.kategori,
            uploaded_at: doc.uploaded_at,
            fields: [tokenize(&doc.perihal), tokenize(&doc.no_surat), tokenize(&doc.deskripsi)],
        }
    }

    fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.fields.iter().flatten()
    }
}

/// Vocabulary and postings over the live documents' text metadata.
///
/// File names and category labels are not indexed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FuzzyIndex {
    policy: BudgetPolicy,
    vocab: Vocabulary,
    postings: BTreeMap<String, BTreeMap<DocId, u32>>,
    docs: HashMap<DocId, IndexedDoc>,
}

impl FuzzyIndex {
    pub fn new(policy: BudgetPolicy) -> Self {
        Self { policy, ..Self::default() }
    }

    pub fn policy(&self) -> BudgetPolicy {
        self.policy
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn contains(&self, id: DocId) -> bool {
        self.docs.contains_key(&id)
    }

    /// Ids of documents containing `token` verbatim.
    pub fn postings(&self, token: &str) -> Vec<DocId> {
        self.postings
            .get(token)
            .map(|p| p.keys().copied().collect())
            .unwrap_or_default()
    }

    /// Adds (or re-adds) `doc`. Indexing the same id twice replaces the
    /// earlier entry rather than double counting.
    pub fn index_document(&mut self, doc: &DocumentRecord) {
        if self.docs.contains_key(&doc.id) {
            self.remove(doc.id);
        }
        let entry = IndexedDoc::from_record(doc);
        for token in entry.tokens() {
            self.vocab.increment(token);
            *self
                .postings
                .entry(token.as_str().to_string())
                .or_default()
                .entry(doc.id)
                .or_insert(0) += 1;
        }
        self.docs.insert(doc.id, entry);
    }

    pub fn deindex_document(&mut self, doc: &DocumentRecord) {
        if !self.remove(doc.id) {
            tracing::warn!(id = %doc.id, "deindex of a document that is not indexed");
        }
    }

    fn remove(&mut self, id: DocId) -> bool {
        let Some(entry) = self.docs.remove(&id) else {
            return false;
        };
        for token in entry.tokens() {
            self.vocab.decrement(token);
            if let Some(docs) = self.postings.get_mut(token.as_str()) {
                if let Some(count) = docs.get_mut(&id) {
                    *count -= 1;
                    if *count == 0 {
                        docs.remove(&id);
                    }
                }
                if docs.is_empty() {
                    self.postings.remove(token.as_str());
                }
            }
        }
        true
    }

    pub fn suggest(&self, query: &Token, limit: usize) -> Vec<Suggestion> {
        suggest_within(query, &self.vocab, limit, self.policy.budget(query))
    }

    /// Ranked typo-tolerant search over the indexed metadata.
    ///
    /// Each query token contributes, per document, the best
    /// `field weight * normalized similarity` among that document's tokens
    /// lying within the token's distance budget. Hits are ordered by score,
    /// then newest upload, then id.
    pub fn search(&self, query: &str, category: Option<Category>) -> Vec<SearchHit> {
        let mut acc: BTreeMap<DocId, (f64, Vec<MatchedTerm>)> = BTreeMap::new();

        for q in tokenize(query) {
            let q_len = q.char_len();
            let candidates: HashMap<String, usize> = self
                .vocab
                .within(&q, self.policy.budget(&q))
                .into_iter()
                .map(|s| (s.candidate, s.distance))
                .collect();
            let touched: BTreeSet<DocId> = candidates
                .keys()
                .filter_map(|c| self.postings.get(c))
                .flat_map(|p| p.keys().copied())
                .collect();

            for id in touched {
                let doc = &self.docs[&id];
                if category.is_some_and(|c| c != doc.kategori) {
                    continue;
                }
                let mut best: Option<(f64, usize, &str)> = None;
                for (field, tokens) in Field::ALL.iter().zip(&doc.fields) {
                    for t in tokens {
                        let Some(&d) = candidates.get(t.as_str()) else { continue };
                        let contrib = field.weight() * similarity_from_distance(d, q_len, t.char_len());
                        let better = match best {
                            None => true,
                            Some((bc, bd, bt)) => contrib
                                .total_cmp(&bc)
                                .then_with(|| bd.cmp(&d))
                                .then_with(|| bt.cmp(t.as_str()))
                                == Ordering::Greater,
                        };
                        if better {
                            best = Some((contrib, d, t.as_str()));
                        }
                    }
                }
                if let Some((contrib, distance, matched)) = best.filter(|b| b.0 > 0.0) {
                    let slot = acc.entry(id).or_default();
                    slot.0 += contrib;
                    slot.1.push(MatchedTerm {
                        query: q.as_str().to_string(),
                        matched: matched.to_string(),
                        distance,
                    });
                }
            }
        }

        let mut hits: Vec<SearchHit> = acc
            .into_iter()
            .map(|(document_id, (score, matched_terms))| SearchHit { document_id, score, matched_terms })
            .collect();
        hits.sort_by(|a, b| {
            b.score
                .total_cmp(&a.score)
                .then_with(|| self.docs[&b.document_id].uploaded_at.cmp(&self.docs[&a.document_id].uploaded_at))
                .then_with(|| a.document_id.cmp(&b.document_id))
        });
        hits
    }
}
