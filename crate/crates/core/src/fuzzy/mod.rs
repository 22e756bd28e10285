//! Typo-tolerant retrieval over document metadata.
//!
//! Text is split into lowercase alphanumeric [`Token`]s. Each query token is
//! matched against the corpus vocabulary within a length-dependent edit
//! budget; matches feed both "did you mean" suggestions and the weighted
//! document ranking in [`FuzzyIndex::search`].

mod index;
mod token;
mod vocab;

pub use index::{Field, FuzzyIndex, MatchedTerm, SearchHit};
pub use token::{tokenize, Token};
pub use vocab::{distance_budget, suggest, suggest_within, BudgetPolicy, Suggestion, Vocabulary};
