use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::token::Token;
use crate::distance::levenshtein_bounded_chars;

/// Maximum admitted edit distance per query token, by token length.
///
/// Tokens up to `short_max` scalars get 1, up to `medium_max` get 2,
/// longer ones get 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetPolicy {
    pub short_max: usize,
    pub medium_max: usize,
}

impl Default for BudgetPolicy {
    fn default() -> Self {
        Self { short_max: 4, medium_max: 8 }
    }
}

impl BudgetPolicy {
    pub fn budget(&self, token: &Token) -> usize {
        self.budget_for_len(token.char_len())
    }

    pub fn budget_for_len(&self, len: usize) -> usize {
        if len <= self.short_max {
            1
        } else if len <= self.medium_max {
            2
        } else {
            3
        }
    }
}

/// Distance budget under the default policy.
pub fn distance_budget(token: &Token) -> usize {
    BudgetPolicy::default().budget(token)
}

/// Token frequencies over the live corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    entries: BTreeMap<String, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestion {
    pub candidate: String,
    pub distance: usize,
    pub frequency: u32,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn frequency(&self, token: &str) -> Option<u32> {
        self.entries.get(token).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.contains_key(token)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.entries.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn increment(&mut self, token: &Token) {
        *self.entries.entry(token.as_str().to_string()).or_insert(0) += 1;
    }

    /// Drops one occurrence; the entry disappears when its count hits zero.
    pub fn decrement(&mut self, token: &Token) {
        if let Some(count) = self.entries.get_mut(token.as_str()) {
            *count -= 1;
            if *count == 0 {
                self.entries.remove(token.as_str());
            }
        }
    }

    /// Every vocabulary token within `budget` edits of `query`, unordered.
    pub fn within(&self, query: &Token, budget: usize) -> Vec<Suggestion> {
        let q: Vec<char> = query.as_str().chars().collect();
        let mut buf = Vec::new();
        let mut out = Vec::new();
        for (token, &frequency) in &self.entries {
            buf.clear();
            buf.extend(token.chars());
            if buf.len().abs_diff(q.len()) > budget {
                continue;
            }
            if let Some(distance) = levenshtein_bounded_chars(&q, &buf, budget) {
                out.push(Suggestion { candidate: token.clone(), distance, frequency });
            }
        }
        out
    }
}

impl<S: Into<String>> FromIterator<(S, u32)> for Vocabulary {
    fn from_iter<I: IntoIterator<Item = (S, u32)>>(iter: I) -> Self {
        let entries = iter
            .into_iter()
            .map(|(k, v)| (k.into(), v))
            .filter(|(_, v)| *v > 0)
            .collect();
        Self { entries }
    }
}

/// Ranked corrections for `query` under an explicit budget.
///
/// Order: ascending distance, then descending frequency, then token.
pub fn suggest_within(query: &Token, vocab: &Vocabulary, limit: usize, budget: usize) -> Vec<Suggestion> {
    let mut hits = vocab.within(query, budget);
    hits.sort_by(|a, b| {
        a.distance
            .cmp(&b.distance)
            .then(b.frequency.cmp(&a.frequency))
            .then_with(|| a.candidate.cmp(&b.candidate))
    });
    hits.truncate(limit);
    hits
}

/// "Did you mean" candidates for `query` under the default budget policy.
pub fn suggest(query: &Token, vocab: &Vocabulary, limit: usize) -> Vec<Suggestion> {
    suggest_within(query, vocab, limit, distance_budget(query))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::levenshtein;
    use proptest::prelude::*;

    fn tok(s: &str) -> Token {
        Token::parse(s).unwrap()
    }

    fn triples(s: &[Suggestion]) -> Vec<(&str, usize, u32)> {
        s.iter().map(|s| (s.candidate.as_str(), s.distance, s.frequency)).collect()
    }

    #[test]
    fn budget_table() {
        assert_eq!(distance_budget(&tok("ktp")), 1);
        assert_eq!(distance_budget(&tok("surat")), 2);
        assert_eq!(distance_budget(&tok("kependudukan")), 3);
        assert_eq!(distance_budget(&tok("a")), 1);
        assert_eq!(distance_budget(&tok("abcd")), 1);
        assert_eq!(distance_budget(&tok("abcdefgh")), 2);
        assert_eq!(distance_budget(&tok("abcdefghi")), 3);
    }

    #[test]
    fn suggest_orders_by_distance_then_frequency() {
        // Oracle distances: surta->serta is one substitution, surta->surat
        // is two edits (no transposition primitive).
        assert_eq!(levenshtein("surta", "serta"), 1);
        assert_eq!(levenshtein("surta", "surat"), 2);
        let vocab: Vocabulary = [("surat", 10), ("serta", 2)].into_iter().collect();
        let got = suggest(&tok("surta"), &vocab, 5);
        assert_eq!(triples(&got), [("serta", 1, 2), ("surat", 2, 10)]);
    }

    #[test]
    fn suggest_exact_and_empty() {
        let vocab: Vocabulary = [("surat", 10)].into_iter().collect();
        assert_eq!(triples(&suggest(&tok("surat"), &vocab, 5)), [("surat", 0, 10)]);
        assert_eq!(levenshtein("zzzz", "surat"), 5);
        assert!(suggest(&tok("zzzz"), &vocab, 5).is_empty());
    }

    #[test]
    fn suggest_ties_break_by_frequency_then_lexicographically() {
        let vocab: Vocabulary = [("surab", 3), ("surac", 3), ("surad", 9)].into_iter().collect();
        let got = suggest(&tok("surax"), &vocab, 10);
        assert_eq!(triples(&got), [("surad", 1, 9), ("surab", 1, 3), ("surac", 1, 3)]);
        assert_eq!(suggest(&tok("surax"), &vocab, 1).len(), 1);
    }

    #[test]
    fn decrement_removes_exhausted_entries() {
        let mut v = Vocabulary::new();
        v.increment(&tok("surat"));
        v.increment(&tok("surat"));
        v.decrement(&tok("surat"));
        assert_eq!(v.frequency("surat"), Some(1));
        v.decrement(&tok("surat"));
        assert!(v.is_empty());
        v.decrement(&tok("surat"));
        assert!(v.is_empty());
    }

    proptest! {
        #[test]
        fn suggestions_respect_budget_and_total_order(
            words in prop::collection::btree_map("[a-e]{1,7}", 1u32..5, 0..40),
            query in "[a-e]{1,7}",
        ) {
            let vocab: Vocabulary = words.clone().into_iter().collect();
            let q = tok(&query);
            let got = suggest(&q, &vocab, usize::MAX);
            let budget = distance_budget(&q);
            for s in &got {
                prop_assert!(s.distance <= budget);
                prop_assert_eq!(s.distance, levenshtein(&query, &s.candidate));
                prop_assert_eq!(Some(s.frequency), vocab.frequency(&s.candidate));
            }
            for pair in got.windows(2) {
                let key = |s: &Suggestion| (s.distance, std::cmp::Reverse(s.frequency), s.candidate.clone());
                prop_assert!(key(&pair[0]) < key(&pair[1]));
            }
            // Completeness against a brute-force scan.
            let expected = words.keys().filter(|w| levenshtein(&query, w) <= budget).count();
            prop_assert_eq!(got.len(), expected);
        }
    }
}
