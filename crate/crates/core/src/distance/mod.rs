//! Levenshtein edit distance over Unicode scalar values.
//!
//! All kernels use unit costs for the three edit operations (substitute,
//! insert, delete); transpositions are not a primitive and cost two edits.
//! Strings are compared one `char` at a time with no normalization, so
//! case folding or any other canonicalization is up to the caller.
//!
//! Four entry points compute the same quantity with different trade-offs:
//!
//! * [`levenshtein`]: the classic dynamic program, two rows of memory.
//! * [`levenshtein_bounded`]: banded evaluation that gives up once the
//!   distance is known to exceed a bound.
//! * [`levenshtein_bitparallel`]: Myers' bit-vector recurrence in 64-bit
//!   blocks, result-identical to the DP.
//! * [`edit_script`]: full matrix plus backtrace, yielding the operations.
//!
//! ```
//! use arsip_core::distance::{levenshtein, levenshtein_bitparallel, levenshtein_bounded};
//!
//! assert_eq!(levenshtein("kitten", "sitting"), 3);
//! assert_eq!(levenshtein_bitparallel("kitten", "sitting"), 3);
//! assert_eq!(levenshtein_bounded("kitten", "sitting", 2), None);
//! ```

mod banded;
mod bitparallel;
mod dp;
mod script;

pub use banded::{levenshtein_bounded, levenshtein_bounded_chars};
pub use bitparallel::{levenshtein_bitparallel, levenshtein_bitparallel_chars, PatternMask};
pub use dp::{levenshtein, levenshtein_chars};
pub use script::{apply_script, edit_script, EditKind, EditOp, EditScript, ScriptError};

/// Length-normalized similarity: `1 - d / max(|a|, |b|)`.
///
/// Two empty strings are identical and score `1.0`.
pub fn normalized_similarity(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    similarity_from_distance(levenshtein_chars(&a, &b), a.len(), b.len())
}

/// Similarity for a distance that has already been computed.
pub fn similarity_from_distance(distance: usize, len_a: usize, len_b: usize) -> f64 {
    let longest = len_a.max(len_b);
    if longest == 0 {
        return 1.0;
    }
    1.0 - distance as f64 / longest as f64
}
