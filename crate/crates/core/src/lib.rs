//! Core of the archive service: edit-distance kernels, the typo-tolerant
//! metadata index, the append-only document store and user accounts.

pub mod auth;
pub mod clock;
pub mod distance;
pub mod fuzzy;
pub mod model;
pub mod store;

pub use clock::{Clock, ManualClock, SystemClock};
pub use fuzzy::{BudgetPolicy, FuzzyIndex, SearchHit, Suggestion, Token};
pub use model::{Category, DocId, DocumentMeta, DocumentRecord, Principal, Role, Upload, UserId};
pub use store::{Archive, Page, StoreError};
