//! User accounts and login sessions.

mod password;
mod session;
mod users;

pub use password::{hash_password, verify_password};
pub use session::{Session, SessionStore, DEFAULT_SESSION_TTL};
pub use users::{UserAccount, UserDirectory, USERS_LOG};

#[derive(Debug, thiserror::Error)]
pub enum AuthError {
    #[error("username {0:?} is already taken")]
    DuplicateUsername(String),
    #[error("username must not be empty")]
    EmptyUsername,
    #[error("password must not be empty")]
    EmptyPassword,
    #[error("corrupt users log at line {line}: {reason}")]
    CorruptLog { line: usize, reason: String },
    #[error("password hashing failed: {0}")]
    Hash(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
