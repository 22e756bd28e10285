use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use serde::{Deserialize, Serialize};

use super::password::{hash_password, verify_password};
use super::AuthError;
use crate::model::{Principal, Role, UserId};

pub const USERS_LOG: &str = "users.log";
const USERS_LOG_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserAccount {
    pub id: UserId,
    pub username: String,
    pub password_hash: String,
    pub role: Role,
}

impl UserAccount {
    pub fn principal(&self) -> Principal {
        Principal { user_id: self.id, username: self.username.clone(), role: self.role }
    }
}

#[derive(Serialize, Deserialize)]
struct Line {
    v: u64,
    op: String,
    user: UserAccount,
}

/// Accounts persisted as `{"v":1,"op":"add","user":{...}}` lines in
/// `<data_dir>/users.log`.
pub struct UserDirectory {
    path: PathBuf,
    users: RwLock<BTreeMap<String, UserAccount>>,
    writer: Mutex<Option<File>>,
    // Verified against when the username is unknown so both failure paths
    // cost one hash verification.
    decoy_hash: String,
}

impl UserDirectory {
    pub fn open(data_dir: impl AsRef<Path>) -> Result<Self, AuthError> {
        let path = data_dir.as_ref().join(USERS_LOG);
        let mut users = BTreeMap::new();
        match File::open(&path) {
            Ok(f) => {
                for (i, line) in BufReader::new(f).lines().enumerate() {
                    let line_no = i + 1;
                    let corrupt = |reason: String| AuthError::CorruptLog { line: line_no, reason };
                    let line = line.map_err(|e| corrupt(e.to_string()))?;
                    let parsed: Line = serde_json::from_str(&line).map_err(|e| corrupt(e.to_string()))?;
                    if parsed.v != USERS_LOG_VERSION {
                        return Err(corrupt(format!("unsupported version {}", parsed.v)));
                    }
                    if parsed.op != "add" {
                        return Err(corrupt(format!("unknown op {:?}", parsed.op)));
                    }
                    users.insert(parsed.user.username.clone(), parsed.user);
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(e.into()),
        }
        Ok(Self {
            path,
            users: RwLock::new(users),
            writer: Mutex::new(None),
            decoy_hash: hash_password("decoy")?,
        })
    }

    pub fn len(&self) -> usize {
        self.users.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, username: &str) -> Option<UserAccount> {
        self.users.read().unwrap().get(username).cloned()
    }

    pub fn add(&self, username: &str, password: &str, role: Role) -> Result<UserAccount, AuthError> {
        let username = username.trim();
        if username.is_empty() {
            return Err(AuthError::EmptyUsername);
        }
        if password.is_empty() {
            return Err(AuthError::EmptyPassword);
        }
        let password_hash = hash_password(password)?;

        let mut writer = self.writer.lock().unwrap();
        let mut users = self.users.write().unwrap();
        if users.contains_key(username) {
            return Err(AuthError::DuplicateUsername(username.to_string()));
        }
        let id = UserId(users.values().map(|u| u.id.0).max().unwrap_or(0) + 1);
        let account = UserAccount { id, username: username.to_string(), password_hash, role };

        if writer.is_none() {
            if let Some(parent) = self.path.parent() {
                std::fs::create_dir_all(parent)?;
            }
            *writer = Some(OpenOptions::new().create(true).append(true).open(&self.path)?);
        }
        let file = writer.as_mut().expect("opened above");
        let mut line = serde_json::to_string(&Line { v: USERS_LOG_VERSION, op: "add".into(), user: account.clone() })
            .expect("accounts serialize");
        line.push('\n');
        file.write_all(line.as_bytes())?;
        file.sync_data()?;

        users.insert(account.username.clone(), account.clone());
        Ok(account)
    }

    /// The principal for a correct username/password pair.
    pub fn verify(&self, username: &str, password: &str) -> Option<Principal> {
        match self.get(username) {
            Some(account) => verify_password(password, &account.password_hash).then(|| account.principal()),
            None => {
                verify_password(password, &self.decoy_hash);
                None
            }
        }
    }
}
