use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine;
use chrono::{DateTime, Duration, Utc};

use crate::clock::Clock;
use crate::model::{Principal, UserId};

pub const DEFAULT_SESSION_TTL: Duration = Duration::hours(8);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    pub token: String,
    pub user_id: UserId,
    pub expires_at: DateTime<Utc>,
}

/// Server-side session table keyed by opaque bearer token.
pub struct SessionStore {
    ttl: Duration,
    clock: Arc<dyn Clock>,
    sessions: Mutex<HashMap<String, (Session, Principal)>>,
}

/// 256 random bits, URL-safe base64 without padding.
fn new_token() -> String {
    let mut bytes = [0u8; 32];
    getrandom::fill(&mut bytes).expect("OS random source unavailable");
    URL_SAFE_NO_PAD.encode(bytes)
}

impl SessionStore {
    pub fn new(ttl: Duration, clock: Arc<dyn Clock>) -> Self {
        Self { ttl, clock, sessions: Mutex::new(HashMap::new()) }
    }

    pub fn ttl(&self) -> Duration {
        self.ttl
    }

    pub fn issue(&self, principal: Principal) -> Session {
        let mut sessions = self.sessions.lock().unwrap();
        let token = loop {
            let t = new_token();
            if !sessions.contains_key(&t) {
                break t;
            }
        };
        let session = Session {
            token: token.clone(),
            user_id: principal.user_id,
            expires_at: self.clock.now() + self.ttl,
        };
        sessions.insert(token, (session.clone(), principal));
        session
    }

    /// The principal behind `token`, if the session exists and has not
    /// expired. Expired sessions are dropped on sight.
    pub fn authenticate(&self, token: &str) -> Option<Principal> {
        let now = self.clock.now();
        let mut sessions = self.sessions.lock().unwrap();
        match sessions.get(token) {
            Some((s, p)) if s.expires_at > now => Some(p.clone()),
            Some(_) => {
                sessions.remove(token);
                None
            }
            None => None,
        }
    }

    pub fn revoke(&self, token: &str) -> bool {
        self.sessions.lock().unwrap().remove(token).is_some()
    }

    pub fn purge_expired(&self) {
        let now = self.clock.now();
        self.sessions.lock().unwrap().retain(|_, (s, _)| s.expires_at > now);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock::ManualClock;
    use crate::model::Role;
    use chrono::TimeZone;

    fn principal() -> Principal {
        Principal { user_id: UserId(3), username: "camat".into(), role: Role::Admin }
    }

    #[test]
    fn tokens_are_long_and_url_safe() {
        let t = new_token();
        assert_eq!(t.len(), 43);
        assert!(t.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_'));
        assert_ne!(t, new_token());
    }

    #[test]
    fn sessions_expire() {
        let clock = Arc::new(ManualClock::new(Utc.with_ymd_and_hms(2020, 1, 1, 0, 0, 0).unwrap()));
        let store = SessionStore::new(DEFAULT_SESSION_TTL, clock.clone());
        let s = store.issue(principal());
        assert_eq!(s.expires_at, clock.now() + Duration::hours(8));
        assert_eq!(store.authenticate(&s.token), Some(principal()));
        assert_eq!(store.authenticate("nope"), None);

        clock.advance(Duration::hours(8));
        assert_eq!(store.authenticate(&s.token), None);
        clock.set(Utc.with_ymd_and_hms(2020, 1, 1, 0, 0, 0).unwrap());
        assert_eq!(store.authenticate(&s.token), None, "expired sessions are gone for good");
    }

    #[test]
    fn revoke_and_purge() {
        let clock = Arc::new(ManualClock::new(Utc.with_ymd_and_hms(2020, 1, 1, 0, 0, 0).unwrap()));
        let store = SessionStore::new(Duration::minutes(5), clock.clone());
        let a = store.issue(principal());
        let b = store.issue(principal());
        assert!(store.revoke(&a.token));
        assert!(!store.revoke(&a.token));
        clock.advance(Duration::minutes(10));
        store.purge_expired();
        assert_eq!(store.sessions.lock().unwrap().len(), 0);
        assert_eq!(store.authenticate(&b.token), None);
    }
}
