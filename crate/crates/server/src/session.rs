use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use ahp_core::catalog::MetricRecord;
use ahp_core::DecisionModel;
use serde::{Deserialize, Serialize};
use uuid::Uuid;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SessionState {
    pub model: Option<DecisionModel>,
    /// Bumped on every accepted mutation; 0 for a fresh session.
    pub revision: u64,
    pub metrics: Vec<MetricRecord>,
}

/// In-memory sessions. Each session has its own lock, so mutations to one
/// session are serialized without blocking the others.
#[derive(Debug, Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<Mutex<SessionState>>>>,
}

impl SessionStore {
    pub fn new() -> Self {
        SessionStore::default()
    }

    pub fn create(&self) -> String {
        let id = Uuid::new_v4().to_string();
        self.sessions
            .write()
            .expect("session map poisoned")
            .insert(id.clone(), Arc::default());
        id
    }

    pub fn get(&self, id: &str) -> Option<Arc<Mutex<SessionState>>> {
        self.sessions.read().expect("session map poisoned").get(id).cloned()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session map poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn snapshot(&self) -> Snapshot {
        let sessions = self.sessions.read().expect("session map poisoned");
        let mut entries: Vec<SnapshotEntry> = sessions
            .iter()
            .map(|(id, state)| SnapshotEntry {
                id: id.clone(),
                state: state.lock().expect("session poisoned").clone(),
            })
            .collect();
        entries.sort_by(|a, b| a.id.cmp(&b.id));
        Snapshot { sessions: entries }
    }

    pub fn restore(snapshot: Snapshot) -> Self {
        let sessions = snapshot
            .sessions
            .into_iter()
            .map(|e| (e.id, Arc::new(Mutex::new(e.state))))
            .collect();
        SessionStore {
            sessions: RwLock::new(sessions),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub sessions: Vec<SnapshotEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotEntry {
    pub id: String,
    #[serde(flatten)]
    pub state: SessionState,
}
