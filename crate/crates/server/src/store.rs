//! File-backed state: one JSON document per player, one for the
//! leaderboard and one per chat room, all under a state directory.
//!
//! ```text
//! <state-dir>/
//!   players/<player_id>.json
//!   leaderboard.json
//!   chat/<room>.json
//! ```
//!
//! Each player record, the leaderboard and each chat room has its own lock.
//! Mutations work on a copy, persist it, and only then replace the in-memory
//! value, so a failed write leaves both disk and memory at the old version.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use entrexplorer_core::business_plan::BusinessPlan;
use entrexplorer_core::content_pack::ContentPack;
use entrexplorer_core::market_sim::{MarketState, SimulationOutcome, TurnResult, VentureConfig};
use entrexplorer_core::progression::PlayerProgress;
use serde::{Deserialize, Serialize};

use crate::chat::{check_room_name, ChatMessage, ChatRoom};
use crate::error::StoreError;
use crate::leaderboard::{LeaderEntry, Leaderboard};
use crate::persist;

pub fn now_millis() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

/// A simulation in progress.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActiveMarket {
    pub config: VentureConfig,
    pub initial: MarketState,
    pub state: MarketState,
    pub turns: Vec<TurnResult>,
}

impl ActiveMarket {
    pub fn new(config: VentureConfig, initial: MarketState) -> Self {
        Self {
            config,
            state: initial.clone(),
            initial,
            turns: Vec::new(),
        }
    }

    pub fn outcome(&self) -> SimulationOutcome {
        SimulationOutcome::new(self.initial.equity, self.state.clone(), self.turns.clone())
    }
}

/// A finished simulation, kept whether or not it succeeded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketSummary {
    pub seed: u64,
    pub learning_score: f64,
    pub turns_played: u32,
    pub bankrupt: bool,
    pub success: bool,
    pub score: i64,
    pub finished_at: u64,
}

impl MarketSummary {
    pub fn of(outcome: &SimulationOutcome, finished_at: u64) -> Self {
        Self {
            seed: outcome.final_state.seed,
            learning_score: outcome.final_state.learning_score,
            turns_played: outcome.final_state.turn,
            bankrupt: outcome.final_state.bankrupt,
            success: outcome.success,
            score: outcome.score,
            finished_at,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerRecord {
    pub player_id: String,
    pub display_name: String,
    pub token: String,
    pub progress: PlayerProgress,
    pub plan: BusinessPlan,
    pub market: Option<ActiveMarket>,
    #[serde(default)]
    pub market_history: Vec<MarketSummary>,
    /// Simulations started so far, including abandoned ones. Feeds the
    /// seed of the next run.
    #[serde(default)]
    pub market_runs: u64,
}

impl PlayerRecord {
    pub fn new(player_id: String, display_name: String, token: String, pack: &ContentPack) -> Self {
        Self {
            progress: PlayerProgress::new(player_id.clone()),
            plan: BusinessPlan::new(player_id.clone(), pack),
            player_id,
            display_name,
            token,
            market: None,
            market_history: Vec::new(),
            market_runs: 0,
        }
    }
}

pub struct Store {
    root: PathBuf,
    players: RwLock<HashMap<String, Arc<Mutex<PlayerRecord>>>>,
    tokens: RwLock<HashMap<String, String>>,
    leaderboard: Mutex<Leaderboard>,
    rooms: Mutex<HashMap<String, Arc<Mutex<ChatRoom>>>>,
}

fn lock<T>(m: &Mutex<T>) -> std::sync::MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, StoreError> {
    let bytes = fs::read(path)?;
    serde_json::from_slice(&bytes)
        .map_err(|e| StoreError::Storage(format!("{}: {e}", path.display())))
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>, StoreError> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "json") && !persist::is_temp_file(&path) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

impl Store {
    /// Opens (creating if needed) a state directory and loads everything in
    /// it. Leftovers of interrupted writes are removed.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let root = root.into();
        for dir in [root.clone(), root.join("players"), root.join("chat")] {
            fs::create_dir_all(&dir)?;
            persist::remove_stale_temps(&dir)?;
        }

        let mut players = HashMap::new();
        let mut tokens = HashMap::new();
        for path in json_files(&root.join("players"))? {
            let record: PlayerRecord = read_json(&path)?;
            tokens.insert(record.token.clone(), record.player_id.clone());
            players.insert(record.player_id.clone(), Arc::new(Mutex::new(record)));
        }

        let lb_path = root.join("leaderboard.json");
        let leaderboard = if lb_path.exists() {
            read_json(&lb_path)?
        } else {
            Leaderboard::default()
        };

        let mut rooms = HashMap::new();
        for path in json_files(&root.join("chat"))? {
            let room: ChatRoom = read_json(&path)?;
            rooms.insert(room.name.clone(), Arc::new(Mutex::new(room)));
        }

        Ok(Self {
            root,
            players: RwLock::new(players),
            tokens: RwLock::new(tokens),
            leaderboard: Mutex::new(leaderboard),
            rooms: Mutex::new(rooms),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn player_path(&self, player_id: &str) -> PathBuf {
        self.root.join("players").join(format!("{player_id}.json"))
    }

    fn room_path(&self, room: &str) -> PathBuf {
        self.root.join("chat").join(format!("{room}.json"))
    }

    fn write_player(&self, record: &PlayerRecord) -> Result<(), StoreError> {
        let bytes = serde_json::to_vec_pretty(record)?;
        persist::write_atomic(&self.player_path(&record.player_id), &bytes)?;
        Ok(())
    }

    /// Creates a player with a fresh id and session token.
    pub fn register(&self, display_name: &str, pack: &ContentPack) -> Result<PlayerRecord, StoreError> {
        let name = display_name.trim();
        if name.is_empty() || name.chars().count() > 64 {
            return Err(StoreError::InvalidDisplayName);
        }
        let record = PlayerRecord::new(
            uuid::Uuid::new_v4().simple().to_string(),
            name.to_owned(),
            uuid::Uuid::new_v4().simple().to_string(),
            pack,
        );
        self.persist_player_state(&record)?;
        Ok(record)
    }

    pub fn player_for_token(&self, token: &str) -> Option<String> {
        self.tokens.read().unwrap().get(token).cloned()
    }

    pub fn is_registered(&self, player_id: &str) -> bool {
        self.players.read().unwrap().contains_key(player_id)
    }

    pub fn player_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.players.read().unwrap().keys().cloned().collect();
        ids.sort();
        ids
    }

    fn handle(&self, player_id: &str) -> Result<Arc<Mutex<PlayerRecord>>, StoreError> {
        self.players
            .read()
            .unwrap()
            .get(player_id)
            .cloned()
            .ok_or_else(|| StoreError::UnknownPlayer(player_id.to_owned()))
    }

    /// A snapshot of the player's committed state.
    pub fn player(&self, player_id: &str) -> Result<PlayerRecord, StoreError> {
        let handle = self.handle(player_id)?;
        let record = lock(&handle).clone();
        Ok(record)
    }

    /// Writes `record` durably and makes it the player's current state.
    pub fn persist_player_state(&self, record: &PlayerRecord) -> Result<(), StoreError> {
        let existing = self.players.read().unwrap().get(&record.player_id).cloned();
        match existing {
            Some(handle) => {
                let mut current = lock(&handle);
                self.write_player(record)?;
                *current = record.clone();
            }
            None => {
                let mut players = self.players.write().unwrap();
                self.write_player(record)?;
                players.insert(
                    record.player_id.clone(),
                    Arc::new(Mutex::new(record.clone())),
                );
            }
        }
        self.tokens
            .write()
            .unwrap()
            .insert(record.token.clone(), record.player_id.clone());
        Ok(())
    }

    /// Runs `f` on a copy of the player's record while holding the player's
    /// lock. The copy is persisted and committed only if `f` succeeds.
    pub fn update_player<R, E>(
        &self,
        player_id: &str,
        f: impl FnOnce(&mut PlayerRecord) -> Result<R, E>,
    ) -> Result<R, E>
    where
        E: From<StoreError>,
    {
        let handle = self.handle(player_id)?;
        let mut current = lock(&handle);
        let mut draft = current.clone();
        let out = f(&mut draft)?;
        if draft != *current {
            draft.player_id = current.player_id.clone();
            draft.token = current.token.clone();
            self.write_player(&draft)?;
            *current = draft;
        }
        Ok(out)
    }

    /// Ranks a successful simulation. Failed runs are refused.
    pub fn record_result(
        &self,
        player_id: &str,
        outcome: &SimulationOutcome,
        achieved_at: u64,
    ) -> Result<(), StoreError> {
        if !outcome.success {
            return Err(StoreError::NotSuccessful);
        }
        self.record_score(player_id, outcome.score, achieved_at)
    }

    /// Lower-level entry point used by [`Store::record_result`].
    pub fn record_score(&self, player_id: &str, score: i64, achieved_at: u64) -> Result<(), StoreError> {
        if !self.is_registered(player_id) {
            return Err(StoreError::UnknownPlayer(player_id.to_owned()));
        }
        let mut lb = lock(&self.leaderboard);
        let mut draft = lb.clone();
        draft.record(LeaderEntry {
            player_id: player_id.to_owned(),
            score,
            achieved_at,
        });
        persist::write_atomic(
            &self.root.join("leaderboard.json"),
            &serde_json::to_vec_pretty(&draft)?,
        )?;
        *lb = draft;
        Ok(())
    }

    pub fn top_list(&self) -> Vec<LeaderEntry> {
        lock(&self.leaderboard).top_list()
    }

    pub fn leaderboard(&self) -> Leaderboard {
        lock(&self.leaderboard).clone()
    }

    fn room(&self, room: &str) -> Arc<Mutex<ChatRoom>> {
        lock(&self.rooms)
            .entry(room.to_owned())
            .or_insert_with(|| Arc::new(Mutex::new(ChatRoom::new(room))))
            .clone()
    }

    pub fn post_message(
        &self,
        room: &str,
        sender: &str,
        body: &str,
        sent_at: u64,
    ) -> Result<ChatMessage, StoreError> {
        check_room_name(room)?;
        if !self.is_registered(sender) {
            return Err(StoreError::UnknownPlayer(sender.to_owned()));
        }
        let handle = self.room(room);
        let mut current = lock(&handle);
        let message = current.next_message(sender, body, sent_at)?;
        let mut draft = current.clone();
        draft.messages.push(message.clone());
        persist::write_atomic(&self.room_path(room), &serde_json::to_vec(&draft)?)?;
        *current = draft;
        Ok(message)
    }

    pub fn list_messages(&self, room: &str, since_sequence: u64) -> Result<Vec<ChatMessage>, StoreError> {
        check_room_name(room)?;
        let handle = match lock(&self.rooms).get(room) {
            Some(h) => h.clone(),
            None => return Ok(Vec::new()),
        };
        let room = lock(&handle);
        Ok(room.since(since_sequence))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use entrexplorer_core::content_pack::default_pack;

    #[test]
    fn register_then_reload() {
        let dir = tempfile::tempdir().unwrap();
        let pack = default_pack();
        let store = Store::open(dir.path()).unwrap();
        let rec = store.register("Ana", &pack).unwrap();
        assert_eq!(store.player_for_token(&rec.token), Some(rec.player_id.clone()));

        let reopened = Store::open(dir.path()).unwrap();
        assert_eq!(reopened.player(&rec.player_id).unwrap(), rec);
        assert_eq!(reopened.player_for_token(&rec.token), Some(rec.player_id));
    }

    #[test]
    fn display_name_rules() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        let pack = default_pack();
        assert_eq!(store.register("  ", &pack), Err(StoreError::InvalidDisplayName));
        assert!(store.register(&"n".repeat(65), &pack).is_err());
    }

    #[test]
    fn failed_update_changes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        let rec = store.register("Ana", &default_pack()).unwrap();
        let before = fs::read(store.player_path(&rec.player_id)).unwrap();
        let r: Result<(), StoreError> = store.update_player(&rec.player_id, |p| {
            p.display_name = "changed".into();
            Err(StoreError::EmptyBody)
        });
        assert!(r.is_err());
        assert_eq!(store.player(&rec.player_id).unwrap(), rec);
        assert_eq!(fs::read(store.player_path(&rec.player_id)).unwrap(), before);
    }

    #[test]
    fn chat_requires_registered_sender() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        assert_eq!(
            store.post_message("lobby", "ghost", "hi", 0),
            Err(StoreError::UnknownPlayer("ghost".into()))
        );
        let rec = store.register("Ana", &default_pack()).unwrap();
        assert_eq!(store.post_message("lobby", &rec.player_id, "hi", 0).unwrap().sequence, 1);
        assert_eq!(store.list_messages("empty", 0).unwrap(), vec![]);
    }

    #[test]
    fn chat_survives_restart() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        let rec = store.register("Ana", &default_pack()).unwrap();
        for b in ["a", "b", "c"] {
            store.post_message("lobby", &rec.player_id, b, 5).unwrap();
        }
        drop(store);
        let store = Store::open(dir.path()).unwrap();
        let all = store.list_messages("lobby", 0).unwrap();
        assert_eq!(all.iter().map(|m| m.sequence).collect::<Vec<_>>(), [1, 2, 3]);
        assert_eq!(store.post_message("lobby", &rec.player_id, "d", 6).unwrap().sequence, 4);
    }

    #[test]
    fn leaderboard_is_durable() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        let rec = store.register("Ana", &default_pack()).unwrap();
        store.record_score(&rec.player_id, 12_345, 1).unwrap();
        store.record_score(&rec.player_id, 9_000, 2).unwrap();
        let reopened = Store::open(dir.path()).unwrap();
        let top = reopened.top_list();
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].score, 12_345);
        assert_eq!(
            store.record_score("ghost", 1, 1),
            Err(StoreError::UnknownPlayer("ghost".into()))
        );
    }
}
