//! The Top List floor: the best successful players and their scores.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Number of players shown on the top list.
pub const TOP_LIST_LEN: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeaderEntry {
    pub player_id: String,
    pub score: i64,
    /// Milliseconds since the Unix epoch.
    pub achieved_at: u64,
}

/// Ranking order: higher score first, then earlier achievement, then
/// player id.
pub fn rank_order(a: &LeaderEntry, b: &LeaderEntry) -> Ordering {
    b.score
        .cmp(&a.score)
        .then(a.achieved_at.cmp(&b.achieved_at))
        .then_with(|| a.player_id.cmp(&b.player_id))
}

/// Best entry per player plus the full record of successful runs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leaderboard {
    best: BTreeMap<String, LeaderEntry>,
    history: Vec<LeaderEntry>,
}

impl Leaderboard {
    /// Adds a successful result, keeping only the player's best. An equal
    /// score does not replace the earlier entry.
    pub fn record(&mut self, entry: LeaderEntry) {
        self.history.push(entry.clone());
        match self.best.get(&entry.player_id) {
            Some(current) if current.score >= entry.score => {}
            _ => {
                self.best.insert(entry.player_id.clone(), entry);
            }
        }
    }

    pub fn best_for(&self, player_id: &str) -> Option<&LeaderEntry> {
        self.best.get(player_id)
    }

    pub fn history(&self) -> &[LeaderEntry] {
        &self.history
    }

    pub fn top(&self, n: usize) -> Vec<LeaderEntry> {
        let mut all: Vec<LeaderEntry> = self.best.values().cloned().collect();
        all.sort_by(rank_order);
        all.truncate(n);
        all
    }

    pub fn top_list(&self) -> Vec<LeaderEntry> {
        self.top(TOP_LIST_LEN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: &str, score: i64, at: u64) -> LeaderEntry {
        LeaderEntry {
            player_id: p.into(),
            score,
            achieved_at: at,
        }
    }

    #[test]
    fn empty() {
        assert!(Leaderboard::default().top_list().is_empty());
    }

    #[test]
    fn best_score_is_kept() {
        let mut lb = Leaderboard::default();
        lb.record(e("ana", 12_345, 1));
        lb.record(e("ana", 9_000, 2));
        assert_eq!(lb.top_list(), vec![e("ana", 12_345, 1)]);
        lb.record(e("ana", 12_345, 3));
        assert_eq!(lb.best_for("ana"), Some(&e("ana", 12_345, 1)));
        lb.record(e("ana", 20_000, 4));
        assert_eq!(lb.best_for("ana"), Some(&e("ana", 20_000, 4)));
        assert_eq!(lb.history().len(), 4);
    }

    #[test]
    fn ties_break_on_time_then_id() {
        let mut lb = Leaderboard::default();
        lb.record(e("zoe", 500, 10));
        lb.record(e("bob", 500, 20));
        lb.record(e("amy", 500, 20));
        lb.record(e("top", 900, 99));
        let ids: Vec<_> = lb.top_list().into_iter().map(|x| x.player_id).collect();
        assert_eq!(ids, ["top", "zoe", "amy", "bob"]);
    }

    #[test]
    fn truncates_to_fifteen() {
        let mut lb = Leaderboard::default();
        for i in 0..40 {
            lb.record(e(&format!("p{i:02}"), i, 0));
        }
        let top = lb.top_list();
        assert_eq!(top.len(), 15);
        assert_eq!(top[0].score, 39);
        assert_eq!(top[14].score, 25);
    }
}
