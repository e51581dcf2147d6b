//! The Business Plan floor.
//!
//! A plan has one free-text section per curriculum level, keyed by the level
//! title and kept in level order. The key set is fixed when the plan is
//! created.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::content_pack::ContentPack;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("unknown section {0:?}")]
    UnknownSection(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanSection {
    pub key: String,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BusinessPlan {
    pub player_id: String,
    pub sections: Vec<PlanSection>,
    /// Milliseconds since the Unix epoch; strictly increases on every edit.
    pub last_modified: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Completeness {
    pub filled: usize,
    pub missing: Vec<String>,
}

fn now_millis() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

impl BusinessPlan {
    /// An empty plan with one section per level of `pack`.
    pub fn new(player_id: impl Into<String>, pack: &ContentPack) -> Self {
        Self::with_sections(player_id, pack.level_titles())
    }

    pub fn with_sections(player_id: impl Into<String>, keys: Vec<String>) -> Self {
        Self {
            player_id: player_id.into(),
            sections: keys
                .into_iter()
                .map(|key| PlanSection {
                    key,
                    body: String::new(),
                })
                .collect(),
            last_modified: now_millis(),
        }
    }

    pub fn section(&self, key: &str) -> Option<&str> {
        self.sections
            .iter()
            .find(|s| s.key == key)
            .map(|s| s.body.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.sections.iter().map(|s| s.key.as_str())
    }

    pub fn upsert_section(&mut self, key: &str, body: impl Into<String>) -> Result<(), PlanError> {
        let section = self
            .sections
            .iter_mut()
            .find(|s| s.key == key)
            .ok_or_else(|| PlanError::UnknownSection(key.to_owned()))?;
        section.body = body.into();
        self.last_modified = now_millis().max(self.last_modified + 1);
        Ok(())
    }

    pub fn completeness_report(&self) -> Completeness {
        let missing: Vec<String> = self
            .sections
            .iter()
            .filter(|s| s.body.trim().is_empty())
            .map(|s| s.key.clone())
            .collect();
        Completeness {
            filled: self.sections.len() - missing.len(),
            missing,
        }
    }

    /// Renders the plan as plain text: a title line, a blank line, then for
    /// each section `## <key>`, the body verbatim and a blank line. A body
    /// containing a line that starts with `## ` is written as is and will
    /// not split back cleanly.
    pub fn export(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# Business Plan: {}", self.player_id);
        out.push('\n');
        for section in &self.sections {
            let _ = writeln!(out, "## {}", section.key);
            out.push_str(&section.body);
            out.push_str("\n\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::content_pack::default_pack;

    fn plan() -> BusinessPlan {
        BusinessPlan::new("ana", &default_pack())
    }

    // Oracle: split the export on header lines and strip the two-newline
    // section terminator.
    fn split_export(doc: &str) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut rest = doc.split_once("\n\n").unwrap().1;
        while let Some(after) = rest.strip_prefix("## ") {
            let (key, tail) = after.split_once('\n').unwrap();
            let end = tail.find("\n\n## ").map(|i| i + 2).unwrap_or(tail.len());
            let body = &tail[..end];
            out.push((key.to_owned(), body.strip_suffix("\n\n").unwrap().to_owned()));
            rest = &tail[end..];
        }
        out
    }

    #[test]
    fn point_update() {
        let mut p = plan();
        let before = p.clone();
        p.upsert_section("SWOT Analysis", "Strong team, thin cash.").unwrap();
        assert_eq!(p.section("SWOT Analysis"), Some("Strong team, thin cash."));
        for (a, b) in p.sections.iter().zip(&before.sections) {
            if a.key != "SWOT Analysis" {
                assert_eq!(a, b);
            }
        }
        assert!(p.last_modified > before.last_modified);
    }

    #[test]
    fn clearing_is_allowed() {
        let mut p = plan();
        p.upsert_section("Price Strategy", "penetration").unwrap();
        p.upsert_section("Price Strategy", "").unwrap();
        assert_eq!(p.section("Price Strategy"), Some(""));
    }

    #[test]
    fn unknown_section() {
        let mut p = plan();
        assert_eq!(
            p.upsert_section("Exit Strategy", "x"),
            Err(PlanError::UnknownSection("Exit Strategy".into()))
        );
    }

    #[test]
    fn completeness() {
        let mut p = plan();
        let fresh = p.completeness_report();
        assert_eq!(fresh.filled, 0);
        assert_eq!(fresh.missing, default_pack().level_titles());

        for key in ["Market and Ideas", "Price Strategy", "Financial Viability"] {
            p.upsert_section(key, "text").unwrap();
        }
        p.upsert_section("SWOT Analysis", "   \n").unwrap();
        let r = p.completeness_report();
        assert_eq!(r.filled, 3);
        assert_eq!(r.missing.len(), 5);
        assert_eq!(r.missing[0], "Strategic Positioning");

        for key in default_pack().level_titles() {
            p.upsert_section(&key, "done").unwrap();
        }
        assert_eq!(
            p.completeness_report(),
            Completeness {
                filled: 8,
                missing: vec![]
            }
        );
    }

    #[test]
    fn fresh_export_has_eight_empty_sections() {
        let doc = plan().export();
        assert!(doc.starts_with("# Business Plan: ana\n\n## Market and Ideas\n\n\n"));
        let parsed = split_export(&doc);
        assert_eq!(parsed.len(), 8);
        assert!(parsed.iter().all(|(_, body)| body.is_empty()));
    }

    #[test]
    fn export_is_byte_stable() {
        let mut a = plan();
        a.upsert_section("Market and Ideas", "bakery").unwrap();
        let mut b = a.clone();
        b.last_modified += 1000;
        assert_eq!(a.export(), a.export());
        assert_eq!(a.export(), b.export());
    }

    #[test]
    fn export_splits_back_into_sections() {
        let mut p = plan();
        p.upsert_section("Market and Ideas", "Line one\nLine two").unwrap();
        p.upsert_section("SWOT Analysis", "ends with newline\n").unwrap();
        p.upsert_section("Financial Viability", "\n\nleading blanks").unwrap();
        let parsed = split_export(&p.export());
        let expected: Vec<(String, String)> = p
            .sections
            .iter()
            .map(|s| (s.key.clone(), s.body.clone()))
            .collect();
        assert_eq!(parsed, expected);
    }

    proptest::proptest! {
        #[test]
        fn key_set_is_stable(edits in proptest::collection::vec((0usize..10, "[a-z \n]{0,12}"), 0..20)) {
            let pack = default_pack();
            let mut keys = pack.level_titles();
            keys.push("Exit Strategy".into());
            keys.push("market and ideas".into());
            let mut p = BusinessPlan::new("x", &pack);
            for (k, body) in edits {
                let _ = p.upsert_section(&keys[k], body);
                let r = p.completeness_report();
                proptest::prop_assert_eq!(r.filled + r.missing.len(), 8);
            }
            let now: Vec<_> = p.keys().map(String::from).collect();
            proptest::prop_assert_eq!(now, pack.level_titles());
        }
    }
}
