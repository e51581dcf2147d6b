//! The data-driven game definition.
//!
//! A [`ContentPack`] describes the eight curriculum levels (content, quiz and
//! exercises), the six feature floors, the named taxonomies used by the
//! classification mini-games and the entrepreneur profile questionnaire. The
//! engine itself is content-agnostic: everything a player reads or answers
//! comes from the pack.
//!
//! Packs are stored as a single UTF-8 JSON document. [`load_pack`] parses and
//! validates one; [`default_pack`] returns the built-in curriculum.

mod validate;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use validate::{validate_pack, Diagnostic, Severity, ValidationReport};

/// Number of curriculum levels a pack must define.
pub const LEVEL_COUNT: usize = 8;
/// Number of feature floors a pack must define.
pub const FLOOR_COUNT: usize = 6;
/// Number of areas in the entrepreneur profile questionnaire.
pub const PROFILE_AREA_COUNT: usize = 6;

const DEFAULT_PACK_JSON: &str = include_str!("../../assets/default_pack.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContentPack {
    pub version: String,
    pub levels: Vec<Level>,
    pub floors: Vec<Floor>,
    pub taxonomies: BTreeMap<String, Taxonomy>,
    pub profile: ProfileQuestionnaire,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub number: u32,
    pub title: String,
    #[serde(default)]
    pub content_units: Vec<ContentUnit>,
    pub quiz: Vec<QuizQuestion>,
    #[serde(default)]
    pub exercises: Vec<Exercise>,
}

/// A block of prose shown on a level floor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContentUnit {
    pub heading: String,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuizQuestion {
    pub id: String,
    pub prompt: String,
    pub options: Vec<String>,
    pub correct_index: usize,
}

impl QuizQuestion {
    pub fn correct_option(&self) -> Option<&str> {
        self.options.get(self.correct_index).map(String::as_str)
    }
}

/// A practice round attached to a level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Exercise {
    /// Place every item of a taxonomy into its category.
    Classification {
        id: String,
        title: String,
        taxonomy: String,
    },
    /// Put a list of stages back in their canonical order.
    Ordering {
        id: String,
        title: String,
        stages: Vec<String>,
    },
}

impl Exercise {
    pub fn id(&self) -> &str {
        match self {
            Exercise::Classification { id, .. } | Exercise::Ordering { id, .. } => id,
        }
    }

    pub fn taxonomy(&self) -> Option<&str> {
        match self {
            Exercise::Classification { taxonomy, .. } => Some(taxonomy),
            Exercise::Ordering { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FloorKind {
    BusinessPlan,
    Recreation,
    LiftStation,
    VirtualMarket,
    Chat,
    TopList,
}

impl FloorKind {
    pub const ALL: [FloorKind; FLOOR_COUNT] = [
        FloorKind::BusinessPlan,
        FloorKind::Recreation,
        FloorKind::LiftStation,
        FloorKind::VirtualMarket,
        FloorKind::Chat,
        FloorKind::TopList,
    ];
}

impl fmt::Display for FloorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Floor {
    pub kind: FloorKind,
    pub title: String,
    #[serde(default)]
    pub static_resources: Vec<Resource>,
}

/// A link shown on the Recreation floor. Never fetched by the engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resource {
    pub label: String,
    pub uri: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Taxonomy {
    pub name: String,
    pub categories: Vec<String>,
    pub items: Vec<TaxonomyItem>,
}

impl Taxonomy {
    /// The category an item label belongs to.
    pub fn category_of(&self, label: &str) -> Option<&str> {
        self.items
            .iter()
            .find(|item| item.label == label)
            .map(|item| item.category.as_str())
    }

    pub fn has_category(&self, category: &str) -> bool {
        self.categories.iter().any(|c| c == category)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaxonomyItem {
    pub label: String,
    pub category: String,
}

/// The Lift Station self-assessment: rated statements grouped by area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileQuestionnaire {
    pub areas: Vec<ProfileArea>,
}

impl ProfileQuestionnaire {
    pub fn item_count(&self) -> usize {
        self.areas.iter().map(|a| a.items.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileArea {
    pub name: String,
    pub items: Vec<ProfileItem>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileItem {
    pub id: String,
    pub statement: String,
}

impl ContentPack {
    pub fn level(&self, number: u32) -> Option<&Level> {
        self.levels.iter().find(|l| l.number == number)
    }

    pub fn floor(&self, kind: FloorKind) -> Option<&Floor> {
        self.floors.iter().find(|f| f.kind == kind)
    }

    pub fn taxonomy(&self, name: &str) -> Option<&Taxonomy> {
        self.taxonomies.get(name)
    }

    /// Level titles in level order. These are also the business plan sections.
    pub fn level_titles(&self) -> Vec<String> {
        self.levels.iter().map(|l| l.title.clone()).collect()
    }

    /// Looks up a quiz question anywhere in the pack.
    pub fn question(&self, id: &str) -> Option<(&Level, &QuizQuestion)> {
        self.levels
            .iter()
            .find_map(|l| l.quiz.iter().find(|q| q.id == id).map(|q| (l, q)))
    }

    /// Serializes the pack to its JSON document form.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("content pack serializes")
    }

    /// A copy of the pack safe to hand to players: correct answers removed.
    pub fn public_view(&self) -> serde_json::Value {
        let mut value = serde_json::to_value(self).expect("content pack serializes");
        if let Some(levels) = value.get_mut("levels").and_then(|v| v.as_array_mut()) {
            for level in levels {
                if let Some(quiz) = level.get_mut("quiz").and_then(|v| v.as_array_mut()) {
                    for question in quiz {
                        if let Some(obj) = question.as_object_mut() {
                            obj.remove("correct_index");
                        }
                    }
                }
            }
        }
        value
    }
}

#[derive(Debug, Error)]
pub enum PackError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid content pack: {}", summarize(.0))]
    Validation(ValidationReport),
}

fn summarize(report: &ValidationReport) -> String {
    report
        .errors()
        .map(|d| format!("{}: {}", d.path, d.message))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Parses a pack document and rejects it unless it validates cleanly.
pub fn load_pack(source: &[u8]) -> Result<ContentPack, PackError> {
    let pack: ContentPack = serde_json::from_slice(source).map_err(|e| PackError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let report = validate_pack(&pack);
    if report.ok {
        Ok(pack)
    } else {
        Err(PackError::Validation(report))
    }
}

/// The built-in curriculum pack.
pub fn default_pack() -> ContentPack {
    serde_json::from_str(DEFAULT_PACK_JSON).expect("embedded default pack is well-formed")
}

/// The raw JSON document of the built-in pack.
pub fn default_pack_json() -> &'static str {
    DEFAULT_PACK_JSON
}
