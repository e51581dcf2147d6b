use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ContentPack, Exercise, FLOOR_COUNT, LEVEL_COUNT, PROFILE_AREA_COUNT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "ERROR",
            Severity::Warning => "WARNING",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Location in the document, e.g. `levels[2].quiz[0].correct_index`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.severity, self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics
            .iter()
            .filter(|d| d.severity == Severity::Error)
    }
}

#[derive(Default)]
struct Collector {
    diagnostics: Vec<Diagnostic>,
}

impl Collector {
    fn error(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.push(Severity::Error, path.into(), message.into());
    }

    fn warn(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.push(Severity::Warning, path.into(), message.into());
    }

    fn push(&mut self, severity: Severity, path: String, message: String) {
        self.diagnostics.push(Diagnostic {
            severity,
            path,
            message,
        });
    }

    fn finish(self) -> ValidationReport {
        let ok = !self
            .diagnostics
            .iter()
            .any(|d| d.severity == Severity::Error);
        ValidationReport {
            ok,
            diagnostics: self.diagnostics,
        }
    }
}

fn blank(s: &str) -> bool {
    s.trim().is_empty()
}

/// Checks every structural rule of a pack. Diagnostics come out in document
/// order: version, levels, floors, taxonomies, profile.
pub fn validate_pack(pack: &ContentPack) -> ValidationReport {
    let mut out = Collector::default();

    if blank(&pack.version) {
        out.error("version", "version must not be empty");
    }

    check_levels(pack, &mut out);
    check_floors(pack, &mut out);
    check_taxonomies(pack, &mut out);
    check_profile(pack, &mut out);

    out.finish()
}

fn check_levels(pack: &ContentPack, out: &mut Collector) {
    if pack.levels.len() != LEVEL_COUNT {
        out.error(
            "levels",
            format!(
                "expected {LEVEL_COUNT} levels, found {}",
                pack.levels.len()
            ),
        );
    }

    let mut titles: HashMap<&str, usize> = HashMap::new();
    let mut question_ids: HashMap<&str, String> = HashMap::new();
    let mut exercise_ids: HashSet<&str> = HashSet::new();

    for (i, level) in pack.levels.iter().enumerate() {
        let at = format!("levels[{i}]");
        let expected = i as u32 + 1;
        if level.number != expected {
            out.error(
                format!("{at}.number"),
                format!("expected level number {expected}, found {}", level.number),
            );
        }
        if blank(&level.title) {
            out.error(format!("{at}.title"), "title must not be empty");
        } else if let Some(first) = titles.insert(level.title.as_str(), i) {
            out.error(
                format!("{at}.title"),
                format!("duplicate level title {:?} (first at levels[{first}])", level.title),
            );
        }

        for (u, unit) in level.content_units.iter().enumerate() {
            if blank(&unit.body) {
                out.warn(format!("{at}.content_units[{u}].body"), "empty content unit");
            }
        }

        if level.quiz.is_empty() {
            out.error(format!("{at}.quiz"), "level must end with at least one question");
        }
        for (q, question) in level.quiz.iter().enumerate() {
            let qat = format!("{at}.quiz[{q}]");
            if blank(&question.id) {
                out.error(format!("{qat}.id"), "question id must not be empty");
            } else if let Some(first) = question_ids.get(question.id.as_str()) {
                out.error(
                    format!("{qat}.id"),
                    format!("duplicate question id {:?} (first at {first})", question.id),
                );
            } else {
                question_ids.insert(&question.id, qat.clone());
            }
            if blank(&question.prompt) {
                out.error(format!("{qat}.prompt"), "prompt must not be empty");
            }
            if question.options.len() < 2 {
                out.error(
                    format!("{qat}.options"),
                    format!("expected at least 2 options, found {}", question.options.len()),
                );
            }
            for (o, option) in question.options.iter().enumerate() {
                if blank(option) {
                    out.error(format!("{qat}.options[{o}]"), "option must not be empty");
                }
            }
            if question.correct_index >= question.options.len() {
                out.error(
                    format!("{qat}.correct_index"),
                    format!(
                        "correct_index {} out of range for {} options",
                        question.correct_index,
                        question.options.len()
                    ),
                );
            }
        }

        for (e, exercise) in level.exercises.iter().enumerate() {
            let eat = format!("{at}.exercises[{e}]");
            if blank(exercise.id()) {
                out.error(format!("{eat}.id"), "exercise id must not be empty");
            } else if !exercise_ids.insert(exercise.id()) {
                out.error(
                    format!("{eat}.id"),
                    format!("duplicate exercise id {:?}", exercise.id()),
                );
            }
            match exercise {
                Exercise::Classification { taxonomy, .. } => {
                    if !pack.taxonomies.contains_key(taxonomy) {
                        out.error(
                            format!("{eat}.taxonomy"),
                            format!("unknown taxonomy {taxonomy:?}"),
                        );
                    }
                }
                Exercise::Ordering { stages, .. } => {
                    if stages.len() < 2 {
                        out.error(
                            format!("{eat}.stages"),
                            format!("expected at least 2 stages, found {}", stages.len()),
                        );
                    }
                    let mut seen = HashSet::new();
                    for (s, stage) in stages.iter().enumerate() {
                        if blank(stage) {
                            out.error(format!("{eat}.stages[{s}]"), "stage must not be empty");
                        } else if !seen.insert(stage.as_str()) {
                            out.error(
                                format!("{eat}.stages[{s}]"),
                                format!("duplicate stage {stage:?}"),
                            );
                        }
                    }
                }
            }
        }
    }
}

fn check_floors(pack: &ContentPack, out: &mut Collector) {
    if pack.floors.len() != FLOOR_COUNT {
        out.error(
            "floors",
            format!(
                "expected {FLOOR_COUNT} floors, found {}",
                pack.floors.len()
            ),
        );
    }
    let mut kinds = BTreeSet::new();
    for (i, floor) in pack.floors.iter().enumerate() {
        let at = format!("floors[{i}]");
        if !kinds.insert(floor.kind) {
            out.error(
                format!("{at}.kind"),
                format!("duplicate floor kind {}", floor.kind),
            );
        }
        if blank(&floor.title) {
            out.error(format!("{at}.title"), "title must not be empty");
        }
        if floor.kind != super::FloorKind::Recreation && !floor.static_resources.is_empty() {
            out.warn(
                format!("{at}.static_resources"),
                "static resources are only shown on the Recreation floor",
            );
        }
        for (r, res) in floor.static_resources.iter().enumerate() {
            if blank(&res.uri) {
                out.error(format!("{at}.static_resources[{r}].uri"), "uri must not be empty");
            }
        }
    }
}

fn check_taxonomies(pack: &ContentPack, out: &mut Collector) {
    for (key, taxonomy) in &pack.taxonomies {
        let at = format!("taxonomies.{key}");
        if taxonomy.name != *key {
            out.error(
                format!("{at}.name"),
                format!("name {:?} does not match its key {key:?}", taxonomy.name),
            );
        }
        if taxonomy.categories.is_empty() {
            out.error(format!("{at}.categories"), "taxonomy has no categories");
        }
        let mut categories = HashSet::new();
        for (c, category) in taxonomy.categories.iter().enumerate() {
            if blank(category) {
                out.error(format!("{at}.categories[{c}]"), "category must not be empty");
            } else if !categories.insert(category.as_str()) {
                out.error(
                    format!("{at}.categories[{c}]"),
                    format!("duplicate category {category:?}"),
                );
            }
        }
        if taxonomy.items.is_empty() {
            out.warn(format!("{at}.items"), "taxonomy has no items to classify");
        }
        let mut labels = HashSet::new();
        for (it, item) in taxonomy.items.iter().enumerate() {
            if blank(&item.label) {
                out.error(format!("{at}.items[{it}].label"), "label must not be empty");
            } else if !labels.insert(item.label.as_str()) {
                out.error(
                    format!("{at}.items[{it}].label"),
                    format!("duplicate item label {:?}", item.label),
                );
            }
            if !categories.contains(item.category.as_str()) {
                out.error(
                    format!("{at}.items[{it}].category"),
                    format!("unknown category {:?}", item.category),
                );
            }
        }
    }
}

fn check_profile(pack: &ContentPack, out: &mut Collector) {
    let areas = &pack.profile.areas;
    if areas.len() != PROFILE_AREA_COUNT {
        out.error(
            "profile.areas",
            format!(
                "expected {PROFILE_AREA_COUNT} profile areas, found {}",
                areas.len()
            ),
        );
    }
    let mut names = HashSet::new();
    let mut ids = HashSet::new();
    for (a, area) in areas.iter().enumerate() {
        let at = format!("profile.areas[{a}]");
        if blank(&area.name) {
            out.error(format!("{at}.name"), "area name must not be empty");
        } else if !names.insert(area.name.as_str()) {
            out.error(format!("{at}.name"), format!("duplicate area {:?}", area.name));
        }
        if area.items.is_empty() {
            out.error(format!("{at}.items"), "area has no items");
        }
        for (i, item) in area.items.iter().enumerate() {
            if blank(&item.id) {
                out.error(format!("{at}.items[{i}].id"), "item id must not be empty");
            } else if !ids.insert(item.id.as_str()) {
                out.error(
                    format!("{at}.items[{i}].id"),
                    format!("duplicate item id {:?}", item.id),
                );
            }
            if blank(&item.statement) {
                out.error(format!("{at}.items[{i}].statement"), "statement must not be empty");
            }
        }
    }
}
