//! Player progression through the eight curriculum levels.
//!
//! Levels open strictly in sequence: level `k + 1` unlocks once any attempt
//! at level `k` has passed. Every attempt is kept, and the learning score
//! feeding the virtual market is built from the best passing score per level.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::content_pack::{ContentPack, ProfileQuestionnaire, LEVEL_COUNT};

pub const DEFAULT_PASS_THRESHOLD: u8 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionRules {
    /// Minimum score percentage for an attempt to count as passed.
    pub pass_threshold: u8,
}

impl Default for ProgressionRules {
    fn default() -> Self {
        Self {
            pass_threshold: DEFAULT_PASS_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Answer {
    pub question_id: String,
    pub chosen_index: usize,
}

impl Answer {
    pub fn new(question_id: impl Into<String>, chosen_index: usize) -> Self {
        Self {
            question_id: question_id.into(),
            chosen_index,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelAttempt {
    pub level_number: u32,
    /// Answers in quiz order.
    pub answers: Vec<Answer>,
    pub correct: usize,
    pub score: u8,
    pub passed: bool,
    /// Position of this attempt in the player's overall attempt sequence,
    /// starting at 1.
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaScore {
    pub area: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport {
    /// One entry per questionnaire area, in questionnaire order.
    pub area_scores: Vec<AreaScore>,
    pub responses: Vec<ProfileResponse>,
}

impl ProfileReport {
    pub fn area_score(&self, area: &str) -> Option<f64> {
        self.area_scores
            .iter()
            .find(|a| a.area == area)
            .map(|a| a.score)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileResponse {
    pub item_id: String,
    pub rating: u8,
}

impl ProfileResponse {
    pub fn new(item_id: impl Into<String>, rating: u8) -> Self {
        Self {
            item_id: item_id.into(),
            rating,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningScore {
    /// Normalized aggregate in `[0, 1]`.
    pub value: f64,
    /// Best passing score for each level 1..=8, 0 when never passed.
    pub per_level: BTreeMap<u32, u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryRow {
    pub level_number: u32,
    pub question_id: String,
    pub prompt: String,
    pub chosen_option: String,
    pub correct_option: String,
    pub was_correct: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgressionError {
    #[error("level {0} does not exist")]
    UnknownLevel(u32),
    #[error("level {0} is locked until the previous level is passed")]
    LevelLocked(u32),
    #[error("incomplete answers: missing {missing:?}, unknown {unknown:?}, duplicate {duplicate:?}")]
    IncompleteAnswers {
        missing: Vec<String>,
        unknown: Vec<String>,
        duplicate: Vec<String>,
    },
    #[error("question {question_id} has no option {chosen_index}")]
    InvalidChoice {
        question_id: String,
        chosen_index: usize,
    },
    #[error("incomplete responses: missing {missing:?}, unknown {unknown:?}, duplicate {duplicate:?}")]
    IncompleteResponses {
        missing: Vec<String>,
        unknown: Vec<String>,
        duplicate: Vec<String>,
    },
    #[error("rating {rating} for item {item_id} is outside 1..=5")]
    RatingOutOfRange { item_id: String, rating: u8 },
}

/// `100 * correct / total`, rounded half-up.
pub fn score_percentage(correct: usize, total: usize) -> u8 {
    assert!(total > 0 && correct <= total);
    ((200 * correct + total) / (2 * total)) as u8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerProgress {
    pub player_id: String,
    pub attempts: BTreeMap<u32, Vec<LevelAttempt>>,
    pub profile: Option<ProfileReport>,
}

impl PlayerProgress {
    pub fn new(player_id: impl Into<String>) -> Self {
        Self {
            player_id: player_id.into(),
            attempts: BTreeMap::new(),
            profile: None,
        }
    }

    pub fn attempts_for(&self, level_number: u32) -> &[LevelAttempt] {
        self.attempts
            .get(&level_number)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    fn attempt_count(&self) -> u64 {
        self.attempts.values().map(|v| v.len() as u64).sum()
    }

    /// All attempts across levels, in the order they were submitted.
    pub fn attempts_in_order(&self) -> Vec<&LevelAttempt> {
        let mut all: Vec<_> = self.attempts.values().flatten().collect();
        all.sort_by_key(|a| a.timestamp);
        all
    }

    pub fn has_passed(&self, level_number: u32) -> bool {
        self.attempts_for(level_number).iter().any(|a| a.passed)
    }

    pub fn is_level_unlocked(&self, level_number: u32) -> bool {
        level_number == 1 || (level_number > 1 && self.has_passed(level_number - 1))
    }

    /// Scores a quiz attempt and appends it. Nothing changes on error.
    pub fn submit_assessment(
        &mut self,
        pack: &ContentPack,
        level_number: u32,
        answers: &[Answer],
        rules: &ProgressionRules,
    ) -> Result<LevelAttempt, ProgressionError> {
        let level = pack
            .level(level_number)
            .ok_or(ProgressionError::UnknownLevel(level_number))?;
        if !self.is_level_unlocked(level_number) {
            return Err(ProgressionError::LevelLocked(level_number));
        }

        let mut by_id: HashMap<&str, &Answer> = HashMap::new();
        let mut duplicate = Vec::new();
        for answer in answers {
            if by_id.insert(&answer.question_id, answer).is_some() {
                duplicate.push(answer.question_id.clone());
            }
        }
        let quiz_ids: HashSet<&str> = level.quiz.iter().map(|q| q.id.as_str()).collect();
        let missing: Vec<String> = level
            .quiz
            .iter()
            .filter(|q| !by_id.contains_key(q.id.as_str()))
            .map(|q| q.id.clone())
            .collect();
        let unknown: Vec<String> = answers
            .iter()
            .filter(|a| !quiz_ids.contains(a.question_id.as_str()))
            .map(|a| a.question_id.clone())
            .collect();
        if !(missing.is_empty() && unknown.is_empty() && duplicate.is_empty()) {
            return Err(ProgressionError::IncompleteAnswers {
                missing,
                unknown,
                duplicate,
            });
        }

        let mut ordered = Vec::with_capacity(level.quiz.len());
        let mut correct = 0;
        for question in &level.quiz {
            let answer = by_id[question.id.as_str()];
            if answer.chosen_index >= question.options.len() {
                return Err(ProgressionError::InvalidChoice {
                    question_id: question.id.clone(),
                    chosen_index: answer.chosen_index,
                });
            }
            if answer.chosen_index == question.correct_index {
                correct += 1;
            }
            ordered.push(answer.clone());
        }

        let score = score_percentage(correct, level.quiz.len());
        let attempt = LevelAttempt {
            level_number,
            answers: ordered,
            correct,
            score,
            passed: score >= rules.pass_threshold,
            timestamp: self.attempt_count() + 1,
        };
        self.attempts
            .entry(level_number)
            .or_default()
            .push(attempt.clone());
        Ok(attempt)
    }

    pub fn learning_score(&self) -> LearningScore {
        let per_level: BTreeMap<u32, u8> = (1..=LEVEL_COUNT as u32)
            .map(|k| {
                let best = self
                    .attempts_for(k)
                    .iter()
                    .filter(|a| a.passed)
                    .map(|a| a.score)
                    .max()
                    .unwrap_or(0);
                (k, best)
            })
            .collect();
        let total: u32 = per_level.values().map(|&s| u32::from(s)).sum();
        LearningScore {
            value: f64::from(total) / (100.0 * LEVEL_COUNT as f64),
            per_level,
        }
    }

    /// Scores the Lift Station questionnaire and stores the report, replacing
    /// any earlier one.
    pub fn record_profile_questionnaire(
        &mut self,
        questionnaire: &ProfileQuestionnaire,
        responses: &[ProfileResponse],
    ) -> Result<ProfileReport, ProgressionError> {
        let mut by_id: HashMap<&str, u8> = HashMap::new();
        let mut duplicate = Vec::new();
        for r in responses {
            if by_id.insert(&r.item_id, r.rating).is_some() {
                duplicate.push(r.item_id.clone());
            }
        }
        let known: HashSet<&str> = questionnaire
            .areas
            .iter()
            .flat_map(|a| a.items.iter().map(|i| i.id.as_str()))
            .collect();
        let missing: Vec<String> = questionnaire
            .areas
            .iter()
            .flat_map(|a| &a.items)
            .filter(|i| !by_id.contains_key(i.id.as_str()))
            .map(|i| i.id.clone())
            .collect();
        let unknown: Vec<String> = responses
            .iter()
            .filter(|r| !known.contains(r.item_id.as_str()))
            .map(|r| r.item_id.clone())
            .collect();
        if !(missing.is_empty() && unknown.is_empty() && duplicate.is_empty()) {
            return Err(ProgressionError::IncompleteResponses {
                missing,
                unknown,
                duplicate,
            });
        }
        if let Some(bad) = responses.iter().find(|r| !(1..=5).contains(&r.rating)) {
            return Err(ProgressionError::RatingOutOfRange {
                item_id: bad.item_id.clone(),
                rating: bad.rating,
            });
        }

        let area_scores = questionnaire
            .areas
            .iter()
            .map(|area| {
                let sum: u32 = area
                    .items
                    .iter()
                    .map(|i| u32::from(by_id[i.id.as_str()]))
                    .sum();
                AreaScore {
                    area: area.name.clone(),
                    score: f64::from(sum) / area.items.len() as f64,
                }
            })
            .collect();
        let report = ProfileReport {
            area_scores,
            responses: responses.to_vec(),
        };
        self.profile = Some(report.clone());
        Ok(report)
    }

    /// Every answered question across all attempts, in attempt order.
    /// Answers to questions no longer present in `pack` are skipped.
    pub fn answer_history(&self, pack: &ContentPack) -> Vec<HistoryRow> {
        self.attempts_in_order()
            .into_iter()
            .flat_map(|attempt| {
                attempt.answers.iter().filter_map(move |answer| {
                    let (_, question) = pack.question(&answer.question_id)?;
                    Some(HistoryRow {
                        level_number: attempt.level_number,
                        question_id: question.id.clone(),
                        prompt: question.prompt.clone(),
                        chosen_option: question
                            .options
                            .get(answer.chosen_index)
                            .cloned()
                            .unwrap_or_default(),
                        correct_option: question.correct_option().unwrap_or_default().to_owned(),
                        was_correct: answer.chosen_index == question.correct_index,
                    })
                })
            })
            .collect()
    }
}
