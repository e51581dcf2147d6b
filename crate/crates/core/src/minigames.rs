//! Classification and ordering exercises.
//!
//! Classification rounds present a taxonomy's items in a seeded shuffle and
//! score the player's placements. Ordering rounds score a rearranged list of
//! stages by counting the positions that match the canonical order. Results
//! are formative only and do not feed the learning score.
//!
//! The shuffle is a Durstenfeld (in-place Fisher–Yates) shuffle driven by a
//! ChaCha8 stream keyed with the round seed. Each swap index is drawn with
//! Lemire's multiply-and-reject method so every permutation is equally
//! likely and the order depends only on the seed.

use std::collections::{HashMap, HashSet};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::content_pack::Taxonomy;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinigameError {
    #[error("taxonomy {0:?} has no items")]
    EmptyTaxonomy(String),
    #[error("round {expected:?} does not match taxonomy {found:?}")]
    TaxonomyMismatch { expected: String, found: String },
    #[error("no placement for {0:?}")]
    MissingPlacement(String),
    #[error("placement for {0:?} which is not part of the round")]
    UnexpectedItem(String),
    #[error("unknown category {category:?} for {label:?}")]
    UnknownCategory { label: String, category: String },
    #[error("given order is not a permutation of the expected stages")]
    NotAPermutation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRound {
    pub taxonomy_name: String,
    pub presented_items: Vec<String>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundScore {
    pub correct: usize,
    pub total: usize,
    pub fraction: f64,
}

impl RoundScore {
    fn new(correct: usize, total: usize) -> Self {
        debug_assert!(total > 0);
        Self {
            correct,
            total,
            fraction: correct as f64 / total as f64,
        }
    }
}

/// Uniform integer in `0..bound` (Lemire 2019).
fn bounded(rng: &mut impl RngCore, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let threshold = bound.wrapping_neg() % bound;
    loop {
        let m = u128::from(rng.next_u64()) * u128::from(bound);
        if (m as u64) >= threshold {
            return (m >> 64) as u64;
        }
    }
}

/// Seeded Durstenfeld shuffle, see the module docs.
pub fn seeded_shuffle<T>(items: &mut [T], seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..items.len()).rev() {
        let j = bounded(&mut rng, i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

pub fn new_classification_round(
    taxonomy: &Taxonomy,
    seed: u64,
) -> Result<ClassificationRound, MinigameError> {
    if taxonomy.items.is_empty() {
        return Err(MinigameError::EmptyTaxonomy(taxonomy.name.clone()));
    }
    let mut presented_items: Vec<String> =
        taxonomy.items.iter().map(|i| i.label.clone()).collect();
    seeded_shuffle(&mut presented_items, seed);
    Ok(ClassificationRound {
        taxonomy_name: taxonomy.name.clone(),
        presented_items,
        seed,
    })
}

pub fn score_classification(
    round: &ClassificationRound,
    taxonomy: &Taxonomy,
    placements: &HashMap<String, String>,
) -> Result<RoundScore, MinigameError> {
    if round.taxonomy_name != taxonomy.name {
        return Err(MinigameError::TaxonomyMismatch {
            expected: round.taxonomy_name.clone(),
            found: taxonomy.name.clone(),
        });
    }
    let presented: HashSet<&str> = round.presented_items.iter().map(String::as_str).collect();
    if let Some(extra) = placements.keys().find(|k| !presented.contains(k.as_str())) {
        return Err(MinigameError::UnexpectedItem(extra.clone()));
    }

    let mut correct = 0;
    for label in &round.presented_items {
        let placed = placements
            .get(label)
            .ok_or_else(|| MinigameError::MissingPlacement(label.clone()))?;
        if !taxonomy.has_category(placed) {
            return Err(MinigameError::UnknownCategory {
                label: label.clone(),
                category: placed.clone(),
            });
        }
        if taxonomy.category_of(label) == Some(placed.as_str()) {
            correct += 1;
        }
    }
    Ok(RoundScore::new(correct, round.presented_items.len()))
}

pub fn score_ordering(expected: &[String], given: &[String]) -> Result<RoundScore, MinigameError> {
    if expected.is_empty() || expected.len() != given.len() {
        return Err(MinigameError::NotAPermutation);
    }
    let mut want: Vec<&String> = expected.iter().collect();
    let mut got: Vec<&String> = given.iter().collect();
    want.sort();
    got.sort();
    if want != got {
        return Err(MinigameError::NotAPermutation);
    }
    let correct = expected.iter().zip(given).filter(|(e, g)| e == g).count();
    Ok(RoundScore::new(correct, expected.len()))
}
