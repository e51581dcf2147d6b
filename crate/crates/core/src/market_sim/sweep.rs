use serde::{Deserialize, Serialize};

use super::{run_policy, MarketError, MarketState, Policy, VentureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub learning_score: f64,
    pub successes: u32,
    pub trials: u32,
    pub success_rate: f64,
}

/// Evenly spaced values from `start` to `end` inclusive. Each value is
/// computed from its index so no rounding drift accumulates.
pub fn learning_grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    if !(step.is_finite() && step > 0.0) || end < start {
        return vec![start];
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|i| {
            let v = start + i as f64 * step;
            (v * 1e9).round() / 1e9
        })
        .collect()
}

/// Number of successful runs out of `trials`, using seeds
/// `base_seed, base_seed + 1, …`.
pub fn success_rate(
    config: &VentureConfig,
    policy: &dyn Policy,
    learning_score: f64,
    trials: u32,
    base_seed: u64,
) -> Result<SweepPoint, MarketError> {
    let mut successes = 0;
    for i in 0..trials {
        let state = MarketState::new(config, learning_score, base_seed.wrapping_add(u64::from(i)))?;
        if run_policy(&state, policy, config)?.success {
            successes += 1;
        }
    }
    Ok(SweepPoint {
        learning_score,
        successes,
        trials,
        success_rate: if trials == 0 {
            0.0
        } else {
            f64::from(successes) / f64::from(trials)
        },
    })
}

/// Success rate at each learning score. The same seeds are used at every
/// point, so the curve compares identical markets.
pub fn sweep_learning(
    config: &VentureConfig,
    policy: &dyn Policy,
    grid: &[f64],
    trials: u32,
    base_seed: u64,
) -> Result<Vec<SweepPoint>, MarketError> {
    grid.iter()
        .map(|&l| success_rate(config, policy, l, trials, base_seed))
        .collect()
}
