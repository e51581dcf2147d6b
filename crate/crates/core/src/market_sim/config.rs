use serde::{Deserialize, Serialize};

use super::{Distribution, MarketError};

/// A value per distribution strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ByDistribution {
    pub intensive: f64,
    pub selective: f64,
    pub exclusive: f64,
}

impl ByDistribution {
    pub fn get(&self, d: Distribution) -> f64 {
        match d {
            Distribution::Intensive => self.intensive,
            Distribution::Selective => self.selective,
            Distribution::Exclusive => self.exclusive,
        }
    }

    fn values(&self) -> [f64; 3] {
        [self.intensive, self.selective, self.exclusive]
    }
}

/// Every tunable constant of the virtual market.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VentureConfig {
    /// Potential buyers per turn.
    pub base_population: f64,
    pub reference_price: f64,
    pub unit_cost: f64,
    /// Fixed costs per turn, booked under SGA.
    pub fixed_costs: f64,
    /// Communication spend at which awareness reaches `1 - 1/e`.
    pub awareness_scale: f64,
    pub elasticity_by_distribution: ByDistribution,
    pub reach_by_distribution: ByDistribution,
    pub strategy_consistency_bonus: f64,
    pub strategy_consistency_penalty: f64,
    /// Penetration pricing is consistent at or below this fraction of the
    /// reference price.
    pub penetration_max_ratio: f64,
    /// Premium and skimming pricing are consistent at or above this multiple
    /// of the reference price.
    pub premium_min_ratio: f64,
    pub initial_cash: f64,
    pub initial_equipment: f64,
    pub initial_debt: f64,
    /// Interest per turn as a fraction of outstanding debt.
    pub interest_rate: f64,
    pub tax_rate: f64,
    /// Number of turns; equipment depreciates straight-line over it.
    pub horizon: u32,
    /// Standard deviation of the log of the multiplicative demand noise.
    pub noise_sigma: f64,
}

impl Default for VentureConfig {
    fn default() -> Self {
        Self {
            base_population: 10_000.0,
            reference_price: 10.0,
            unit_cost: 6.0,
            fixed_costs: 8_000.0,
            awareness_scale: 5_000.0,
            elasticity_by_distribution: ByDistribution {
                intensive: 1.8,
                selective: 1.5,
                exclusive: 1.0,
            },
            reach_by_distribution: ByDistribution {
                intensive: 1.0,
                selective: 0.6,
                exclusive: 0.25,
            },
            strategy_consistency_bonus: 1.05,
            strategy_consistency_penalty: 0.95,
            penetration_max_ratio: 0.8,
            premium_min_ratio: 1.3,
            initial_cash: 50_000.0,
            initial_equipment: 24_000.0,
            initial_debt: 20_000.0,
            interest_rate: 0.01,
            tax_rate: 0.25,
            horizon: 12,
            noise_sigma: 0.15,
        }
    }
}

impl VentureConfig {
    pub fn depreciation_per_turn(&self) -> f64 {
        self.initial_equipment / f64::from(self.horizon)
    }

    pub fn validate(&self) -> Result<(), MarketError> {
        let bad = |what: &str| Err(MarketError::InvalidConfig(what.to_owned()));
        let money = [
            ("base_population", self.base_population),
            ("reference_price", self.reference_price),
            ("unit_cost", self.unit_cost),
            ("fixed_costs", self.fixed_costs),
            ("initial_cash", self.initial_cash),
            ("initial_equipment", self.initial_equipment),
            ("initial_debt", self.initial_debt),
            ("noise_sigma", self.noise_sigma),
        ];
        for (name, v) in money {
            if !(v.is_finite() && v >= 0.0) {
                return bad(&format!("{name} must be a non-negative number"));
            }
        }
        if !(self.awareness_scale.is_finite() && self.awareness_scale > 0.0) {
            return bad("awareness_scale must be positive");
        }
        if self.reference_price <= 0.0 {
            return bad("reference_price must be positive");
        }
        for (name, v) in [("interest_rate", self.interest_rate), ("tax_rate", self.tax_rate)] {
            if !(0.0..1.0).contains(&v) {
                return bad(&format!("{name} must be in [0, 1)"));
            }
        }
        if !self
            .reach_by_distribution
            .values()
            .iter()
            .all(|r| *r > 0.0 && *r <= 1.0)
        {
            return bad("reach values must be in (0, 1]");
        }
        if !self
            .elasticity_by_distribution
            .values()
            .iter()
            .all(|e| e.is_finite() && *e > 0.0)
        {
            return bad("elasticities must be positive");
        }
        for (name, v) in [
            ("strategy_consistency_bonus", self.strategy_consistency_bonus),
            ("strategy_consistency_penalty", self.strategy_consistency_penalty),
            ("penetration_max_ratio", self.penetration_max_ratio),
            ("premium_min_ratio", self.premium_min_ratio),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return bad(&format!("{name} must be positive"));
            }
        }
        if self.horizon < 1 {
            return bad("horizon must be at least 1");
        }
        Ok(())
    }
}
