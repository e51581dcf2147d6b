//! The Virtual Market floor: a seeded, turn-based venture simulation.
//!
//! Each turn the player sets a price, a production quantity, a
//! communication budget, a distribution strategy and the pricing strategy
//! they claim to follow. Demand is
//!
//! ```text
//! D = population × reach(dist)
//!       × (1 − exp(−spend / awareness_scale))
//!       × (reference_price / price)^elasticity(dist)
//!       × (0.5 + 0.5 × L)
//!       × consistency(strategy, price)
//!       × exp(σ × z),        z ~ N(0, 1) from the venture's own stream
//! ```
//!
//! where `L` is the player's learning score. Sales are capped by stock on
//! hand, and every turn books a full profit and loss statement and balance
//! sheet. Assets always equal debt plus equity.

mod config;
mod policy;
mod statements;
mod sweep;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use config::{ByDistribution, VentureConfig};
pub use policy::{policy_by_name, IdlePolicy, Policy, SteadyPolicy, POLICY_NAMES};
pub use statements::{BalanceSheet, ProfitAndLoss};
pub use sweep::{learning_grid, success_rate, sweep_learning, SweepPoint};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MarketError {
    #[error("learning score {0} is outside [0, 1]")]
    Domain(f64),
    #[error("invalid venture config: {0}")]
    InvalidConfig(String),
    #[error("invalid decision: {0}")]
    InvalidDecision(String),
    #[error("the simulation has reached its horizon")]
    SimulationOver,
    #[error("the venture is bankrupt")]
    AlreadyBankrupt,
    #[error("no decisions to play")]
    NoDecisions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    Intensive,
    Selective,
    Exclusive,
}

impl Distribution {
    pub const ALL: [Distribution; 3] = [
        Distribution::Intensive,
        Distribution::Selective,
        Distribution::Exclusive,
    ];
}

/// The nine pricing strategies of the Price Strategy level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PricingStrategy {
    Penetration,
    Skimming,
    Competitive,
    Bundle,
    ProductLine,
    Premium,
    CostBased,
    Psychological,
    Optional,
}

impl PricingStrategy {
    pub const ALL: [PricingStrategy; 9] = [
        PricingStrategy::Penetration,
        PricingStrategy::Skimming,
        PricingStrategy::Competitive,
        PricingStrategy::Bundle,
        PricingStrategy::ProductLine,
        PricingStrategy::Premium,
        PricingStrategy::CostBased,
        PricingStrategy::Psychological,
        PricingStrategy::Optional,
    ];

    /// The category name used by the default pack's pricing taxonomy.
    pub fn label(self) -> &'static str {
        match self {
            PricingStrategy::Penetration => "Penetration pricing",
            PricingStrategy::Skimming => "Skimming pricing",
            PricingStrategy::Competitive => "Competitive pricing",
            PricingStrategy::Bundle => "Bundle pricing",
            PricingStrategy::ProductLine => "Product line pricing",
            PricingStrategy::Premium => "Premium pricing",
            PricingStrategy::CostBased => "Cost based pricing",
            PricingStrategy::Psychological => "Psychological pricing",
            PricingStrategy::Optional => "Optional pricing",
        }
    }

    /// Demand multiplier for claiming this strategy at `price`. Strategies
    /// with a price band earn the bonus inside it and the penalty outside;
    /// the others are neutral.
    pub fn consistency(self, price: f64, config: &VentureConfig) -> f64 {
        let ratio = price / config.reference_price;
        let in_band = match self {
            PricingStrategy::Penetration => ratio <= config.penetration_max_ratio,
            PricingStrategy::Premium | PricingStrategy::Skimming => {
                ratio >= config.premium_min_ratio
            }
            _ => return 1.0,
        };
        if in_band {
            config.strategy_consistency_bonus
        } else {
            config.strategy_consistency_penalty
        }
    }
}

impl fmt::Display for PricingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One turn's choices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub price: f64,
    /// Units produced this turn, paid in cash at unit cost.
    pub production: u64,
    pub communication_spend: f64,
    pub distribution: Distribution,
    pub pricing_strategy: PricingStrategy,
}

impl Decision {
    pub fn validate(&self) -> Result<(), MarketError> {
        if !(self.price.is_finite() && self.price > 0.0) {
            return Err(MarketError::InvalidDecision(format!(
                "price must be positive, got {}",
                self.price
            )));
        }
        if !(self.communication_spend.is_finite() && self.communication_spend >= 0.0) {
            return Err(MarketError::InvalidDecision(format!(
                "communication spend must be non-negative, got {}",
                self.communication_spend
            )));
        }
        Ok(())
    }
}

/// `0.5 + 0.5 × L`: the demand multiplier earned through the curriculum.
pub fn preparedness_modifier(learning_score: f64) -> Result<f64, MarketError> {
    if !(0.0..=1.0).contains(&learning_score) {
        return Err(MarketError::Domain(learning_score));
    }
    Ok(0.5 + 0.5 * learning_score)
}

/// Demand for a given noise multiplier. `noise` is `exp(σ z)`.
pub fn demand_with_noise(
    learning_score: f64,
    decision: &Decision,
    config: &VentureConfig,
    noise: f64,
) -> Result<f64, MarketError> {
    decision.validate()?;
    let preparedness = preparedness_modifier(learning_score)?;
    let awareness = 1.0 - (-decision.communication_spend / config.awareness_scale).exp();
    if awareness == 0.0 {
        return Ok(0.0);
    }
    let reach = config.reach_by_distribution.get(decision.distribution);
    let elasticity = config.elasticity_by_distribution.get(decision.distribution);
    let price_response = (config.reference_price / decision.price).powf(elasticity);
    let d = config.base_population
        * reach
        * awareness
        * price_response
        * preparedness
        * decision.pricing_strategy.consistency(decision.price, config)
        * noise;
    Ok(d.min(f64::MAX))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketState {
    pub turn: u32,
    pub cash: f64,
    pub inventory_units: u64,
    pub equipment_gross: f64,
    pub accumulated_depreciation: f64,
    pub debt: f64,
    pub equity: f64,
    pub learning_score: f64,
    pub seed: u64,
    pub bankrupt: bool,
    rng: ChaCha8Rng,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnResult {
    /// The turn just played, starting at 1.
    pub turn: u32,
    pub decision: Decision,
    pub demand_units: f64,
    pub units_sold: u64,
    pub pnl: ProfitAndLoss,
    pub balance: BalanceSheet,
}

impl MarketState {
    /// The opening position: cash, equipment and debt from `config`, equity
    /// as the difference.
    pub fn new(config: &VentureConfig, learning_score: f64, seed: u64) -> Result<Self, MarketError> {
        config.validate()?;
        preparedness_modifier(learning_score)?;
        Ok(Self {
            turn: 0,
            cash: config.initial_cash,
            inventory_units: 0,
            equipment_gross: config.initial_equipment,
            accumulated_depreciation: 0.0,
            debt: config.initial_debt,
            equity: config.initial_cash + config.initial_equipment - config.initial_debt,
            learning_score,
            seed,
            bankrupt: false,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn balance_sheet(&self, config: &VentureConfig) -> BalanceSheet {
        BalanceSheet::new(
            self.cash,
            self.inventory_units as f64 * config.unit_cost,
            self.equipment_gross - self.accumulated_depreciation,
            self.debt,
            self.equity,
        )
    }

    pub fn is_finished(&self, config: &VentureConfig) -> bool {
        self.bankrupt || self.turn >= config.horizon
    }

    /// Draws this turn's demand, consuming one normal variate from the
    /// venture's stream.
    pub fn demand(&mut self, decision: &Decision, config: &VentureConfig) -> Result<f64, MarketError> {
        let z: f64 = StandardNormal.sample(&mut self.rng);
        demand_with_noise(
            self.learning_score,
            decision,
            config,
            (config.noise_sigma * z).exp(),
        )
    }

    /// Plays one turn in place. The state is untouched on error.
    pub fn step(
        &mut self,
        decision: &Decision,
        config: &VentureConfig,
    ) -> Result<TurnResult, MarketError> {
        if self.bankrupt {
            return Err(MarketError::AlreadyBankrupt);
        }
        if self.turn >= config.horizon {
            return Err(MarketError::SimulationOver);
        }
        decision.validate()?;
        let available = self
            .inventory_units
            .checked_add(decision.production)
            .ok_or_else(|| MarketError::InvalidDecision("production overflows stock".into()))?;

        let demand_units = self.demand(decision, config)?;
        let units_sold = if demand_units.round() >= available as f64 {
            available
        } else {
            demand_units.round() as u64
        };

        let pnl = ProfitAndLoss::compute(
            decision.price * units_sold as f64,
            units_sold as f64 * config.unit_cost,
            config.fixed_costs + decision.communication_spend,
            config.depreciation_per_turn(),
            config.interest_rate * self.debt,
            config.tax_rate,
        );

        self.cash += pnl.sales
            - decision.production as f64 * config.unit_cost
            - pnl.sga
            - pnl.interest
            - pnl.taxes;
        self.inventory_units = available - units_sold;
        self.accumulated_depreciation += pnl.depreciation;
        self.equity += pnl.net_income;
        self.turn += 1;
        if self.cash < 0.0 {
            self.bankrupt = true;
        }

        Ok(TurnResult {
            turn: self.turn,
            decision: *decision,
            demand_units,
            units_sold,
            pnl,
            balance: self.balance_sheet(config),
        })
    }
}

/// Functional form of [`MarketState::step`].
pub fn step_turn(
    state: &MarketState,
    decision: &Decision,
    config: &VentureConfig,
) -> Result<(MarketState, TurnResult), MarketError> {
    let mut next = state.clone();
    let result = next.step(decision, config)?;
    Ok((next, result))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationOutcome {
    pub final_state: MarketState,
    pub turns: Vec<TurnResult>,
    pub initial_equity: f64,
    pub success: bool,
    /// Final equity rounded to whole currency units.
    pub score: i64,
}

impl SimulationOutcome {
    pub fn new(initial_equity: f64, final_state: MarketState, turns: Vec<TurnResult>) -> Self {
        let success = !final_state.bankrupt && final_state.equity > initial_equity;
        let score = final_state.equity.round() as i64;
        Self {
            final_state,
            turns,
            initial_equity,
            success,
            score,
        }
    }

    pub fn units_sold(&self) -> impl Iterator<Item = u64> + '_ {
        self.turns.iter().map(|t| t.units_sold)
    }
}

/// Plays `decisions` in order, stopping early on bankruptcy.
pub fn run_horizon(
    initial: &MarketState,
    decisions: &[Decision],
    config: &VentureConfig,
) -> Result<SimulationOutcome, MarketError> {
    if decisions.is_empty() {
        return Err(MarketError::NoDecisions);
    }
    let mut state = initial.clone();
    let mut turns = Vec::with_capacity(decisions.len());
    for decision in decisions {
        turns.push(state.step(decision, config)?);
        if state.bankrupt {
            break;
        }
    }
    Ok(SimulationOutcome::new(initial.equity, state, turns))
}

/// Lets `policy` decide every remaining turn until the horizon or bankruptcy.
pub fn run_policy(
    initial: &MarketState,
    policy: &dyn Policy,
    config: &VentureConfig,
) -> Result<SimulationOutcome, MarketError> {
    let mut state = initial.clone();
    let mut turns = Vec::new();
    while !state.is_finished(config) {
        let decision = policy.decide(&state, config);
        turns.push(state.step(&decision, config)?);
    }
    if turns.is_empty() {
        return Err(MarketError::SimulationOver);
    }
    Ok(SimulationOutcome::new(initial.equity, state, turns))
}

#[cfg(test)]
mod tests;
