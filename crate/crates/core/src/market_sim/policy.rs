use super::{Decision, Distribution, MarketState, PricingStrategy, VentureConfig};

/// Chooses each turn's decision from the current position.
pub trait Policy {
    fn name(&self) -> &str;
    fn decide(&self, state: &MarketState, config: &VentureConfig) -> Decision;
}

pub const POLICY_NAMES: [&str; 3] = ["steady", "premium", "idle"];

/// Looks up one of the scripted policies used by the headless CLI.
pub fn policy_by_name(name: &str) -> Option<Box<dyn Policy + Send + Sync>> {
    match name {
        "steady" => Some(Box::new(SteadyPolicy::default())),
        "premium" => Some(Box::new(SteadyPolicy::premium())),
        "idle" => Some(Box::new(IdlePolicy)),
        _ => None,
    }
}

/// Produces nothing and spends nothing; only the fixed costs run.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdlePolicy;

impl Policy for IdlePolicy {
    fn name(&self) -> &str {
        "idle"
    }

    fn decide(&self, _state: &MarketState, config: &VentureConfig) -> Decision {
        Decision {
            price: config.reference_price,
            production: 0,
            communication_spend: 0.0,
            distribution: Distribution::Selective,
            pricing_strategy: PricingStrategy::Competitive,
        }
    }
}

/// Fixed price, budget and channel; production tops stock back up to
/// `target_stock` every turn, so units on sale never depend on earlier
/// sales.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyPolicy {
    pub name: String,
    pub price: f64,
    pub communication_spend: f64,
    pub distribution: Distribution,
    pub pricing_strategy: PricingStrategy,
    pub target_stock: u64,
}

impl Default for SteadyPolicy {
    fn default() -> Self {
        Self {
            name: "steady".into(),
            price: 8.0,
            communication_spend: 5_000.0,
            distribution: Distribution::Intensive,
            pricing_strategy: PricingStrategy::Penetration,
            target_stock: 9_000,
        }
    }
}

impl SteadyPolicy {
    /// Fewer units at a high margin through selected outlets.
    pub fn premium() -> Self {
        Self {
            name: "premium".into(),
            price: 13.0,
            communication_spend: 5_000.0,
            distribution: Distribution::Selective,
            pricing_strategy: PricingStrategy::Premium,
            target_stock: 3_500,
        }
    }
}

impl Policy for SteadyPolicy {
    fn name(&self) -> &str {
        &self.name
    }

    fn decide(&self, state: &MarketState, _config: &VentureConfig) -> Decision {
        Decision {
            price: self.price,
            production: self.target_stock.saturating_sub(state.inventory_units),
            communication_spend: self.communication_spend,
            distribution: self.distribution,
            pricing_strategy: self.pricing_strategy,
        }
    }
}
