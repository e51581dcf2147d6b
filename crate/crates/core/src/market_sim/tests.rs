use super::*;
use proptest::prelude::*;

fn quiet() -> VentureConfig {
    VentureConfig {
        noise_sigma: 0.0,
        ..VentureConfig::default()
    }
}

fn decision(price: f64, production: u64, spend: f64, distribution: Distribution) -> Decision {
    Decision {
        price,
        production,
        communication_spend: spend,
        distribution,
        pricing_strategy: PricingStrategy::Competitive,
    }
}

#[test]
fn preparedness_endpoints() {
    assert_eq!(preparedness_modifier(0.0), Ok(0.5));
    assert_eq!(preparedness_modifier(1.0), Ok(1.0));
    assert!((preparedness_modifier(0.4).unwrap() - 0.7).abs() < 1e-15);
    assert_eq!(preparedness_modifier(1.01), Err(MarketError::Domain(1.01)));
    assert!(preparedness_modifier(-0.1).is_err());
    assert!(preparedness_modifier(f64::NAN).is_err());
}

#[test]
fn no_communication_means_no_demand() {
    let c = VentureConfig::default();
    for d in Distribution::ALL {
        let dec = decision(10.0, 100, 0.0, d);
        assert_eq!(demand_with_noise(1.0, &dec, &c, 1.3), Ok(0.0));
    }
}

// Reference: 10000 × 1.0 × (1 − e⁻¹) × 1 × 0.75 × 1.0 = 4740.904191214182
#[test]
fn demand_reference_value() {
    let c = quiet();
    let dec = decision(10.0, 0, 5_000.0, Distribution::Intensive);
    let mut state = MarketState::new(&c, 0.5, 1).unwrap();
    let d = state.demand(&dec, &c).unwrap();
    assert!((d - 4740.904191214182).abs() < 1e-9, "{d}");
    assert!((d - 4741.0).abs() < 0.1);

    let exclusive = Decision {
        distribution: Distribution::Exclusive,
        ..dec
    };
    let e = demand_with_noise(0.5, &exclusive, &c, 1.0).unwrap();
    assert!((e - 0.25 * 4740.904191214182).abs() < 1e-9);
}

#[test]
fn strategy_bands() {
    let c = VentureConfig::default();
    use PricingStrategy::*;
    assert_eq!(Penetration.consistency(8.0, &c), 1.05);
    assert_eq!(Penetration.consistency(8.01, &c), 0.95);
    assert_eq!(Premium.consistency(13.0, &c), 1.05);
    assert_eq!(Skimming.consistency(12.9, &c), 0.95);
    for s in [Competitive, Bundle, ProductLine, CostBased, Psychological, Optional] {
        assert_eq!(s.consistency(3.0, &c), 1.0);
        assert_eq!(s.consistency(30.0, &c), 1.0);
    }
}

#[test]
fn pricing_labels_match_default_pack_taxonomy() {
    let pack = crate::content_pack::default_pack();
    let tax = pack.taxonomy("pricing").unwrap();
    let labels: Vec<&str> = PricingStrategy::ALL.iter().map(|s| s.label()).collect();
    assert_eq!(labels, tax.categories);
}

// Single-turn spreadsheet, σ = 0, L = 1, p = 10, q = 5000, m = 5000, Intensive:
//   demand        10000 × (1 − e⁻¹)                = 6321.2056
//   units sold    min(6321, 5000)                  = 5000
//   sales         5000 × 10                        = 50000
//   cogs          5000 × 6                         = 30000
//   gross margin                                   = 20000
//   sga           8000 + 5000                      = 13000
//   ebitda                                         =  7000
//   depreciation  24000 / 12                       =  2000
//   ebit                                           =  5000
//   interest      0.01 × 20000                     =   200
//   pre-tax                                        =  4800
//   taxes         0.25 × 4800                      =  1200
//   net income                                     =  3600
//   cash          50000 + 50000 − 30000 − 13000 − 200 − 1200 = 55600
//   equity        54000 + 3600                     = 57600
//   assets        55600 + 0 + 22000                = 77600 = 20000 + 57600
#[test]
fn single_turn_statement_chain() {
    let c = quiet();
    let s0 = MarketState::new(&c, 1.0, 99).unwrap();
    assert_eq!(s0.equity, 54_000.0);
    let (s1, r) = step_turn(&s0, &decision(10.0, 5_000, 5_000.0, Distribution::Intensive), &c).unwrap();
    assert!((r.demand_units - 6321.205588285577).abs() < 1e-9);
    assert_eq!(r.units_sold, 5_000);
    let want = ProfitAndLoss {
        sales: 50_000.0,
        cogs: 30_000.0,
        gross_margin: 20_000.0,
        sga: 13_000.0,
        ebitda: 7_000.0,
        depreciation: 2_000.0,
        ebit: 5_000.0,
        interest: 200.0,
        income_before_taxes: 4_800.0,
        taxes: 1_200.0,
        net_income: 3_600.0,
    };
    assert_eq!(r.pnl, want);
    assert_eq!(s1.cash, 55_600.0);
    assert_eq!(s1.inventory_units, 0);
    assert_eq!(s1.equity, 57_600.0);
    assert_eq!(s1.turn, 1);
    assert_eq!(r.balance.total_assets, 77_600.0);
    assert_eq!(r.balance.total_liabilities_and_equity, 77_600.0);
    assert!(!s1.bankrupt);
}

#[test]
fn idle_turn_bleeds_fixed_costs() {
    let c = VentureConfig::default();
    let s0 = MarketState::new(&c, 0.3, 5).unwrap();
    for price in [1.0, 10.0, 55.0] {
        let (s1, r) = step_turn(&s0, &decision(price, 0, 0.0, Distribution::Selective), &c).unwrap();
        assert_eq!(r.units_sold, 0);
        assert_eq!(r.pnl.sales, 0.0);
        assert_eq!(r.pnl.taxes, 0.0);
        assert_eq!(r.pnl.net_income, -(8_000.0 + 2_000.0 + 200.0));
        assert_eq!(s0.cash - s1.cash, 8_000.0 + 200.0);
    }
}

#[test]
fn unsold_stock_carries_over() {
    let c = quiet();
    let s0 = MarketState::new(&c, 0.0, 5).unwrap();
    // L = 0: demand = 10000 × (1 − e⁻¹) × 0.5 = 3160.6 → 3161 sold of 4000.
    let (s1, r) = step_turn(&s0, &decision(10.0, 4_000, 5_000.0, Distribution::Intensive), &c).unwrap();
    assert_eq!(r.units_sold, 3_161);
    assert_eq!(s1.inventory_units, 839);
    assert_eq!(r.balance.inventory, 839.0 * 6.0);
    let (_, r2) = step_turn(&s1, &decision(10.0, 0, 5_000.0, Distribution::Intensive), &c).unwrap();
    assert_eq!(r2.units_sold, 839);
}

#[test]
fn identical_inputs_give_identical_trajectories() {
    let c = VentureConfig::default();
    let policy = SteadyPolicy::default();
    let a = run_policy(&MarketState::new(&c, 0.6, 2024).unwrap(), &policy, &c).unwrap();
    let b = run_policy(&MarketState::new(&c, 0.6, 2024).unwrap(), &policy, &c).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    let other = run_policy(&MarketState::new(&c, 0.6, 2025).unwrap(), &policy, &c).unwrap();
    assert_ne!(a.turns[0].demand_units, other.turns[0].demand_units);
}

#[test]
fn persisted_state_resumes_the_same_stream() {
    let c = VentureConfig::default();
    let policy = SteadyPolicy::default();
    let start = MarketState::new(&c, 0.8, 11).unwrap();
    let full = run_policy(&start, &policy, &c).unwrap();

    let mut s = start.clone();
    for _ in 0..5 {
        s.step(&policy.decide(&s, &c), &c).unwrap();
    }
    let restored: MarketState = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(restored, s);
    let rest = run_policy(&restored, &policy, &c).unwrap();
    assert_eq!(rest.turns, full.turns[5..]);
    assert_eq!(rest.final_state, full.final_state);
}

#[test]
fn doing_nothing_never_succeeds() {
    let c = VentureConfig::default();
    let idle = IdlePolicy;
    let decisions: Vec<Decision> = (0..c.horizon)
        .map(|_| idle.decide(&MarketState::new(&c, 1.0, 0).unwrap(), &c))
        .collect();
    for seed in 0..20 {
        let out = run_horizon(&MarketState::new(&c, 1.0, seed).unwrap(), &decisions, &c).unwrap();
        assert!(!out.success);
        assert!(out.final_state.equity < out.initial_equity);
        for t in &out.turns {
            assert!(t.balance.identity_gap() <= 1e-9);
        }
    }
}

#[test]
fn early_stop_on_bankruptcy() {
    let c = VentureConfig::default();
    let burn = decision(10.0, 20_000, 0.0, Distribution::Selective);
    let out = run_horizon(&MarketState::new(&c, 0.5, 3).unwrap(), &vec![burn; 12], &c).unwrap();
    assert_eq!(out.turns.len(), 1);
    assert!(out.final_state.bankrupt);
    assert!(!out.success);
    assert_eq!(
        step_turn(&out.final_state, &burn, &c).unwrap_err(),
        MarketError::AlreadyBankrupt
    );
}

#[test]
fn horizon_and_input_errors() {
    let c = VentureConfig {
        horizon: 2,
        ..VentureConfig::default()
    };
    let s0 = MarketState::new(&c, 0.5, 3).unwrap();
    let d = decision(10.0, 100, 1_000.0, Distribution::Intensive);
    assert_eq!(run_horizon(&s0, &[], &c), Err(MarketError::NoDecisions));
    assert_eq!(run_horizon(&s0, &[d; 3], &c), Err(MarketError::SimulationOver));
    assert_eq!(run_horizon(&s0, &[d; 2], &c).unwrap().turns.len(), 2);

    let mut s = s0.clone();
    let bad = Decision { price: 0.0, ..d };
    assert!(matches!(s.step(&bad, &c), Err(MarketError::InvalidDecision(_))));
    let bad = Decision {
        communication_spend: -1.0,
        ..d
    };
    assert!(matches!(s.step(&bad, &c), Err(MarketError::InvalidDecision(_))));
    assert_eq!(s, s0);

    assert!(matches!(
        MarketState::new(&VentureConfig { tax_rate: 1.0, ..c.clone() }, 0.5, 0),
        Err(MarketError::InvalidConfig(_))
    ));
    assert!(matches!(
        MarketState::new(&VentureConfig { horizon: 0, ..c.clone() }, 0.5, 0),
        Err(MarketError::InvalidConfig(_))
    ));
    assert_eq!(MarketState::new(&c, 2.0, 0), Err(MarketError::Domain(2.0)));
}

#[test]
fn cumulative_sales_rise_with_learning() {
    let c = VentureConfig::default();
    let script: Vec<Decision> = (0..12)
        .map(|t| decision(9.0, if t % 3 == 0 { 9_000 } else { 2_000 }, 4_000.0, Distribution::Intensive))
        .collect();
    let mut previous: Option<Vec<u64>> = None;
    for l in [0.0, 0.5, 1.0] {
        let out = run_horizon(&MarketState::new(&c, l, 77).unwrap(), &script, &c).unwrap();
        let cumulative: Vec<u64> = out
            .units_sold()
            .chain(std::iter::repeat(0))
            .take(12)
            .scan(0, |acc, x| {
                *acc += x;
                Some(*acc)
            })
            .collect();
        if let Some(prev) = &previous {
            assert!(prev.iter().zip(&cumulative).all(|(a, b)| a <= b), "L={l}");
        }
        previous = Some(cumulative);
    }
}

#[test]
fn learning_grid_is_exact() {
    let g = learning_grid(0.0, 1.0, 0.1);
    assert_eq!(g.len(), 11);
    assert_eq!(g[3], 0.3);
    assert_eq!(g[10], 1.0);
    assert_eq!(learning_grid(0.5, 0.5, 0.1), vec![0.5]);
}

#[test]
fn named_policies() {
    for name in POLICY_NAMES {
        assert_eq!(policy_by_name(name).unwrap().name(), name);
    }
    assert!(policy_by_name("yolo").is_none());
}

#[test]
fn steady_policy_tops_up_stock() {
    let c = VentureConfig::default();
    let p = SteadyPolicy::default();
    let mut s = MarketState::new(&c, 0.2, 8).unwrap();
    assert_eq!(p.decide(&s, &c).production, p.target_stock);
    s.step(&p.decide(&s, &c), &c).unwrap();
    assert_eq!(s.inventory_units + p.decide(&s, &c).production, p.target_stock);
}

fn arb_distribution() -> impl Strategy<Value = Distribution> {
    prop_oneof![
        Just(Distribution::Intensive),
        Just(Distribution::Selective),
        Just(Distribution::Exclusive)
    ]
}

fn arb_strategy() -> impl Strategy<Value = PricingStrategy> {
    (0usize..9).prop_map(|i| PricingStrategy::ALL[i])
}

fn arb_decision() -> impl Strategy<Value = Decision> {
    (0.5f64..40.0, 0u64..20_000, 0.0f64..20_000.0, arb_distribution(), arb_strategy()).prop_map(
        |(price, production, communication_spend, distribution, pricing_strategy)| Decision {
            price,
            production,
            communication_spend,
            distribution,
            pricing_strategy,
        },
    )
}

fn arb_config() -> impl Strategy<Value = VentureConfig> {
    (
        1.0f64..20.0,
        0.0f64..20_000.0,
        0.0f64..0.2,
        0.0f64..0.5,
        0.0f64..0.5,
        0.0f64..100_000.0,
    )
        .prop_map(|(unit_cost, fixed_costs, interest_rate, tax_rate, noise_sigma, debt)| VentureConfig {
            unit_cost,
            fixed_costs,
            interest_rate,
            tax_rate,
            noise_sigma,
            initial_debt: debt,
            ..VentureConfig::default()
        })
}

proptest! {
    #[test]
    fn books_balance_after_every_turn(
        config in arb_config(),
        decisions in proptest::collection::vec(arb_decision(), 1..12),
        l in 0.0f64..=1.0,
        seed: u64,
    ) {
        let out = run_horizon(&MarketState::new(&config, l, seed).unwrap(), &decisions, &config).unwrap();
        for t in &out.turns {
            prop_assert!(t.balance.identity_gap() <= 1e-9);
            prop_assert!(t.pnl.chain_holds(config.tax_rate));
            prop_assert!(t.demand_units >= 0.0);
        }
    }

    #[test]
    fn one_turn_is_monotone_in_learning(
        decision in arb_decision(),
        stock in 0u64..5_000,
        l1 in 0.0f64..=1.0,
        l2 in 0.0f64..=1.0,
        seed: u64,
    ) {
        let c = VentureConfig::default();
        let (lo, hi) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
        let mut a = MarketState::new(&c, lo, seed).unwrap();
        let mut b = MarketState::new(&c, hi, seed).unwrap();
        a.inventory_units = stock;
        b.inventory_units = stock;
        let ra = a.step(&decision, &c).unwrap();
        let rb = b.step(&decision, &c).unwrap();
        prop_assert!(ra.units_sold <= rb.units_sold);
        prop_assert!(rb.units_sold <= stock + decision.production);
        if decision.price >= c.unit_cost {
            prop_assert!(ra.pnl.net_income <= rb.pnl.net_income);
        }
    }
}
