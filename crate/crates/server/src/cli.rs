//! Command line: `validate`, `simulate` and `serve`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use entrexplorer_core::content_pack::{default_pack, load_pack, validate_pack, ContentPack};
use entrexplorer_core::market_sim::{
    learning_grid, policy_by_name, run_policy, sweep_learning, MarketError, MarketState,
    SimulationOutcome, VentureConfig, POLICY_NAMES,
};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "entrexplorer", version, about = "Entrepreneurship serious game server and tools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a content pack and print one diagnostic per line.
    Validate {
        file: PathBuf,
    },
    /// Run the virtual market headless and print tab-separated results.
    Simulate(SimulateArgs),
    /// Serve the HTTP/JSON API.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Content pack; the built-in pack when omitted.
    #[arg(long)]
    pub pack: Option<PathBuf>,
    /// Learning score in [0, 1]. Required unless sweeping.
    #[arg(long)]
    pub learning_score: Option<f64>,
    /// Venture seed, or the first seed of a sweep.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of turns; also the depreciation horizon.
    #[arg(long)]
    pub turns: Option<u32>,
    #[arg(long, default_value = "steady")]
    pub policy: String,
    /// JSON file with venture config overrides.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Sweep the learning score as `start:end:step` and print success rates.
    #[arg(long, value_parser = parse_range)]
    pub sweep_learning: Option<(f64, f64, f64)>,
    /// Runs per learning score in a sweep.
    #[arg(long, default_value_t = 1000)]
    pub trials: u32,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub pack: Option<PathBuf>,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    #[arg(long, default_value = "state")]
    pub state_dir: PathBuf,
    /// Server secret from which simulation seeds are derived.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Pack(String),
    #[error("{0}")]
    Market(#[from] MarketError),
    #[error("{0}")]
    Usage(String),
}

fn parse_range(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, step] = parts.as_slice() else {
        return Err("expected start:end:step".into());
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let (a, b, step) = (num(a)?, num(b)?, num(step)?);
    if !(step.is_finite() && step > 0.0) || b < a {
        return Err("need start <= end and step > 0".into());
    }
    Ok((a, b, step))
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn load_pack_file(path: Option<&Path>) -> Result<ContentPack, CliError> {
    match path {
        None => Ok(default_pack()),
        Some(p) => load_pack(&read(p)?).map_err(|e| CliError::Pack(format!("{}: {e}", p.display()))),
    }
}

/// Diagnostics for `source`, one per line, and whether the pack is usable.
pub fn validate_source(source: &[u8]) -> (String, bool) {
    let pack: ContentPack = match serde_json::from_slice(source) {
        Ok(p) => p,
        Err(e) => {
            return (
                format!("ERROR $: parse error at line {}, column {}: {e}\n", e.line(), e.column()),
                false,
            )
        }
    };
    let report = validate_pack(&pack);
    let mut out = String::new();
    for d in &report.diagnostics {
        let _ = writeln!(out, "{d}");
    }
    (out, report.ok)
}

pub fn run_validate(file: &Path) -> Result<(String, bool), CliError> {
    Ok(validate_source(&read(file)?))
}

pub const TURN_COLUMNS: [&str; 20] = [
    "turn",
    "price",
    "production",
    "communication_spend",
    "demand",
    "units_sold",
    "sales",
    "cogs",
    "gross_margin",
    "sga",
    "ebitda",
    "depreciation",
    "ebit",
    "interest",
    "income_before_taxes",
    "taxes",
    "net_income",
    "cash",
    "inventory_value",
    "equity",
];

/// Per-turn rows under a header, a blank line, then `key<TAB>value` lines
/// for the outcome.
pub fn format_outcome(outcome: &SimulationOutcome) -> String {
    let mut out = TURN_COLUMNS.join("\t");
    out.push('\n');
    for t in &outcome.turns {
        let p = &t.pnl;
        let fields: [String; 20] = [
            t.turn.to_string(),
            t.decision.price.to_string(),
            t.decision.production.to_string(),
            t.decision.communication_spend.to_string(),
            t.demand_units.to_string(),
            t.units_sold.to_string(),
            p.sales.to_string(),
            p.cogs.to_string(),
            p.gross_margin.to_string(),
            p.sga.to_string(),
            p.ebitda.to_string(),
            p.depreciation.to_string(),
            p.ebit.to_string(),
            p.interest.to_string(),
            p.income_before_taxes.to_string(),
            p.taxes.to_string(),
            p.net_income.to_string(),
            t.balance.cash.to_string(),
            t.balance.inventory.to_string(),
            t.balance.equity.to_string(),
        ];
        out.push_str(&fields.join("\t"));
        out.push('\n');
    }
    let s = &outcome.final_state;
    let _ = write!(
        out,
        "\nturns_played\t{}\nbankrupt\t{}\nsuccess\t{}\ninitial_equity\t{}\nfinal_equity\t{}\nscore\t{}\n",
        s.turn, s.bankrupt, outcome.success, outcome.initial_equity, s.equity, outcome.score
    );
    out
}

pub fn run_simulate(args: &SimulateArgs) -> Result<String, CliError> {
    load_pack_file(args.pack.as_deref())?;
    let mut config: VentureConfig = match &args.config {
        Some(p) => serde_json::from_slice(&read(p)?)
            .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
        None => VentureConfig::default(),
    };
    if let Some(turns) = args.turns {
        config.horizon = turns;
    }
    config.validate()?;
    let policy = policy_by_name(&args.policy).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown policy {:?}; expected one of {}",
            args.policy,
            POLICY_NAMES.join(", ")
        ))
    })?;

    if let Some((a, b, step)) = args.sweep_learning {
        let grid = learning_grid(a, b, step);
        let points = sweep_learning(&config, policy.as_ref(), &grid, args.trials, args.seed)?;
        let mut out = String::from("learning_score\tsuccess_rate\n");
        for p in points {
            let _ = writeln!(out, "{}\t{}", p.learning_score, p.success_rate);
        }
        return Ok(out);
    }

    let learning = args
        .learning_score
        .ok_or_else(|| CliError::Usage("--learning-score is required unless sweeping".into()))?;
    let initial = MarketState::new(&config, learning, args.seed)?;
    let outcome = run_policy(&initial, policy.as_ref(), &config)?;
    Ok(format_outcome(&outcome))
}
