use std::path::PathBuf;

use biaslab::zeros::{ExceptionalScenario, QuadraticCharacter};
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "biaslab", version, about = "First-moment bias experiments for primes in progressions")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Prime cutoff for Euler products.
    #[arg(long, global = true)]
    pub cutoff: Option<u64>,
    /// Upper limit accepted for --x.
    #[arg(long, global = true, env = "BIASLAB_MAX_X", default_value_t = 1e9, hide_env_values = true)]
    pub max_x: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Observed and predicted moment for a single (x, N, a).
    Moment(MomentArgs),
    /// CSV table of predictions against observations over an N grid.
    Compare(CompareArgs),
    /// The five-term split of the moment and its identity residual.
    Decompose(DecomposeArgs),
    /// Search for a real zero of L(s, chi_d) in the Page window.
    ZeroScan(ZeroScanArgs),
    /// Euler-product constants with truncation bounds.
    Constants,
}

#[derive(Debug, Args)]
pub struct Point {
    #[arg(long)]
    pub x: f64,
    #[arg(long = "N")]
    pub n: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_residue)]
    pub a: i64,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    #[command(flatten)]
    pub point: Point,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_scenario)]
    pub scenario: Option<ScenarioSpec>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub x: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_residue)]
    pub a: i64,
    /// `lo:hi:steps` (log-spaced) or a comma-separated list.
    #[arg(long = "N-grid", value_parser = parse_grid)]
    pub grid: NGrid,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_scenario)]
    pub scenario: Option<ScenarioSpec>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Fill runtime_ms with per-row wall time.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub point: Point,
    #[arg(long, default_value_t = biaslab::empirical::DEFAULT_DELTA)]
    pub delta: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_scenario)]
    pub scenario: Option<ScenarioSpec>,
}

#[derive(Debug, Args)]
pub struct ZeroScanArgs {
    #[arg(long)]
    pub x: f64,
    #[arg(long)]
    pub qmax: u64,
    /// Page window constant.
    #[arg(long, default_value_t = 0.1)]
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NGrid(pub Vec<f64>);

/// Character given by conductor or by signed discriminant, plus the zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScenarioSpec {
    Conductor(u64, f64),
    Discriminant(i64, f64),
}

impl ScenarioSpec {
    pub fn build(self) -> biaslab::Result<ExceptionalScenario> {
        match self {
            ScenarioSpec::Conductor(q, beta) => ExceptionalScenario::from_conductor(q, beta),
            ScenarioSpec::Discriminant(d, beta) => ExceptionalScenario::new(
                QuadraticCharacter::from_discriminant(d)
                    .map_err(|e| biaslab::Error::InvalidScenario(e.to_string()))?,
                beta,
            ),
        }
    }
}

fn parse_residue(s: &str) -> Result<i64, String> {
    let a: i64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if a == 0 {
        return Err("a must be nonzero".into());
    }
    Ok(a)
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    if !(v.is_finite() && v >= 1.0) {
        return Err(format!("N values must be finite and >= 1, got {s}"));
    }
    Ok(v)
}

fn parse_grid(s: &str) -> Result<NGrid, String> {
    let values = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, steps] = parts.as_slice() else {
            return Err("expected lo:hi:steps".into());
        };
        let (lo, hi) = (parse_positive(lo)?, parse_positive(hi)?);
        let steps: usize = steps.trim().parse().map_err(|e| format!("steps: {e}"))?;
        if steps == 0 || lo > hi || (steps == 1 && lo != hi) {
            return Err("need lo <= hi and steps >= 1 (steps = 1 only when lo = hi)".into());
        }
        (0..steps)
            .map(|k| match k {
                0 => lo,
                k if k + 1 == steps => hi,
                k => lo * (hi / lo).powf(k as f64 / (steps - 1) as f64),
            })
            .collect()
    } else {
        s.split(',').filter(|t| !t.trim().is_empty()).map(parse_positive).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err("the N grid is empty".into());
    }
    let mut values = values;
    values.sort_by(f64::total_cmp);
    values.dedup();
    Ok(NGrid(values))
}

fn parse_scenario(s: &str) -> Result<ScenarioSpec, String> {
    let (chi, beta) = s.split_once(',').ok_or("expected `qtilde,beta` or `discriminant,beta`")?;
    let beta: f64 = beta.trim().parse().map_err(|e| format!("beta: {e}"))?;
    let chi = chi.trim();
    if chi.starts_with(['-', '+']) {
        let d: i64 = chi.parse().map_err(|e| format!("discriminant: {e}"))?;
        Ok(ScenarioSpec::Discriminant(d, beta))
    } else {
        let q: u64 = chi.parse().map_err(|e| format!("conductor: {e}"))?;
        Ok(ScenarioSpec::Conductor(q, beta))
    }
}
