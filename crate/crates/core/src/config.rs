//! Run configuration in a plain `key = value` format with `[section]`
//! headers. Every key is optional; an empty file yields the reference
//! parameter set below. Unknown sections and keys are rejected.
//!
//! ```text
//! [costs]
//! type = piecewise        # constant | linear | piecewise | exponential
//! c0 = 0.02
//! kappa = 0.3
//! xi_minus = 0.05
//! xi_plus = 0.1
//!
//! [model]
//! type = vtc              # vtc | leland | rapm | bakstein_howison
//! sigma = 0.3
//! dt = 1/261
//! initial_volatility = at_zero   # at_zero | right_limit
//!
//! [grid]
//! L = 2.5
//! n = 250
//! m = 200
//! tau_star = 0.005
//!
//! [market]
//! r = 0.011
//!
//! [option]
//! kind = call
//! E = 25
//! T = 1
//!
//! [output]
//! format = csv
//! spots = 20, 23, 25, 28, 30
//! ```
//!
//! Reals accept a fraction literal `a/b`. Comments start with `#` or `;`.

use std::collections::BTreeSet;
use std::path::PathBuf;

use thiserror::Error;

use crate::beta::{BetaModel, ModelError};
use crate::cost::{CostError, CostFunction};
use crate::gamma::{GammaError, GridSpec, InitialVolatility, MarketParams, SolverOptions};
use crate::pricing::{OptionContract, OptionKind, PricingError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid configuration: {invariant}")]
    Validation { invariant: String },
}

impl ConfigError {
    fn parse(line: usize, message: impl Into<String>) -> Self {
        Self::Parse { line, message: message.into() }
    }

    fn validation(invariant: impl Into<String>) -> Self {
        Self::Validation { invariant: invariant.into() }
    }
}

impl From<CostError> for ConfigError {
    fn from(e: CostError) -> Self {
        Self::validation(e.to_string())
    }
}

impl From<ModelError> for ConfigError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::NotParabolic { le } => {
                Self::validation(format!("Le ≥ 1 violates parabolicity (Le = {le}); lengthen dt or lower c0"))
            }
            other => Self::validation(other.to_string()),
        }
    }
}

impl From<GammaError> for ConfigError {
    fn from(e: GammaError) -> Self {
        match e {
            GammaError::Model(m) => m.into(),
            other => Self::validation(other.to_string()),
        }
    }
}

impl From<PricingError> for ConfigError {
    fn from(e: PricingError) -> Self {
        Self::validation(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(format!("unknown format `{s}` (expected csv or json)")),
        }
    }
}

/// Sampling used by the tabulating subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
    pub spots: Vec<f64>,
    /// Calendar times for `price`, mapped to the nearest level.
    pub times: Vec<f64>,
    pub xi_max: f64,
    pub xi_points: usize,
    pub h_max: f64,
    pub h_points: usize,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            path: None,
            format: OutputFormat::Csv,
            spots: vec![20.0, 23.0, 25.0, 28.0, 30.0],
            times: vec![0.0],
            xi_max: 0.2,
            xi_points: 201,
            h_max: 10.0,
            h_points: 201,
        }
    }
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub cost: CostFunction,
    pub model: BetaModel,
    pub grid: GridSpec,
    pub market: MarketParams,
    pub contract: OptionContract,
    pub solver: SolverOptions,
    pub output: OutputSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        parse_config("").expect("reference parameters are valid")
    }
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("costs", &["type", "c0", "kappa", "xi_minus", "xi_plus"]),
    (
        "model",
        &["type", "sigma", "dt", "le", "mu", "lambda", "gamma_bar", "alpha", "initial_volatility", "pivot_epsilon"],
    ),
    ("grid", &["L", "n", "m", "tau_star"]),
    ("market", &["r", "numeraire"]),
    ("option", &["kind", "E", "T"]),
    ("output", &["path", "format", "spots", "times", "xi_max", "xi_points", "h_max", "h_points"]),
];

#[derive(Debug)]
struct Entry {
    line: usize,
    value: String,
}

#[derive(Debug, Default)]
struct Raw {
    entries: std::collections::BTreeMap<(String, String), Entry>,
}

impl Raw {
    fn str(&self, section: &str, key: &str) -> Option<&Entry> {
        self.entries.get(&(section.to_string(), key.to_string()))
    }

    fn real(&self, section: &str, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.str(section, key) {
            None => Ok(default),
            Some(e) => parse_real(&e.value).ok_or_else(|| ConfigError::parse(e.line, format!("`{key}`: expected a real, got `{}`", e.value))),
        }
    }

    fn opt_real(&self, section: &str, key: &str) -> Result<Option<f64>, ConfigError> {
        self.str(section, key).map(|_| self.real(section, key, 0.0)).transpose()
    }

    fn count(&self, section: &str, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.str(section, key) {
            None => Ok(default),
            Some(e) => e
                .value
                .parse()
                .map_err(|_| ConfigError::parse(e.line, format!("`{key}`: expected a nonnegative integer, got `{}`", e.value))),
        }
    }

    fn list(&self, section: &str, key: &str, default: &[f64]) -> Result<Vec<f64>, ConfigError> {
        match self.str(section, key) {
            None => Ok(default.to_vec()),
            Some(e) => e
                .value
                .split(',')
                .map(|s| {
                    parse_real(s.trim())
                        .ok_or_else(|| ConfigError::parse(e.line, format!("`{key}`: expected reals, got `{}`", s.trim())))
                })
                .collect(),
        }
    }

    fn word<'a>(&'a self, section: &str, key: &str, default: &'a str) -> (&'a str, usize) {
        self.str(section, key).map_or((default, 0), |e| (e.value.as_str(), e.line))
    }

    /// Rejects keys that the chosen variant does not use.
    fn only(&self, section: &str, allowed: &[&str], variant: &str) -> Result<(), ConfigError> {
        for ((s, k), e) in &self.entries {
            if s == section && k != "type" && !allowed.contains(&k.as_str()) {
                return Err(ConfigError::parse(e.line, format!("`{k}` does not apply to {section} type `{variant}`")));
            }
        }
        Ok(())
    }
}

/// Parses a real, accepting `a/b`.
pub fn parse_real(s: &str) -> Option<f64> {
    let v = match s.split_once('/') {
        Some((a, b)) => a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?,
        None => s.parse::<f64>().ok()?,
    };
    v.is_finite().then_some(v)
}

fn tokenize(text: &str) -> Result<Raw, ConfigError> {
    let mut raw = Raw::default();
    let mut section: Option<&str> = None;
    let mut seen_sections = BTreeSet::new();
    for (idx, line) in text.lines().enumerate() {
        let n = idx + 1;
        let line = line.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::parse(n, "unterminated section header"))?
                .trim();
            let (found, _) = SECTIONS
                .iter()
                .find(|(s, _)| *s == name)
                .ok_or_else(|| ConfigError::parse(n, format!("unknown section [{name}]")))?;
            if !seen_sections.insert(*found) {
                return Err(ConfigError::parse(n, format!("duplicate section [{name}]")));
            }
            section = Some(found);
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::parse(n, format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let sec = section.ok_or_else(|| ConfigError::parse(n, format!("`{key}` appears before any section header")))?;
        let keys = SECTIONS.iter().find(|(s, _)| *s == sec).map(|(_, k)| *k).unwrap_or(&[]);
        if !keys.contains(&key) {
            return Err(ConfigError::parse(n, format!("unknown key `{key}` in [{sec}]")));
        }
        if value.is_empty() {
            return Err(ConfigError::parse(n, format!("`{key}` has no value")));
        }
        let slot = (sec.to_string(), key.to_string());
        if raw.entries.contains_key(&slot) {
            return Err(ConfigError::parse(n, format!("duplicate key `{key}` in [{sec}]")));
        }
        raw.entries.insert(slot, Entry { line: n, value: value.to_string() });
    }
    Ok(raw)
}

fn build_cost(raw: &Raw) -> Result<CostFunction, ConfigError> {
    let c0 = raw.real("costs", "c0", 0.02)?;
    let kappa = raw.real("costs", "kappa", 0.3)?;
    let (kind, line) = raw.word("costs", "type", "piecewise");
    let cost = match kind {
        "constant" => {
            raw.only("costs", &["c0"], kind)?;
            CostFunction::constant(c0)?
        }
        "linear" => {
            raw.only("costs", &["c0", "kappa"], kind)?;
            CostFunction::linear(c0, kappa)?
        }
        "piecewise" => CostFunction::piecewise_linear(
            c0,
            kappa,
            raw.real("costs", "xi_minus", 0.05)?,
            raw.real("costs", "xi_plus", 0.1)?,
        )?,
        "exponential" => {
            raw.only("costs", &["c0", "kappa"], kind)?;
            CostFunction::exponential(c0, kappa)?
        }
        other => return Err(ConfigError::parse(line, format!("unknown cost type `{other}`"))),
    };
    Ok(cost)
}

fn build_model(raw: &Raw, cost: CostFunction) -> Result<BetaModel, ConfigError> {
    let sigma = raw.real("model", "sigma", 0.3)?;
    let (kind, line) = raw.word("model", "type", "vtc");
    let common = ["sigma", "initial_volatility", "pivot_epsilon"];
    let with = |extra: &[&'static str]| -> Vec<&'static str> { common.iter().chain(extra).copied().collect() };
    let model = match kind {
        "vtc" => {
            raw.only("model", &with(&["dt"]), kind)?;
            BetaModel::vtc(sigma, raw.real("model", "dt", 1.0 / 261.0)?, cost)?
        }
        "leland" => {
            raw.only("model", &with(&["le", "dt"]), kind)?;
            let le = match raw.opt_real("model", "le")? {
                Some(le) => le,
                None => crate::beta::leland_number(cost.c0(), sigma, raw.real("model", "dt", 1.0 / 261.0)?),
            };
            BetaModel::leland(sigma, le)?
        }
        "rapm" => {
            raw.only("model", &with(&["mu"]), kind)?;
            BetaModel::rapm(sigma, raw.real("model", "mu", 0.0)?)?
        }
        "bakstein_howison" => {
            raw.only("model", &with(&["lambda", "gamma_bar", "alpha"]), kind)?;
            BetaModel::bakstein_howison(
                sigma,
                raw.real("model", "lambda", 0.0)?,
                raw.real("model", "gamma_bar", 0.0)?,
                raw.real("model", "alpha", 0.0)?,
            )?
        }
        other => return Err(ConfigError::parse(line, format!("unknown model type `{other}`"))),
    };
    Ok(model)
}

fn build_solver(raw: &Raw) -> Result<SolverOptions, ConfigError> {
    let (iv, line) = raw.word("model", "initial_volatility", "at_zero");
    let initial_volatility = match iv {
        "at_zero" => InitialVolatility::AtZero,
        "right_limit" => InitialVolatility::RightLimit,
        other => return Err(ConfigError::parse(line, format!("unknown initial_volatility `{other}`"))),
    };
    let pivot_epsilon = raw.opt_real("model", "pivot_epsilon")?;
    if pivot_epsilon.is_some_and(|e| !(e > 0.0)) {
        return Err(ConfigError::validation("pivot_epsilon must be positive"));
    }
    Ok(SolverOptions { initial_volatility, pivot_epsilon, ..SolverOptions::default() })
}

fn build_output(raw: &Raw) -> Result<OutputSpec, ConfigError> {
    let d = OutputSpec::default();
    let (fmt, line) = raw.word("output", "format", "csv");
    let format = fmt.parse().map_err(|m| ConfigError::parse(line, m))?;
    let out = OutputSpec {
        path: raw.str("output", "path").map(|e| PathBuf::from(&e.value)),
        format,
        spots: raw.list("output", "spots", &d.spots)?,
        times: raw.list("output", "times", &d.times)?,
        xi_max: raw.real("output", "xi_max", d.xi_max)?,
        xi_points: raw.count("output", "xi_points", d.xi_points)?,
        h_max: raw.real("output", "h_max", d.h_max)?,
        h_points: raw.count("output", "h_points", d.h_points)?,
    };
    if out.spots.iter().any(|s| !(*s > 0.0)) {
        return Err(ConfigError::validation("spots must be positive"));
    }
    if !(out.xi_max > 0.0) || !(out.h_max > 0.0) || out.xi_points < 2 || out.h_points < 2 {
        return Err(ConfigError::validation("xi_max, h_max > 0 and at least 2 sample points required"));
    }
    Ok(out)
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw = tokenize(text)?;
    let cost = build_cost(&raw)?;
    let model = build_model(&raw, cost)?;
    let solver = build_solver(&raw)?;

    let (kind, line) = raw.word("option", "kind", "call");
    let kind = match kind {
        "call" => OptionKind::Call,
        "put" => OptionKind::Put,
        other => return Err(ConfigError::parse(line, format!("unknown option kind `{other}`"))),
    };
    let strike = raw.real("option", "E", 25.0)?;
    let maturity = raw.real("option", "T", 1.0)?;
    let rate = raw.real("market", "r", 0.011)?;
    let contract = OptionContract::new(kind, strike, maturity, rate)?;

    let grid = GridSpec::new(
        raw.real("grid", "L", 2.5)?,
        raw.count("grid", "n", 250)?,
        raw.count("grid", "m", 200)?,
        maturity,
        raw.real("grid", "tau_star", 0.005)?,
    )?;
    let market = MarketParams { rate, numeraire: raw.real("market", "numeraire", strike)?, model };
    market.validate()?;
    let output = build_output(&raw)?;
    if output.times.iter().any(|t| !(0.0..=maturity).contains(t)) {
        return Err(ConfigError::validation("times must lie in [0, T]"));
    }
    Ok(RunConfig { cost, model, grid, market, contract, solver, output })
}
