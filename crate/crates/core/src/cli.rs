//! Command-line front end: argument parsing, run orchestration and
//! CSV/JSON emission. The `nlbs` binary is a thin wrapper over [`main_with`].

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::beta::ModelError;
use crate::config::{parse_config, ConfigError, OutputFormat, RunConfig};
use crate::gamma::{self, GammaError};
use crate::linear::{bs_call_delta, bs_put_delta, BsInputs};
use crate::pricing::{self, OptionKind, PricingError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Numerical(_) => EXIT_NUMERICAL,
            Self::Io { .. } => EXIT_IO,
        }
    }
}

impl From<GammaError> for RunError {
    fn from(e: GammaError) -> Self {
        match e {
            GammaError::InvalidGrid(_) | GammaError::InvalidMarket(_) => Self::Config(e.into()),
            GammaError::Model(m) => m.into(),
            GammaError::Numerics(n) => Self::Numerical(n.to_string()),
        }
    }
}

impl From<ModelError> for RunError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Domain(_) => Self::Numerical(e.to_string()),
            other => Self::Config(other.into()),
        }
    }
}

impl From<PricingError> for RunError {
    fn from(e: PricingError) -> Self {
        match e {
            PricingError::Gamma(g) => g.into(),
            PricingError::Model(m) => m.into(),
            other => Self::Config(other.into()),
        }
    }
}

/// A rectangular numeric table, the payload of every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    /// Header plus rows; reals in shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format!("{v:?}"))).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    /// `{"columns": [...], "rows": [[...], ...]}` with 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut s = String::from("{\n  \"columns\": [");
        for (i, c) in self.columns.iter().enumerate() {
            let sep = if i == 0 { "" } else { ", " };
            let _ = write!(s, "{sep}\"{c}\"");
        }
        s.push_str("],\n  \"rows\": [");
        for (i, row) in self.rows.iter().enumerate() {
            s.push_str(if i == 0 { "\n    [" } else { ",\n    [" });
            for (k, v) in row.iter().enumerate() {
                let sep = if k == 0 { "" } else { ", " };
                let _ = write!(s, "{sep}{}", json_real(*v));
            }
            s.push(']');
        }
        s.push_str(if self.rows.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
        s
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    /// Parses CSV produced by [`Table::to_csv`], checking the header.
    pub fn from_csv(text: &str, columns: &[&'static str]) -> Result<Self, String> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers().map_err(|e| e.to_string())?;
        if header.iter().ne(columns.iter().copied()) {
            return Err(format!("header {header:?} does not match {columns:?}"));
        }
        let mut table = Self::new(columns);
        for rec in r.records() {
            let rec = rec.map_err(|e| e.to_string())?;
            let row = rec.iter().map(|f| f.parse::<f64>().map_err(|e| format!("`{f}`: {e}"))).collect::<Result<_, _>>()?;
            table.rows.push(row);
        }
        Ok(table)
    }
}

fn json_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".into()
    }
}

pub const PRICE_COLUMNS: &[&str] = &["S", "t", "V", "delta"];
pub const GAMMA_COLUMNS: &[&str] = &["x", "H"];
pub const GAMMA_SURFACE_COLUMNS: &[&str] = &["j", "tau", "x", "H"];
pub const COSTFN_COLUMNS: &[&str] = &["xi", "C", "C_tilde"];
pub const BETAFN_COLUMNS: &[&str] = &["H", "beta", "beta_prime"];
pub const BOUNDS_COLUMNS: &[&str] = &["S", "V_sigma_max", "V_vtc", "V_sigma_min"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum PriceModel {
    #[default]
    Nonlinear,
    Linear,
}

/// Which Gamma levels to dump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Levels {
    /// One level; `None` means the final level `m`.
    One(Option<usize>),
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Request {
    Price(PriceModel),
    Gamma(Levels),
    CostFn,
    BetaFn,
    Bounds,
}

/// Result of a run: the data table, an optional human-readable rendering,
/// and warnings destined for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub human: Option<String>,
    pub warnings: Vec<String>,
}

fn linspace(hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| hi * i as f64 / (n - 1) as f64)
}

pub fn run(req: Request, cfg: &RunConfig) -> Result<Report, RunError> {
    let mut warnings = Vec::new();
    let mut human = None;
    let table = match req {
        Request::CostFn => {
            let mut t = Table::new(COSTFN_COLUMNS);
            for xi in linspace(cfg.output.xi_max, cfg.output.xi_points) {
                t.rows.push(vec![xi, cfg.cost.eval(xi), cfg.cost.mean_value_modification(xi)]);
            }
            t
        }
        Request::BetaFn => {
            let mut t = Table::new(BETAFN_COLUMNS);
            for h in linspace(cfg.output.h_max, cfg.output.h_points) {
                t.rows.push(vec![h, cfg.model.beta(h)?, cfg.model.beta_prime(h)?]);
            }
            t
        }
        Request::Gamma(levels) => {
            let sol = gamma::solve_with(&cfg.grid, &cfg.market, &cfg.solver)?;
            warnings.extend(negative_warnings(&sol));
            match levels {
                Levels::One(j) => {
                    let j = j.unwrap_or(cfg.grid.time_steps);
                    if j > cfg.grid.time_steps {
                        return Err(ConfigError::Validation {
                            invariant: format!("level {j} outside 0..={}", cfg.grid.time_steps),
                        }
                        .into());
                    }
                    let mut t = Table::new(GAMMA_COLUMNS);
                    t.rows = sol.level(j).iter().enumerate().map(|(i, &v)| vec![cfg.grid.x_at(i), v]).collect();
                    t
                }
                Levels::All => {
                    let mut t = Table::new(GAMMA_SURFACE_COLUMNS);
                    for (j, level) in sol.levels().iter().enumerate() {
                        for (i, &v) in level.iter().enumerate() {
                            t.rows.push(vec![j as f64, cfg.grid.tau(j), cfg.grid.x_at(i), v]);
                        }
                    }
                    t
                }
            }
        }
        Request::Price(PriceModel::Nonlinear) => {
            let sol = gamma::solve_with(&cfg.grid, &cfg.market, &cfg.solver)?;
            warnings.extend(negative_warnings(&sol));
            let mut t = Table::new(PRICE_COLUMNS);
            for &time in &cfg.output.times {
                let j = pricing::level_for_time(&cfg.grid, time);
                let tj = pricing::time_of_level(&cfg.grid, j);
                for &s in &cfg.output.spots {
                    t.rows.push(vec![
                        s,
                        tj,
                        pricing::reconstruct_price(&sol, &cfg.contract, s, j)?,
                        pricing::reconstruct_delta(&sol, &cfg.contract, s, j)?,
                    ]);
                }
            }
            t
        }
        Request::Price(PriceModel::Linear) => {
            let sigma = cfg.model.volatility_right_limit_at_zero();
            let c = &cfg.contract;
            let mut t = Table::new(PRICE_COLUMNS);
            for &time in &cfg.output.times {
                let tau = c.maturity - time;
                for &s in &cfg.output.spots {
                    let v = c.black_scholes(s, sigma, tau)?;
                    let delta = if tau == 0.0 {
                        let itm = match c.kind {
                            OptionKind::Call => s > c.strike,
                            OptionKind::Put => s < c.strike,
                        };
                        match (c.kind, itm) {
                            (OptionKind::Call, true) => 1.0,
                            (OptionKind::Put, true) => -1.0,
                            _ => 0.0,
                        }
                    } else {
                        let p = BsInputs::new(s, c.strike, c.rate, sigma, tau)?;
                        match c.kind {
                            OptionKind::Call => bs_call_delta(&p),
                            OptionKind::Put => bs_put_delta(&p),
                        }
                    };
                    t.rows.push(vec![s, time, v, delta]);
                }
            }
            t
        }
        Request::Bounds => {
            let le = cfg.model.leland_numbers()?;
            let rows = pricing::bounds_report(&cfg.grid, &cfg.market, &cfg.contract, &cfg.output.spots, &cfg.solver)?;
            let mut t = Table::new(BOUNDS_COLUMNS);
            let mut text = String::new();
            let _ = writeln!(text, "Le = {:.6}  Le_lower = {:.6}", le.upper, le.lower.unwrap_or(f64::NAN));
            let _ = writeln!(text, "{:>10} {:>12} {:>12} {:>12}  note", "S", "V_sigma_max", "V_vtc", "V_sigma_min");
            for r in &rows {
                t.rows.push(vec![r.spot, r.v_sigma_max, r.v_vtc, r.v_sigma_min]);
                let note = if r.below_lower() {
                    "below lower bound"
                } else if r.above_upper() {
                    "above upper bound"
                } else {
                    ""
                };
                let _ = writeln!(
                    text,
                    "{:>10.6} {:>12.6} {:>12.6} {:>12.6}  {note}",
                    r.spot, r.v_sigma_max, r.v_vtc, r.v_sigma_min
                );
            }
            human = Some(text);
            t
        }
    };
    Ok(Report { table, human, warnings })
}

fn negative_warnings(sol: &gamma::GammaSolution) -> Option<String> {
    let neg = &sol.diagnostics.negative;
    let worst = neg.iter().map(|n| n.min).fold(f64::INFINITY, f64::min);
    (!neg.is_empty()).then(|| format!("warning: H < 0 on {} time levels (min {worst:e}); values kept", neg.len()))
}

#[derive(Debug, Parser)]
#[command(name = "nlbs", version, about = "Nonlinear Black-Scholes pricing with variable transaction costs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Io {
    /// Configuration file; omitted means the reference parameters.
    pub config: Option<PathBuf>,
    /// Output file; overrides [output] path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json; overrides [output] format.
    #[arg(long)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Option value and delta at the configured spots and times (S, t, V, delta).
    Price {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value_t = PriceModel::Nonlinear)]
        model: PriceModel,
    },
    /// H at one time level (x, H) or every level (j, tau, x, H).
    Gamma {
        #[command(flatten)]
        io: Io,
        /// Time level j; defaults to the last.
        #[arg(long, conflicts_with = "all")]
        level: Option<usize>,
        #[arg(long)]
        all: bool,
    },
    /// Cost function and its mean value modification (xi, C, C_tilde).
    Costfn {
        #[command(flatten)]
        io: Io,
    },
    /// Diffusion function and derivative (H, beta, beta_prime).
    Betafn {
        #[command(flatten)]
        io: Io,
    },
    /// Nonlinear price against the constant-volatility bounds at t = 0.
    Bounds {
        #[command(flatten)]
        io: Io,
        /// Print the human-readable table on stdout instead of CSV.
        #[arg(long)]
        table: bool,
    },
}

impl Command {
    fn parts(&self) -> (&Io, Request, bool) {
        match self {
            Self::Price { io, model } => (io, Request::Price(*model), false),
            Self::Gamma { io, level, all } => {
                (io, Request::Gamma(if *all { Levels::All } else { Levels::One(*level) }), false)
            }
            Self::Costfn { io } => (io, Request::CostFn, false),
            Self::Betafn { io } => (io, Request::BetaFn, false),
            Self::Bounds { io, table } => (io, Request::Bounds, *table),
        }
    }
}

fn load(io: &Io) -> Result<RunConfig, RunError> {
    let text = match &io.config {
        Some(p) => std::fs::read_to_string(p).map_err(|e| {
            RunError::Config(ConfigError::Parse { line: 0, message: format!("cannot read {}: {e}", p.display()) })
        })?,
        None => String::new(),
    };
    let mut cfg = parse_config(&text)?;
    if let Some(f) = io.format {
        cfg.output.format = f;
    }
    if let Some(p) = &io.out {
        cfg.output.path = Some(p.clone());
    }
    Ok(cfg)
}

/// Runs a parsed command, writing data to the configured path or `stdout`.
pub fn execute(cmd: &Command, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> Result<(), RunError> {
    let (io, req, table_only) = cmd.parts();
    let cfg = load(io)?;
    let report = run(req, &cfg)?;
    for w in &report.warnings {
        let _ = writeln!(stderr, "{w}");
    }
    let data = report.table.render(cfg.output.format);
    let io_err = |context: String| move |source| RunError::Io { context, source };
    match &cfg.output.path {
        Some(path) => {
            std::fs::write(path, data).map_err(io_err(format!("cannot write {}", path.display())))?;
            if let Some(h) = &report.human {
                stdout.write_all(h.as_bytes()).map_err(io_err("stdout".into()))?;
            }
        }
        None => {
            let text = match (&report.human, table_only) {
                (Some(h), true) => h.as_str(),
                _ => data.as_str(),
            };
            stdout.write_all(text.as_bytes()).map_err(io_err("stdout".into()))?;
        }
    }
    Ok(())
}

/// Entry point shared by the binary and tests; returns the exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn std::io::Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
