//! Semi-implicit finite-volume solver for the Gamma equation
//!
//! ```text
//! ∂τH = ∂²ₓβ(H) + ∂ₓβ(H) + r ∂ₓH,   x ∈ (-L, L),  H(±L, τ) = 0,
//! ```
//!
//! where `H = S ∂²V/∂S²`, `x = ln(S/E)` and `τ = T - t`. The diffusion
//! coefficient `β'(H)` is frozen at the previous time level, so each step is
//! one tridiagonal solve.

use thiserror::Error;

use crate::beta::{BetaModel, ModelError};
use crate::numerics::{normal_pdf, thomas_solve_with, NumericsError, Tridiag};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GammaError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid market parameters: {0}")]
    InvalidMarket(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Uniform space-time grid: `x_i = i h` for `i = -n..=n` with `h = L/n`,
/// `τ_j = j k` for `j = 0..=m` with `k = T/m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// `L`, the half-width of the log-moneyness window.
    pub half_width: f64,
    /// `n`; the grid has `2n + 1` points.
    pub half_points: usize,
    /// `m`.
    pub time_steps: usize,
    /// `T` in years.
    pub maturity: f64,
    /// Smoothing time `τ*` of the initial Dirac approximation.
    pub tau_star: f64,
}

impl GridSpec {
    pub fn new(half_width: f64, half_points: usize, time_steps: usize, maturity: f64, tau_star: f64) -> Result<Self, GammaError> {
        let g = Self { half_width, half_points, time_steps, maturity, tau_star };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), GammaError> {
        if !(self.half_width > 0.0) || !self.half_width.is_finite() {
            return Err(GammaError::InvalidGrid(format!("L must be positive, got {}", self.half_width)));
        }
        if self.half_points < 2 {
            return Err(GammaError::InvalidGrid(format!("n must be >= 2, got {}", self.half_points)));
        }
        if self.time_steps < 1 {
            return Err(GammaError::InvalidGrid("m must be >= 1".into()));
        }
        if !(self.maturity > 0.0) || !self.maturity.is_finite() {
            return Err(GammaError::InvalidGrid(format!("T must be positive, got {}", self.maturity)));
        }
        if !(self.tau_star > 0.0) || !(self.tau_star < self.maturity) {
            return Err(GammaError::InvalidGrid(format!(
                "tau_star must satisfy 0 < tau_star < T, got {}",
                self.tau_star
            )));
        }
        Ok(())
    }

    /// Space step `h = L/n`.
    pub fn h(&self) -> f64 {
        self.half_width / self.half_points as f64
    }

    /// Time step `k = T/m`.
    pub fn k(&self) -> f64 {
        self.maturity / self.time_steps as f64
    }

    /// Number of grid points, `2n + 1`.
    pub fn len(&self) -> usize {
        2 * self.half_points + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `x` at storage offset `idx` (`idx = i + n`).
    pub fn x_at(&self, idx: usize) -> f64 {
        (idx as f64 - self.half_points as f64) * self.h()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|idx| self.x_at(idx)).collect()
    }

    pub fn tau(&self, level: usize) -> f64 {
        level as f64 * self.k()
    }

    /// Same grid with `n` and `m` scaled by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        Self { half_points: self.half_points * factor, time_steps: self.time_steps * factor, ..*self }
    }
}

/// Rate, numeraire and volatility model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    pub rate: f64,
    /// Numeraire `E` used for `x = ln(S/E)`, normally the strike.
    pub numeraire: f64,
    pub model: BetaModel,
}

impl MarketParams {
    pub fn validate(&self) -> Result<(), GammaError> {
        if !(self.rate >= 0.0) || !self.rate.is_finite() {
            return Err(GammaError::InvalidMarket(format!("r must be nonnegative, got {}", self.rate)));
        }
        if !(self.numeraire > 0.0) || !self.numeraire.is_finite() {
            return Err(GammaError::InvalidMarket(format!("E must be positive, got {}", self.numeraire)));
        }
        self.model.validate()?;
        Ok(())
    }
}

/// Which volatility the smoothed Dirac initial condition uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialVolatility {
    /// `σ̂(0)` with `sgn(0) = 0`; for the transaction-cost models this is the
    /// historical `σ`.
    #[default]
    AtZero,
    /// `σ̂(0⁺)`, e.g. `σ√(1 - Le)` for the transaction-cost models.
    RightLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub initial_volatility: InitialVolatility,
    /// Thomas pivot threshold; `None` uses `1e-14 · max|diag|` per step.
    pub pivot_epsilon: Option<f64>,
    /// Levels whose minimum drops below `-negative_tolerance · max H⁰` are reported.
    pub negative_tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { initial_volatility: InitialVolatility::AtZero, pivot_epsilon: None, negative_tolerance: 1e-8 }
    }
}

/// A time level that went negative beyond tolerance. Values are not clipped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativeGamma {
    pub level: usize,
    pub min: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolveDiagnostics {
    /// Smallest `|b| - |a| - |c|` over all assembled rows.
    pub min_dominance_margin: f64,
    pub negative: Vec<NegativeGamma>,
}

/// All time levels of a Gamma solve; level `j` approximates `H(·, τ_j)`
/// with time measured from the smoothed initial condition.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSolution {
    pub grid: GridSpec,
    levels: Vec<Vec<f64>>,
    pub diagnostics: SolveDiagnostics,
}

impl GammaSolution {
    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn level(&self, j: usize) -> &[f64] {
        &self.levels[j]
    }

    pub fn terminal(&self) -> &[f64] {
        &self.levels[self.levels.len() - 1]
    }

    /// `H` at grid index `i ∈ [-n, n]` on level `j`.
    pub fn value(&self, j: usize, i: isize) -> f64 {
        self.levels[j][(i + self.grid.half_points as isize) as usize]
    }

    /// `h Σ H_i` on level `j`.
    pub fn mass(&self, j: usize) -> f64 {
        self.grid.h() * self.levels[j].iter().sum::<f64>()
    }

    pub fn initial_max(&self) -> f64 {
        self.levels[0].iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Smoothed Dirac mass: the constant-volatility Gamma kernel at `τ*`,
/// zeroed at `±L`.
pub fn initial_condition(grid: &GridSpec, market: &MarketParams, vol: InitialVolatility) -> Vec<f64> {
    let sigma = match vol {
        InitialVolatility::AtZero => market.model.volatility_at_zero(),
        InitialVolatility::RightLimit => market.model.volatility_right_limit_at_zero(),
    };
    let vol_t = sigma * grid.tau_star.sqrt();
    let drift = (market.rate + 0.5 * sigma * sigma) * grid.tau_star;
    let mut h: Vec<f64> = grid.xs().into_iter().map(|x| normal_pdf((x + drift) / vol_t) / vol_t).collect();
    let last = h.len() - 1;
    h[0] = 0.0;
    h[last] = 0.0;
    h
}

/// Assembles the interior system `A H^j = d` from the previous level.
///
/// Returns the `(2n - 1)`-dimensional matrix and right-hand side.
pub fn assemble(prev: &[f64], grid: &GridSpec, market: &MarketParams) -> Result<(Tridiag, Vec<f64>), GammaError> {
    let len = grid.len();
    if prev.len() != len {
        return Err(NumericsError::DimensionMismatch { expected: len, found: prev.len() }.into());
    }
    let (h, k, r) = (grid.h(), grid.k(), market.rate);
    let diffusion = k / (h * h);
    let advection = k * r / (2.0 * h);

    let mut beta = Vec::with_capacity(len);
    let mut beta_prime = Vec::with_capacity(len);
    for &v in prev {
        beta.push(market.model.beta(v)?);
        beta_prime.push(market.model.beta_prime(v)?);
    }

    let rows = len - 2;
    let mut sub = Vec::with_capacity(rows - 1);
    let mut diag = Vec::with_capacity(rows);
    let mut sup = Vec::with_capacity(rows - 1);
    let mut rhs = Vec::with_capacity(rows);
    for idx in 1..len - 1 {
        let a = -diffusion * beta_prime[idx - 1] + advection;
        let c = -diffusion * beta_prime[idx] - advection;
        diag.push(1.0 - (a + c));
        if idx > 1 {
            sub.push(a);
        }
        if idx < len - 2 {
            sup.push(c);
        }
        rhs.push(prev[idx] + k / h * (beta[idx] - beta[idx - 1]));
    }
    Ok((Tridiag::new(sub, diag, sup)?, rhs))
}

/// One time step of the scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutput {
    /// New level with the zero boundary values attached.
    pub values: Vec<f64>,
    pub dominance_margin: f64,
}

pub fn step(prev: &[f64], grid: &GridSpec, market: &MarketParams, opts: &SolverOptions) -> Result<StepOutput, GammaError> {
    let (matrix, rhs) = assemble(prev, grid, market)?;
    let eps = opts.pivot_epsilon.unwrap_or_else(|| matrix.default_pivot_epsilon());
    let interior = thomas_solve_with(&matrix, &rhs, eps)?;
    let mut values = Vec::with_capacity(prev.len());
    values.push(0.0);
    values.extend(interior);
    values.push(0.0);
    Ok(StepOutput { values, dominance_margin: matrix.dominance_margin() })
}

/// Marches `m` steps from the smoothed initial condition with default options.
pub fn solve(grid: &GridSpec, market: &MarketParams) -> Result<GammaSolution, GammaError> {
    solve_with(grid, market, &SolverOptions::default())
}

pub fn solve_with(grid: &GridSpec, market: &MarketParams, opts: &SolverOptions) -> Result<GammaSolution, GammaError> {
    grid.validate()?;
    market.validate()?;
    let initial = initial_condition(grid, market, opts.initial_volatility);
    let scale = initial.iter().copied().fold(0.0, f64::max);
    let mut levels = Vec::with_capacity(grid.time_steps + 1);
    levels.push(initial);
    let mut diagnostics = SolveDiagnostics { min_dominance_margin: f64::INFINITY, negative: Vec::new() };
    for j in 1..=grid.time_steps {
        let out = step(&levels[j - 1], grid, market, opts)?;
        diagnostics.min_dominance_margin = diagnostics.min_dominance_margin.min(out.dominance_margin);
        let min = out.values.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -opts.negative_tolerance * scale {
            diagnostics.negative.push(NegativeGamma { level: j, min });
        }
        levels.push(out.values);
    }
    Ok(GammaSolution { grid: *grid, levels, diagnostics })
}
