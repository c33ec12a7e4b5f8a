//! Option prices and deltas rebuilt from a Gamma solution, and the
//! comparison against the constant-volatility bounds.
//!
//! With `H` known on the grid, a European call or put at level `j`
//! (calendar time `t = T - τ_j`) is the rectangle-rule sum
//!
//! ```text
//! call: V = h Σ (S - E e^{x_i})⁺ H_i^j        put: V = h Σ (E e^{x_i} - S)⁺ H_i^j
//! ```
//!
//! and `∂V/∂S = a + h Σ_{x_i <= ln(S/E)} H_i^j` with `a = 0` (call) or `-1` (put).

use thiserror::Error;

use crate::beta::ModelError;
use crate::gamma::{self, GammaError, GammaSolution, GridSpec, MarketParams, SolverOptions};
use crate::linear::{bs_call, bs_put, BsInputs};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PricingError {
    #[error("invalid contract: {0}")]
    InvalidContract(String),
    #[error("spot must be positive, got {0}")]
    InvalidSpot(f64),
    #[error("level {level} outside 0..={max}")]
    InvalidLevel { level: usize, max: usize },
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptionKind {
    Call,
    Put,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionContract {
    pub kind: OptionKind,
    pub strike: f64,
    pub maturity: f64,
    pub rate: f64,
}

impl OptionContract {
    pub fn new(kind: OptionKind, strike: f64, maturity: f64, rate: f64) -> Result<Self, PricingError> {
        if !(strike > 0.0) || !(maturity > 0.0) {
            return Err(PricingError::InvalidContract(format!(
                "strike and maturity must be positive, got E={strike}, T={maturity}"
            )));
        }
        if !(rate >= 0.0) {
            return Err(PricingError::InvalidContract(format!("rate must be nonnegative, got {rate}")));
        }
        Ok(Self { kind, strike, maturity, rate })
    }

    pub fn call(strike: f64, maturity: f64, rate: f64) -> Result<Self, PricingError> {
        Self::new(OptionKind::Call, strike, maturity, rate)
    }

    pub fn put(strike: f64, maturity: f64, rate: f64) -> Result<Self, PricingError> {
        Self::new(OptionKind::Put, strike, maturity, rate)
    }

    /// `(a, b)` in `V = aS + b e^{-r(T-t)} + ∫ (S - E e^x)⁺ H dx`.
    pub fn payoff_constants(&self) -> (f64, f64) {
        match self.kind {
            OptionKind::Call => (0.0, 0.0),
            OptionKind::Put => (-1.0, self.strike),
        }
    }

    /// Closed-form price at constant volatility, `tau` years before expiry.
    /// At `tau = 0` this is the payoff.
    pub fn black_scholes(&self, spot: f64, sigma: f64, tau: f64) -> Result<f64, PricingError> {
        if tau == 0.0 {
            return Ok(match self.kind {
                OptionKind::Call => (spot - self.strike).max(0.0),
                OptionKind::Put => (self.strike - spot).max(0.0),
            });
        }
        let p = BsInputs::new(spot, self.strike, self.rate, sigma, tau)?;
        Ok(match self.kind {
            OptionKind::Call => bs_call(&p),
            OptionKind::Put => bs_put(&p),
        })
    }
}

fn check(sol: &GammaSolution, spot: f64, level: usize) -> Result<(), PricingError> {
    if !(spot > 0.0) {
        return Err(PricingError::InvalidSpot(spot));
    }
    let max = sol.grid.time_steps;
    if level > max {
        return Err(PricingError::InvalidLevel { level, max });
    }
    Ok(())
}

/// Calendar time `t = T - τ_j` of level `j`.
pub fn time_of_level(grid: &GridSpec, level: usize) -> f64 {
    grid.maturity - grid.tau(level)
}

/// Level whose calendar time is closest to `t`.
pub fn level_for_time(grid: &GridSpec, t: f64) -> usize {
    let j = ((grid.maturity - t) / grid.k()).round();
    j.clamp(0.0, grid.time_steps as f64) as usize
}

/// Option value `V(S, T - τ_j)` by the rectangle rule.
pub fn reconstruct_price(sol: &GammaSolution, c: &OptionContract, spot: f64, level: usize) -> Result<f64, PricingError> {
    check(sol, spot, level)?;
    let h = sol.grid.h();
    let sum: f64 = sol
        .level(level)
        .iter()
        .enumerate()
        .map(|(idx, &v)| {
            let node = c.strike * sol.grid.x_at(idx).exp();
            let kernel = match c.kind {
                OptionKind::Call => (spot - node).max(0.0),
                OptionKind::Put => (node - spot).max(0.0),
            };
            kernel * v
        })
        .sum();
    Ok(h * sum)
}

/// `h Σ (S - E e^{x_i}) H_i^j`, the difference a call and a put sum must have.
pub fn parity_sum(sol: &GammaSolution, strike: f64, spot: f64, level: usize) -> f64 {
    let h = sol.grid.h();
    h * sol
        .level(level)
        .iter()
        .enumerate()
        .map(|(idx, &v)| (spot - strike * sol.grid.x_at(idx).exp()) * v)
        .sum::<f64>()
}

/// Delta `∂V/∂S` as `a` plus the cumulative mass of `H` up to `ln(S/E)`.
pub fn reconstruct_delta(sol: &GammaSolution, c: &OptionContract, spot: f64, level: usize) -> Result<f64, PricingError> {
    check(sol, spot, level)?;
    let cut = (spot / c.strike).ln();
    let mass: f64 = sol
        .level(level)
        .iter()
        .enumerate()
        .take_while(|(idx, _)| sol.grid.x_at(*idx) <= cut)
        .map(|(_, &v)| v)
        .sum();
    Ok(c.payoff_constants().0 + sol.grid.h() * mass)
}

/// Prices and deltas over a spot × level grid. `values[t][s]` pairs
/// `times[t]` with `spots[s]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSurface {
    pub times: Vec<f64>,
    pub spots: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub deltas: Vec<Vec<f64>>,
}

pub fn price_surface(sol: &GammaSolution, c: &OptionContract, spots: &[f64], levels: &[usize]) -> Result<PriceSurface, PricingError> {
    let mut values = Vec::with_capacity(levels.len());
    let mut deltas = Vec::with_capacity(levels.len());
    for &j in levels {
        values.push(spots.iter().map(|&s| reconstruct_price(sol, c, s, j)).collect::<Result<Vec<_>, _>>()?);
        deltas.push(spots.iter().map(|&s| reconstruct_delta(sol, c, s, j)).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(PriceSurface {
        times: levels.iter().map(|&j| time_of_level(&sol.grid, j)).collect(),
        spots: spots.to_vec(),
        values,
        deltas,
    })
}

/// One row of the bound comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsRow {
    pub spot: f64,
    pub time: f64,
    pub v_sigma_max: f64,
    pub v_vtc: f64,
    pub v_sigma_min: f64,
}

impl BoundsRow {
    pub fn below_lower(&self) -> bool {
        self.v_vtc < self.v_sigma_min
    }

    pub fn above_upper(&self) -> bool {
        self.v_vtc > self.v_sigma_max
    }

    /// `V_σmin - tol <= V_vtc <= V_σmax + tol`.
    pub fn within(&self, tol: f64) -> bool {
        self.v_vtc >= self.v_sigma_min - tol && self.v_vtc <= self.v_sigma_max + tol
    }
}

/// Compares the nonlinear price at level `j` with the closed-form prices at
/// `σ̂²_min = σ²(1 - Le)` and `σ̂²_max = σ²(1 - L̲e)`.
pub fn bounds_from_solution(
    sol: &GammaSolution,
    market: &MarketParams,
    c: &OptionContract,
    spots: &[f64],
    level: usize,
) -> Result<Vec<BoundsRow>, PricingError> {
    let (var_min, var_max) = market.model.sigma_bounds()?;
    let tau = sol.grid.tau(level);
    spots
        .iter()
        .map(|&spot| {
            Ok(BoundsRow {
                spot,
                time: time_of_level(&sol.grid, level),
                v_sigma_max: c.black_scholes(spot, var_max.sqrt(), tau)?,
                v_vtc: reconstruct_price(sol, c, spot, level)?,
                v_sigma_min: c.black_scholes(spot, var_min.sqrt(), tau)?,
            })
        })
        .collect()
}

/// Solves the Gamma equation and reports the bounds at `t = 0`.
pub fn bounds_report(
    grid: &GridSpec,
    market: &MarketParams,
    c: &OptionContract,
    spots: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<BoundsRow>, PricingError> {
    if (c.maturity - grid.maturity).abs() > 1e-12 || (c.rate - market.rate).abs() > 1e-15 {
        return Err(PricingError::InvalidContract("contract maturity and rate must match the grid and market".into()));
    }
    let sol = gamma::solve_with(grid, market, opts)?;
    bounds_from_solution(&sol, market, c, spots, grid.time_steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beta::BetaModel;
    use crate::cost::CostFunction;
    use crate::gamma::solve;

    fn table_setup() -> (GridSpec, MarketParams, OptionContract) {
        let grid = GridSpec::new(2.5, 250, 200, 1.0, 0.005).unwrap();
        let cost = CostFunction::piecewise_linear(0.02, 0.3, 0.05, 0.1).unwrap();
        let market = MarketParams { rate: 0.011, numeraire: 25.0, model: BetaModel::vtc(0.3, 1.0 / 261.0, cost).unwrap() };
        (grid, market, OptionContract::call(25.0, 1.0, 0.011).unwrap())
    }

    #[test]
    fn initial_level_reproduces_payoff() {
        let (grid, market, call) = table_setup();
        let sol = solve(&grid, &market).unwrap();
        let s = 25.0 * 0.5f64.exp();
        let v = reconstruct_price(&sol, &call, s, 0).unwrap();
        // smoothing over τ* shifts the sifted value by O(S σ²τ*)
        assert!((v - (s - 25.0)).abs() < 0.05, "{v}");
        assert!(reconstruct_price(&sol, &call, 1e-6, 0).unwrap() == 0.0);
    }

    #[test]
    fn delta_limits() {
        let (grid, market, call) = table_setup();
        let sol = solve(&grid, &market).unwrap();
        let put = OptionContract::put(25.0, 1.0, 0.011).unwrap();
        assert_eq!(reconstruct_delta(&sol, &call, 1e-3, 200).unwrap(), 0.0);
        let far = 25.0 * 2.6f64.exp();
        assert!((reconstruct_delta(&sol, &call, far, 200).unwrap() - 1.0).abs() < 1e-3);
        assert!(reconstruct_delta(&sol, &put, far, 200).unwrap().abs() < 1e-3);
        let atm = reconstruct_delta(&sol, &call, 25.0, 200).unwrap();
        assert!(atm > 0.0 && atm < 1.0);
    }

    #[test]
    fn level_time_mapping() {
        let (grid, ..) = table_setup();
        assert_eq!(level_for_time(&grid, 0.0), 200);
        assert_eq!(level_for_time(&grid, 1.0), 0);
        assert_eq!(level_for_time(&grid, 1.0 / 3.0), 133);
        assert!((time_of_level(&grid, 100) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_inputs() {
        let (grid, market, call) = table_setup();
        let sol = solve(&grid, &market).unwrap();
        assert_eq!(reconstruct_price(&sol, &call, 20.0, 201), Err(PricingError::InvalidLevel { level: 201, max: 200 }));
        assert_eq!(reconstruct_price(&sol, &call, -1.0, 0), Err(PricingError::InvalidSpot(-1.0)));
        assert!(OptionContract::call(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn constant_costs_collapse_the_band() {
        let grid = GridSpec::new(2.5, 250, 200, 1.0, 0.005).unwrap();
        let market = MarketParams {
            rate: 0.011,
            numeraire: 25.0,
            model: BetaModel::vtc(0.3, 1.0 / 261.0, CostFunction::constant(0.02).unwrap()).unwrap(),
        };
        let opts = SolverOptions { initial_volatility: crate::gamma::InitialVolatility::RightLimit, ..Default::default() };
        let call = OptionContract::call(25.0, 1.0, 0.011).unwrap();
        for row in bounds_report(&grid, &market, &call, &[20.0, 25.0, 30.0], &opts).unwrap() {
            assert_eq!(row.v_sigma_max, row.v_sigma_min);
            assert!((row.v_vtc - row.v_sigma_min).abs() < 2e-2, "{row:?}");
        }
    }
}
