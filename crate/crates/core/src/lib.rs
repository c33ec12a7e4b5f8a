//! European option pricing under the nonlinear Black–Scholes model with
//! variable transaction costs.
//!
//! The fully nonlinear price equation is transformed into a quasilinear
//! equation for `H = S ∂²V/∂S²` in log-moneyness, solved with a
//! semi-implicit finite-volume scheme ([`gamma`]), and prices and deltas are
//! recovered by integrating `H` against the payoff kernel ([`pricing`]).
//!
//! ```no_run
//! use nlbs::prelude::*;
//!
//! let cost = CostFunction::piecewise_linear(0.02, 0.3, 0.05, 0.1)?;
//! let model = BetaModel::vtc(0.3, 1.0 / 261.0, cost)?;
//! let market = MarketParams { rate: 0.011, numeraire: 25.0, model };
//! let grid = GridSpec::new(2.5, 250, 200, 1.0, 0.005)?;
//! let sol = solve(&grid, &market)?;
//! let call = OptionContract::call(25.0, 1.0, 0.011)?;
//! println!("{}", reconstruct_price(&sol, &call, 25.0, grid.time_steps)?);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beta;
pub mod cli;
pub mod config;
pub mod cost;
pub mod gamma;
pub mod linear;
pub mod numerics;
pub mod pricing;

pub mod prelude {
    pub use crate::beta::{BetaModel, LelandNumbers, ModelError};
    pub use crate::config::{parse_config, ConfigError, OutputFormat, RunConfig};
    pub use crate::cost::{CostError, CostFunction};
    pub use crate::gamma::{
        initial_condition, solve, solve_with, step, GammaError, GammaSolution, GridSpec, InitialVolatility,
        MarketParams, SolverOptions,
    };
    pub use crate::linear::{bs_call, bs_call_delta, bs_gamma_kernel, bs_put, bs_put_delta, gamma_kernel, BsInputs};
    pub use crate::pricing::{
        bounds_from_solution, bounds_report, price_surface, reconstruct_delta, reconstruct_price, BoundsRow,
        OptionContract, OptionKind, PriceSurface, PricingError,
    };
}
