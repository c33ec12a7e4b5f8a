//! Call price against calendar time for S in {20, 23, 25}, with the
//! constant-volatility envelope. Level j holds H at time τ* + τ_j after the
//! smoothed payoff, so the bounds are evaluated at that age.
//!
//! cargo run --example time_paths

use nlbs::prelude::*;
use nlbs::pricing::time_of_level;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cost = CostFunction::piecewise_linear(0.02, 0.3, 0.05, 0.1)?;
    let market = MarketParams { rate: 0.011, numeraire: 25.0, model: BetaModel::vtc(0.3, 1.0 / 261.0, cost)? };
    let grid = GridSpec::new(2.5, 250, 200, 1.0, 0.005)?;
    let sol = solve(&grid, &market)?;
    let call = OptionContract::call(25.0, 1.0, 0.011)?;
    let (var_min, var_max) = market.model.sigma_bounds()?;

    for s in [20.0, 23.0, 25.0] {
        println!("S = {s}");
        println!("  {:>6} {:>10} {:>10} {:>10}", "t", "V_min", "V_vtc", "V_max");
        for j in (0..=grid.time_steps).rev().step_by(20) {
            let age = grid.tau(j) + grid.tau_star;
            println!(
                "  {:>6.3} {:>10.4} {:>10.4} {:>10.4}",
                time_of_level(&grid, j),
                call.black_scholes(s, var_min.sqrt(), age)?,
                reconstruct_price(&sol, &call, s, j)?,
                call.black_scholes(s, var_max.sqrt(), age)?
            );
        }
    }
    Ok(())
}
