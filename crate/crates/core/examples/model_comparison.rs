//! At-the-money call under each volatility model on the same grid.
//!
//! cargo run --example model_comparison

use nlbs::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = GridSpec::new(2.5, 250, 200, 1.0, 0.005)?;
    let call = OptionContract::call(25.0, 1.0, 0.011)?;
    let cost = CostFunction::piecewise_linear(0.02, 0.3, 0.05, 0.1)?;
    let le = nlbs::beta::leland_number(0.02, 0.3, 1.0 / 261.0);

    let models = [
        ("Black-Scholes", BetaModel::black_scholes(0.3)?),
        ("Leland", BetaModel::leland(0.3, le)?),
        ("VTC piecewise", BetaModel::vtc(0.3, 1.0 / 261.0, cost)?),
        ("VTC exponential", BetaModel::vtc(0.3, 1.0 / 261.0, CostFunction::exponential(0.02, 100.0)?)?),
        ("RAPM", BetaModel::rapm_from_costs(0.3, 0.02, 5.0)?),
        ("Bakstein-Howison", BetaModel::bakstein_howison(0.3, 0.001, 0.001, 0.5)?),
    ];
    for (name, model) in models {
        let sol = solve(&grid, &MarketParams { rate: 0.011, numeraire: 25.0, model })?;
        println!("{name:>18}: V(25, 0) = {:.4}", reconstruct_price(&sol, &call, 25.0, grid.time_steps)?);
    }
    Ok(())
}
