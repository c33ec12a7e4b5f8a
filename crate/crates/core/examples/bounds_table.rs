//! Nonlinear call prices between the constant-volatility bounds at t = 0.
//!
//! cargo run --example bounds_table

use nlbs::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cost = CostFunction::piecewise_linear(0.02, 0.3, 0.05, 0.1)?;
    let market = MarketParams { rate: 0.011, numeraire: 25.0, model: BetaModel::vtc(0.3, 1.0 / 261.0, cost)? };
    let grid = GridSpec::new(2.5, 250, 200, 1.0, 0.005)?;
    let call = OptionContract::call(25.0, 1.0, 0.011)?;

    let rows = bounds_report(&grid, &market, &call, &[20.0, 23.0, 25.0, 28.0, 30.0], &SolverOptions::default())?;
    println!("{:>5} {:>12} {:>10} {:>12}", "S", "V_sigma_max", "V_vtc", "V_sigma_min");
    for r in rows {
        let flag = if r.within(0.0) { "" } else { "  outside band" };
        println!("{:>5} {:>12.3} {:>10.3} {:>12.3}{flag}", r.spot, r.v_sigma_max, r.v_vtc, r.v_sigma_min);
    }
    Ok(())
}
