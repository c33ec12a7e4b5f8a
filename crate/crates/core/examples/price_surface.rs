//! Call price and delta at t = 0, T/3, 2T/3 reconstructed from one solve.
//!
//! cargo run --example price_surface

use nlbs::prelude::*;
use nlbs::pricing::level_for_time;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cost = CostFunction::piecewise_linear(0.02, 0.3, 0.05, 0.1)?;
    let market = MarketParams { rate: 0.011, numeraire: 25.0, model: BetaModel::vtc(0.3, 1.0 / 261.0, cost)? };
    let grid = GridSpec::new(2.5, 250, 200, 1.0, 0.005)?;
    let sol = solve(&grid, &market)?;
    let call = OptionContract::call(25.0, 1.0, 0.011)?;

    let levels: Vec<usize> = [0.0, 1.0 / 3.0, 2.0 / 3.0].iter().map(|&t| level_for_time(&grid, t)).collect();
    let spots: Vec<f64> = (0..=10).map(|k| 15.0 + 2.0 * k as f64).collect();
    let surface = price_surface(&sol, &call, &spots, &levels)?;

    for (t, (values, deltas)) in surface.times.iter().zip(surface.values.iter().zip(&surface.deltas)) {
        println!("t = {t:.3}");
        for (s, (v, d)) in surface.spots.iter().zip(values.iter().zip(deltas)) {
            println!("  S = {s:>5.1}  V = {v:>8.4}  delta = {d:.4}");
        }
    }
    Ok(())
}
