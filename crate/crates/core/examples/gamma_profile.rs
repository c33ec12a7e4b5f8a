//! Solves the Gamma equation on the reference grid and prints the smoothed
//! initial profile next to the profile at maturity.
//!
//! cargo run --example gamma_profile

use nlbs::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cost = CostFunction::piecewise_linear(0.02, 0.3, 0.05, 0.1)?;
    let market = MarketParams { rate: 0.011, numeraire: 25.0, model: BetaModel::vtc(0.3, 1.0 / 261.0, cost)? };
    let grid = GridSpec::new(2.5, 250, 200, 1.0, 0.005)?;
    let sol = solve(&grid, &market)?;

    println!("{:>7} {:>12} {:>12}", "x", "H(x,0)", "H(x,T)");
    for i in (0..grid.len()).step_by(10) {
        println!("{:>7.3} {:>12.6} {:>12.6}", grid.x_at(i), sol.level(0)[i], sol.terminal()[i]);
    }
    println!("\nmass h*sum(H): initial {:.6}, terminal {:.6}", sol.mass(0), sol.mass(grid.time_steps));
    println!("min diagonal dominance margin {:.3e}", sol.diagnostics.min_dominance_margin);
    println!("levels with H < 0: {}", sol.diagnostics.negative.len());
    Ok(())
}
