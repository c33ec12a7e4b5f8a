//! With constant costs the model is linear; the finite-volume price should
//! approach the closed form at σ²(1 - Le) as the grid is refined.
//!
//! cargo run --example linear_limit

use nlbs::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let market = MarketParams {
        rate: 0.011,
        numeraire: 25.0,
        model: BetaModel::vtc(0.3, 1.0 / 261.0, CostFunction::constant(0.02)?)?,
    };
    let sigma = market.model.sigma_bounds()?.0.sqrt();
    let opts = SolverOptions { initial_volatility: InitialVolatility::RightLimit, ..Default::default() };
    let call = OptionContract::call(25.0, 1.0, 0.011)?;
    let base = GridSpec::new(2.5, 250, 200, 1.0, 0.005)?;

    for factor in [1, 2, 4] {
        let grid = base.refined(factor);
        let sol = solve_with(&grid, &market, &opts)?;
        let err = (0..=20)
            .map(|k| {
                let s = 15.0 + k as f64;
                let v = reconstruct_price(&sol, &call, s, grid.time_steps).unwrap();
                (v - bs_call(&BsInputs::new(s, 25.0, 0.011, sigma, 1.0).unwrap())).abs()
            })
            .fold(0.0, f64::max);
        println!("n = {:>4}, m = {:>4}: max |V - bs_call| over S in [15, 35] = {err:.5}", grid.half_points, grid.time_steps);
    }
    Ok(())
}
