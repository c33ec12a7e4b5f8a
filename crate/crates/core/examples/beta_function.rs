//! Diffusion function β(H) of the variable transaction costs model and the
//! Leland-number band containing β'(H).
//!
//! cargo run --example beta_function

use nlbs::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cost = CostFunction::piecewise_linear(0.02, 0.3, 0.05, 0.1)?;
    let model = BetaModel::vtc(0.3, 1.0 / 261.0, cost)?;
    let ln = model.leland_numbers()?;
    let le_low = ln.lower.expect("piecewise costs have a floor");
    let half = 0.5 * model.sigma().powi(2);
    println!("Le = {:.5}, Le_lower = {:.5}", ln.upper, le_low);
    println!("beta' band: [{:.6}, {:.6}]\n", half * (1.0 - ln.upper), half * (1.0 - 2.0 * le_low + ln.upper));

    println!("{:>6} {:>12} {:>12} {:>12}", "H", "beta", "beta'", "sigma_hat^2");
    for k in 0..=20 {
        let h = 0.5 * k as f64;
        println!(
            "{h:>6.2} {:>12.6} {:>12.6} {:>12.6}",
            model.beta(h)?,
            model.beta_prime(h)?,
            model.volatility_sq(h)?
        );
    }
    Ok(())
}
