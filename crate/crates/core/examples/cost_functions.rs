//! Cost functions and their mean value modification C̃(ξ).
//!
//! cargo run --example cost_functions

use nlbs::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let piecewise = CostFunction::piecewise_linear(0.02, 1.0, 0.01, 0.02)?;
    let exponential = CostFunction::exponential(0.02, 100.0)?;

    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "xi", "C_pw", "Ct_pw", "C_exp", "Ct_exp");
    for k in 0..=20 {
        let xi = 0.0025 * k as f64;
        println!(
            "{xi:>8.4} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            piecewise.eval(xi),
            piecewise.mean_value_modification(xi),
            exponential.eval(xi),
            exponential.mean_value_modification(xi),
        );
    }

    let xi = 0.02;
    let closed = piecewise.mean_value_modification(xi);
    let quad = piecewise.mean_value_modification_quadrature(xi)?;
    println!("\nC̃({xi}) closed form {closed:.15}, quadrature {quad:.15}");
    Ok(())
}
