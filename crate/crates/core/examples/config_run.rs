//! Drives a run from configuration text, as the `nlbs` binary does.
//!
//! cargo run --example config_run

use nlbs::cli::{run, Request};
use nlbs::config::parse_config;

const CONFIG: &str = "
[costs]
type = exponential
c0 = 0.02
kappa = 100

[model]
dt = 1/261

[output]
spots = 22, 25, 28
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = parse_config(CONFIG)?;
    let report = run(Request::Bounds, &cfg)?;
    print!("{}", report.human.unwrap_or_default());
    print!("{}", report.table.to_csv());
    Ok(())
}
