//! Gradient descent for least squares where every gradient is computed
//! through the coded pipeline on simulated workers.
//!
//! cargo run --example linear_regression

use apcc::bench::{cmd_demo, ExperimentConfig};

fn main() -> apcc::Result<()> {
    // N = 10 workers, K = 12 row blocks in r = 3 sets, L = 1, d = 2.
    let report = cmd_demo(&ExperimentConfig::default())?;
    print!("{}", report.render());
    let w: Vec<String> = report.weights.iter().map(|w| format!("{w:+.3}")).collect();
    println!("weights                  [{}]", w.join(", "));
    Ok(())
}
