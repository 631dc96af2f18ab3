//! Choosing set sizes: relaxed closed form, rounding, MVD, brute force.
//!
//! cargo run --example partition_optimizer

use apcc::partopt::{brute_force, kkt_residuals, mvd, round_and_repair, solve_relaxed, OptimModel};

fn main() -> apcc::Result<()> {
    for cancellation in [false, true] {
        // K = 24 subtasks of a task with a0 = 0.5 s, μ0 = 0.2/s, split 24 ways.
        let model = OptimModel::new(40, 24, 2, 2, 4, 24.0 * 0.2, 0.5 / 24.0, cancellation)?;
        let relaxed = solve_relaxed(&model)?;
        let kkt = kkt_residuals(&model, &relaxed)?;
        let start = round_and_repair(&relaxed.real_sizes, model.subtasks, &model)?;
        let descent = mvd(&model, &start)?;
        let exact = brute_force(&model)?;

        println!("cancellation = {cancellation}");
        let shown: Vec<String> = relaxed
            .real_sizes
            .iter()
            .map(|k| format!("{k:.2}"))
            .collect();
        println!(
            "  relaxed   z* = {:.5}  K = [{}]",
            relaxed.z_star,
            shown.join(", ")
        );
        println!(
            "  KKT residuals: stationarity {:.1e}, slackness {:.1e}",
            kkt.stationarity, kkt.complementary_slackness
        );
        println!("  rounded   K = {start:?}");
        println!(
            "  MVD       z = {:.5}  K = {:?} after {} moves",
            descent.objective, descent.set_sizes, descent.iterations
        );
        println!(
            "  brute     z = {:.5}  K = {:?}",
            exact.objective, exact.set_sizes
        );
    }
    Ok(())
}
