//! Monte Carlo delay of APCC against its load-matched baselines at one K′.
//!
//! cargo run --release --example straggler_simulation

use apcc::codec::ThresholdRule;
use apcc::stragsim::{monte_carlo, DelayModel, SamplingMode, StrategyConfig, StrategyKind};

fn main() -> apcc::Result<()> {
    let (workers, degree, sets, kprime) = (100, 2, 16, 12);
    let delay = DelayModel::new(0.2, 0.5, 1, SamplingMode::Persistent)?;
    let trials = 5000;

    for cancellation in [false, true] {
        let apcc = StrategyConfig::apcc_optimized(
            workers,
            0,
            degree,
            sets,
            kprime,
            cancellation,
            ThresholdRule::Accurate,
            &delay,
        )?;
        let out = monte_carlo(&apcc, &delay.for_strategy(&apcc), trials, 1)?;
        println!(
            "apcc cancel={cancellation:<5} K_i = {:?}\n  mean {:.4} s ± {:.4}",
            apcc.plan
                .as_ref()
                .map(|p| p.set_sizes().to_vec())
                .unwrap_or_default(),
            out.mean,
            out.stderr
        );
        if cancellation {
            for kind in [StrategyKind::Lcc, StrategyKind::LccMmc] {
                let base = apcc.matched(kind)?;
                let out = monte_carlo(&base, &delay.for_strategy(&base), trials, 1)?;
                println!("{kind:<8} mean {:.4} s ± {:.4}", out.mean, out.stderr);
            }
        }
    }
    Ok(())
}
