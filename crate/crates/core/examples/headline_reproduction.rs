//! Minimum-over-K′ delay reductions for the three comparison scenarios.
//!
//! cargo run --release --example headline_reproduction -- [trials] [persistent|iid]

use apcc::codec::ThresholdRule;
use apcc::stragsim::{best_point, sweep, DelayModel, SamplingMode, StrategyKind, SweepSpec};

fn main() -> apcc::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);
    let mode: SamplingMode = args
        .next()
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or_default();
    let delay = DelayModel::new(0.2, 0.5, 1, mode)?;
    println!("{trials} trials per point, {mode} sampling");

    let scenarios = [
        (
            "accurate, L = 10",
            10,
            ThresholdRule::Accurate,
            StrategyKind::Lcc,
        ),
        (
            "accurate, L = 0",
            0,
            ThresholdRule::Accurate,
            StrategyKind::Lcc,
        ),
        (
            "approximate, L = 30",
            30,
            ThresholdRule::Reduced,
            StrategyKind::Bacc,
        ),
    ];
    for (label, colluders, rule, baseline) in scenarios {
        let spec = |cancellation| SweepSpec {
            workers: 100,
            colluders,
            degree: 2,
            sets: 16,
            cancellation,
            threshold_rule: rule,
            delay,
        };
        let base_points = sweep(baseline, &spec(false), 1..=100, trials, 1)?;
        let base = best_point(&base_points).expect("baseline has feasible points");
        println!(
            "{label}: {baseline} best {:.4} s at K′ = {}",
            base.outcome.mean, base.kprime
        );
        for cancellation in [false, true] {
            let points = sweep(StrategyKind::Apcc, &spec(cancellation), 1..=100, trials, 1)?;
            let best = best_point(&points).expect("APCC has feasible points");
            println!(
                "  apcc cancel={cancellation:<5} best {:.4} s at K′ = {:>2}  reduction {:5.1}%",
                best.outcome.mean,
                best.kprime,
                100.0 * (1.0 - best.outcome.mean / base.outcome.mean)
            );
        }
        if colluders == 0 {
            let points = sweep(StrategyKind::LccMmc, &spec(false), 1..=100, trials, 1)?;
            let best = best_point(&points).expect("LCC-MMC has feasible points");
            println!(
                "  lcc-mmc best {:.4} s at K′ = {}",
                best.outcome.mean, best.kprime
            );
        }
    }
    Ok(())
}
