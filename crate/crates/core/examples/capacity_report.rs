//! Encoding rate against capacity, the division bound, and the
//! communication/operation counts of APCC versus LCC.
//!
//! cargo run --example capacity_report

use apcc::bench::{cmd_report_costs, ExperimentConfig};
use apcc::codec::{capacity, encoding_rate, max_divisions};

fn main() -> apcc::Result<()> {
    println!(
        "{:>3} {:>3} {:>3} {:>3} {:>6} {:>8} {:>8}",
        "N", "S", "L", "d", "K_max", "rate", "capacity"
    );
    for (n, s, l, d) in [
        (10, 2, 1, 2),
        (40, 4, 3, 2),
        (100, 0, 10, 2),
        (200, 10, 20, 4),
        (12, 2, 0, 2),
    ] {
        let k = max_divisions(n, s, l, d)?;
        let cap = capacity(n, s, l, d)?;
        let rate = encoding_rate(k.value.max(1) as usize, n, s)?;
        println!(
            "{n:>3} {s:>3} {l:>3} {d:>3} {:>6} {rate:>8.4} {:>8.4}",
            k.value, cap.value
        );
    }
    println!();
    print!(
        "{}",
        cmd_report_costs(&ExperimentConfig::default())?.to_csv()
    );
    Ok(())
}
