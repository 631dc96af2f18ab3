//! Barycentric and Berrut interpolation on Chebyshev nodes.
//!
//! cargo run --example interpolation

use apcc::codec::approx_error_bound;
use apcc::interp::{
    bary_eval_scalar, berrut_weights, chebyshev_nodes, polynomial_weights, NodeKind,
};

fn main() -> apcc::Result<()> {
    let f = |x: f64| (3.0 * x).sin() + x * x;
    let probes = [-0.9, -0.35, 0.1, 0.62, 0.97];

    println!("{:>4} {:>14} {:>14}", "m", "poly max err", "berrut max err");
    for m in [4usize, 8, 16, 32] {
        let nodes = chebyshev_nodes(m, NodeKind::ChebyshevSecond)?;
        let xs = nodes.nodes();
        let values: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let poly = polynomial_weights(&nodes)?;
        let berrut = berrut_weights(m);
        let mut worst = (0.0f64, 0.0f64);
        for &x in &probes {
            let p = bary_eval_scalar(xs, poly.as_slice(), &values, x)?;
            let b = bary_eval_scalar(xs, berrut.as_slice(), &values, x)?;
            worst.0 = worst.0.max((p - f(x)).abs());
            worst.1 = worst.1.max((b - f(x)).abs());
        }
        println!("{m:>4} {:>14.3e} {:>14.3e}", worst.0, worst.1);
    }

    // Berrut needs no polynomial structure but converges slowly; the bound
    // below uses ‖h''‖ ≤ 11 and ‖h'‖ ≤ 5 for this f on [-1, 1].
    let bound = approx_error_bound(32, 32, 11.0, 5.0)?;
    println!("Berrut error bound at 32 of 32 samples: {bound:.3}");
    Ok(())
}
