//! How the L random pad blocks hide data from any L colluding workers.
//!
//! cargo run --example privacy_padding

use apcc::codec::{
    exposed_workers, padding_coefficient_matrix, privacy_witness, CodecContext, CodingMode,
};

fn main() -> apcc::Result<()> {
    let ctx = CodecContext::new(0, 3, 2, 12, 2, CodingMode::Accurate)?;
    let pads = padding_coefficient_matrix(&ctx, &[1, 6])?;
    println!("pad coefficients seen by workers 1 and 6:");
    for r in 0..pads.rows() {
        println!("  {:+.4} {:+.4}", pads.get(r, 0), pads.get(r, 1));
    }
    println!(
        "witness (normalized |det|) = {:.4}",
        privacy_witness(&ctx, &[1, 6])?
    );

    // Every pair of workers must see an invertible pad mixture.
    let mut weakest = f64::INFINITY;
    for a in 0..12 {
        for b in a + 1..12 {
            weakest = weakest.min(privacy_witness(&ctx, &[a, b])?);
        }
    }
    println!("smallest witness over all 66 pairs = {weakest:.4}");

    // With K_i + L = 2 a worker node can land on a data node and see a raw block.
    let tiny = CodecContext::new(0, 1, 1, 5, 1, CodingMode::Accurate)?;
    println!(
        "exposed workers for K_i = 1, L = 1, N = 5: {:?}",
        exposed_workers(&tiny)
    );
    Ok(())
}
