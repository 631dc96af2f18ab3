//! Berrut decoding of a non-polynomial function from however many results
//! have arrived, compared with the analytic error bound.
//!
//! cargo run --example approximate_decoding

use apcc::codec::{self, approx_error_bound, CodecContext, CodingMode, DecodeMode, ReturnedResult};
use apcc::MatrixBlock;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> apcc::Result<()> {
    let workers = 40;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let data: Vec<MatrixBlock> = (0..4)
        .map(|_| MatrixBlock::random_uniform(3, 3, -0.5, 0.5, &mut rng))
        .collect();
    let f = |d: &MatrixBlock| d.map(f64::tanh);

    println!("{:>8} {:>14} {:>12}", "results", "mean rel err", "bound");
    for received in [10usize, 20, 30, 40] {
        let ctx = CodecContext::new(
            0,
            data.len(),
            1,
            workers,
            1,
            CodingMode::Approximate {
                threshold: received,
            },
        )?;
        let shares = codec::encode_set(&ctx, &data, &mut rng)?;
        let mut results: Vec<ReturnedResult> = shares
            .iter()
            .map(|s| ReturnedResult::compute(s, f))
            .collect();
        results.shuffle(&mut rng);
        let decoded = codec::decode_set(&ctx, &results[..received], DecodeMode::Approximate)?;
        let err: f64 = decoded
            .iter()
            .zip(&data)
            .map(|(g, d)| g.relative_error(&f(d)))
            .sum::<f64>()
            / data.len() as f64;
        // Crude derivative norms of tanh∘g on [-1, 1]; the bound is loose by design.
        let bound = approx_error_bound(workers, received, 10.0, 5.0)?;
        println!("{received:>8} {err:>14.3e} {bound:>12.1}");
    }
    Ok(())
}
