//! Coded computation of `f(D) = Dᵀ D` over K = 6 blocks in r = 2 sets, with
//! privacy against L = 2 colluders and the slowest workers ignored.
//!
//! cargo run --example coded_matmul

use apcc::codec::{self, CodecContext, CodingMode, DecodeMode, PartitionPlan, ReturnedResult};
use apcc::MatrixBlock;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> apcc::Result<()> {
    let (workers, colluders, degree) = (16, 2, 2);
    let plan = PartitionPlan::new(6, vec![4, 2])?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let data: Vec<MatrixBlock> = (0..6)
        .map(|_| MatrixBlock::random_uniform(5, 3, -1.0, 1.0, &mut rng))
        .collect();
    let f = |d: &MatrixBlock| d.transpose().matmul(d).expect("square product");

    for (i, blocks) in plan.split(&data)?.iter().enumerate() {
        let ctx = CodecContext::new(
            i,
            blocks.len(),
            colluders,
            workers,
            degree,
            CodingMode::Accurate,
        )?;
        let shares = codec::encode_set(&ctx, blocks, &mut rng)?;
        let mut results: Vec<ReturnedResult> = shares
            .iter()
            .map(|s| ReturnedResult::compute(s, f))
            .collect();
        results.shuffle(&mut rng);
        let needed = codec::recovery_threshold(&ctx);
        let decoded = codec::decode_set(&ctx, &results[..needed], DecodeMode::Accurate)?;
        let worst = decoded
            .iter()
            .zip(blocks)
            .map(|(got, d)| got.relative_error(&f(d)))
            .fold(0.0, f64::max);
        println!(
            "set {i}: K_i = {}, waited for {needed} of {workers} workers, max relative error {worst:.2e}",
            blocks.len()
        );
    }
    Ok(())
}
