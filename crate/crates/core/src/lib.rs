//! Adaptive privacy-preserving coded computing.
//!
//! A master splits a computation `f` over `K` data blocks into `r` ordered
//! sets, encodes each set with random padding so that up to `L` colluding
//! workers learn nothing, and decodes from whichever workers answer first.
//! Slow workers still contribute to early sets, which is what cuts the
//! completion delay.
//!
//! * [`interp`]: Chebyshev nodes and barycentric/Berrut interpolation.
//! * [`codec`]: partition plans, encoding, accurate/approximate decoding,
//!   privacy padding, and capacity/rate/error-bound formulas.
//! * [`partopt`]: choosing the set sizes `K_i` (relaxed closed forms, the
//!   maximum value descent search, and an exhaustive oracle).
//! * [`stragsim`]: Monte Carlo straggler simulation against LCC, LCC-MMC and
//!   BACC baselines.
//! * [`bench`]: experiment configuration and the commands behind the `apcc`
//!   binary.
//!
//! Runnable walkthroughs live in `examples/`.

pub mod bench;
pub mod codec;
pub mod error;
pub mod interp;
pub mod matrix;
pub mod partopt;
pub mod stragsim;

pub use error::{Error, Result};
pub use matrix::MatrixBlock;
