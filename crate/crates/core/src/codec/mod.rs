//! Hierarchical privacy-padded coding of partitioned computations.
//!
//! The `K` input blocks are split into `r` ordered sets. Set `i` holds `K_i`
//! blocks, which are padded with `L` uniform random blocks and encoded through
//! the barycentric interpolant `g_i` over first-kind Chebyshev nodes `α`. Worker
//! `n` receives `g_i(β_n)` where `β` are second-kind Chebyshev nodes. Any `L`
//! colluding workers see shares whose pad coefficients form a nonsingular
//! system, so the pads mask the data.
//!
//! Decoding interpolates the returned `f(g_i(β_n))` and evaluates at the data
//! nodes `α_{i,j}`:
//!
//! * accurate: polynomial weights over the first `d(K_i+L−1)+1` results,
//!   exact when `f` is a polynomial of degree `d`;
//! * approximate: Berrut weights over whatever arrived, for arbitrary `f`;
//! * uncoded (`L = 0`): workers hold raw blocks and decoding just picks them.

mod analysis;

pub use analysis::{
    approx_error_bound, capacity, encoding_rate, max_divisions, multilinearize, Capacity,
    DivisionBound, Multilinear, MAX_MULTILINEAR_DEGREE,
};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::{
    self, basis_values, berrut_weights, chebyshev_nodes, polynomial_weights, BaryWeights, NodeKind,
    NodeSet, POLE_TOLERANCE,
};
use crate::matrix::MatrixBlock;

/// How the `K` subtasks are split into ordered sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionPlan {
    set_sizes: Vec<usize>,
    total: usize,
}

impl PartitionPlan {
    pub fn new(total: usize, set_sizes: Vec<usize>) -> Result<Self> {
        if set_sizes.is_empty() {
            return Err(Error::invalid("a plan needs at least one set"));
        }
        if set_sizes.iter().any(|&k| k < 1) {
            return Err(Error::invalid("every set must hold at least one subtask"));
        }
        let actual: usize = set_sizes.iter().sum();
        if actual != total {
            return Err(Error::PartitionSum {
                expected: total,
                actual,
            });
        }
        Ok(Self { set_sizes, total })
    }

    /// Number of sets `r`.
    pub fn sets(&self) -> usize {
        self.set_sizes.len()
    }

    pub fn set_sizes(&self) -> &[usize] {
        &self.set_sizes
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// Splits `items` into consecutive runs following the plan.
    pub fn split<T: Clone>(&self, items: &[T]) -> Result<Vec<Vec<T>>> {
        if items.len() != self.total {
            return Err(Error::invalid(format!(
                "plan covers {} subtasks but {} were supplied",
                self.total,
                items.len()
            )));
        }
        let mut out = Vec::with_capacity(self.sets());
        let mut start = 0;
        for &k in &self.set_sizes {
            out.push(items[start..start + k].to_vec());
            start += k;
        }
        Ok(out)
    }
}

pub fn make_plan(total: usize, set_sizes: &[usize]) -> Result<PartitionPlan> {
    PartitionPlan::new(total, set_sizes.to_vec())
}

/// Rule mapping a set size to the number of results that completes the set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdRule {
    /// `d(K_i+L−1)+1`, exact polynomial recovery.
    Accurate,
    /// `N − ⌊N/K_i⌋ + 1`, repetition of raw blocks (`L = 0`).
    Uncoded,
    /// `⌊d(K_i+L−1)/2⌋ + 1`, a halved threshold for approximate decoding.
    Reduced,
}

impl ThresholdRule {
    pub fn threshold(
        self,
        set_size: usize,
        colluders: usize,
        degree: usize,
        workers: usize,
    ) -> usize {
        let span = set_size + colluders;
        match self {
            ThresholdRule::Accurate => degree * span.saturating_sub(1) + 1,
            ThresholdRule::Uncoded => workers
                .checked_div(set_size)
                .map_or(workers + 1, |copies| workers - copies + 1),
            ThresholdRule::Reduced => degree * span.saturating_sub(1) / 2 + 1,
        }
    }

    /// Largest set size whose threshold does not exceed `workers`.
    pub fn max_set_size(self, colluders: usize, degree: usize, workers: usize) -> usize {
        let mut k = 0;
        while self.threshold(k + 1, colluders, degree, workers) <= workers {
            k += 1;
            if k > workers * 4 + 4 {
                break;
            }
        }
        k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CodingMode {
    Accurate,
    /// Berrut decoding; the caller picks how many results to wait for.
    Approximate {
        threshold: usize,
    },
    Uncoded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecodeMode {
    Accurate,
    Approximate,
    Uncoded,
}

/// Everything needed to encode and decode one set.
#[derive(Debug, Clone)]
pub struct CodecContext {
    set_index: usize,
    set_size: usize,
    colluders: usize,
    workers: usize,
    degree: usize,
    mode: CodingMode,
    alpha: NodeSet,
    beta: Vec<f64>,
    encode_weights: BaryWeights,
}

impl CodecContext {
    pub fn new(
        set_index: usize,
        set_size: usize,
        colluders: usize,
        workers: usize,
        degree: usize,
        mode: CodingMode,
    ) -> Result<Self> {
        if set_size == 0 || workers == 0 || degree == 0 {
            return Err(Error::invalid(
                "set size, worker count and degree must be positive",
            ));
        }
        let alpha = chebyshev_nodes(set_size + colluders, NodeKind::ChebyshevFirst)?;
        let encode_weights = polynomial_weights(&alpha)?;
        let beta = match mode {
            CodingMode::Uncoded => {
                if colluders != 0 {
                    return Err(Error::invalid("the uncoded variant requires L = 0"));
                }
                if set_size > workers {
                    return Err(Error::InfeasibleThreshold {
                        threshold: workers + 1,
                        workers,
                    });
                }
                (0..workers).map(|n| alpha.nodes()[n % set_size]).collect()
            }
            CodingMode::Accurate => {
                let threshold =
                    ThresholdRule::Accurate.threshold(set_size, colluders, degree, workers);
                if threshold > workers {
                    return Err(Error::InfeasibleThreshold { threshold, workers });
                }
                worker_nodes(workers)?
            }
            CodingMode::Approximate { threshold } => {
                if threshold == 0 || threshold > workers {
                    return Err(Error::InfeasibleThreshold { threshold, workers });
                }
                worker_nodes(workers)?
            }
        };
        Ok(Self {
            set_index,
            set_size,
            colluders,
            workers,
            degree,
            mode,
            alpha,
            beta,
            encode_weights,
        })
    }

    pub fn set_index(&self) -> usize {
        self.set_index
    }

    pub fn set_size(&self) -> usize {
        self.set_size
    }

    pub fn colluders(&self) -> usize {
        self.colluders
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn mode(&self) -> CodingMode {
        self.mode
    }

    /// Encoding nodes `α_{i,0..K_i+L}`; the first `K_i` carry data.
    pub fn alpha(&self) -> &NodeSet {
        &self.alpha
    }

    /// Worker evaluation points `β_0..β_N`.
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn encode_weights(&self) -> &BaryWeights {
        &self.encode_weights
    }

    /// Encoding coefficients at `x`: the weight of every data and pad block in `g_i(x)`.
    pub fn encoding_coefficients(&self, x: f64) -> Vec<f64> {
        basis_values(self.alpha.nodes(), self.encode_weights.as_slice(), x)
    }
}

fn worker_nodes(workers: usize) -> Result<Vec<f64>> {
    if workers == 1 {
        Ok(vec![1.0])
    } else {
        Ok(chebyshev_nodes(workers, NodeKind::ChebyshevSecond)?
            .nodes()
            .to_vec())
    }
}

/// Number of results that completes the set under the context's mode.
pub fn recovery_threshold(ctx: &CodecContext) -> usize {
    match ctx.mode {
        CodingMode::Accurate => {
            ThresholdRule::Accurate.threshold(ctx.set_size, ctx.colluders, ctx.degree, ctx.workers)
        }
        CodingMode::Uncoded => {
            ThresholdRule::Uncoded.threshold(ctx.set_size, 0, ctx.degree, ctx.workers)
        }
        CodingMode::Approximate { threshold } => threshold,
    }
}

/// Encoded input `g_i(β_n)` sent to worker `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodedShare {
    pub set_index: usize,
    pub worker_index: usize,
    pub eval_point: f64,
    pub payload: MatrixBlock,
}

/// A worker's result `f(g_i(x̃_n))` as seen by the master.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnedResult {
    pub set_index: usize,
    pub worker_index: usize,
    pub eval_point: f64,
    pub payload: MatrixBlock,
}

impl ReturnedResult {
    /// Applies the worker computation to a share.
    pub fn compute<F>(share: &EncodedShare, f: F) -> Self
    where
        F: FnOnce(&MatrixBlock) -> MatrixBlock,
    {
        Self {
            set_index: share.set_index,
            worker_index: share.worker_index,
            eval_point: share.eval_point,
            payload: f(&share.payload),
        }
    }
}

/// Encodes one set, drawing `L` pad blocks with entries uniform on `[-1, 1]`.
pub fn encode_set<R: Rng + ?Sized>(
    ctx: &CodecContext,
    data: &[MatrixBlock],
    rng: &mut R,
) -> Result<Vec<EncodedShare>> {
    let (rows, cols) = check_data(ctx, data)?;
    let pads: Vec<MatrixBlock> = (0..ctx.colluders)
        .map(|_| MatrixBlock::random_uniform(rows, cols, -1.0, 1.0, rng))
        .collect();
    encode_with_pads(ctx, data, &pads)
}

/// Encodes one set with caller-supplied pad blocks.
pub fn encode_with_pads(
    ctx: &CodecContext,
    data: &[MatrixBlock],
    pads: &[MatrixBlock],
) -> Result<Vec<EncodedShare>> {
    let shape = check_data(ctx, data)?;
    if pads.len() != ctx.colluders {
        return Err(Error::invalid(format!(
            "expected {} pad blocks, got {}",
            ctx.colluders,
            pads.len()
        )));
    }
    if pads.iter().any(|p| p.shape() != shape) {
        return Err(Error::invalid("pad blocks must match the data shape"));
    }
    let blocks: Vec<MatrixBlock> = data.iter().chain(pads).cloned().collect();
    let xs = ctx.alpha.nodes();
    let ws = ctx.encode_weights.as_slice();
    ctx.beta
        .iter()
        .enumerate()
        .map(|(n, &x)| {
            Ok(EncodedShare {
                set_index: ctx.set_index,
                worker_index: n,
                eval_point: x,
                payload: interp::bary_eval_at(xs, ws, &blocks, x)?,
            })
        })
        .collect()
}

fn check_data(ctx: &CodecContext, data: &[MatrixBlock]) -> Result<(usize, usize)> {
    if data.len() != ctx.set_size {
        return Err(Error::invalid(format!(
            "set {} expects {} data blocks, got {}",
            ctx.set_index,
            ctx.set_size,
            data.len()
        )));
    }
    let shape = data[0].shape();
    if data.iter().any(|d| d.shape() != shape) {
        return Err(Error::invalid("data blocks must share one shape"));
    }
    Ok(shape)
}

/// Recovers `[f(D_{i,0}), …, f(D_{i,K_i−1})]` from returned results.
///
/// Results are taken in the order supplied (arrival order). Accurate decoding
/// keeps the first `d(K_i+L−1)+1` and ignores the rest.
pub fn decode_set(
    ctx: &CodecContext,
    results: &[ReturnedResult],
    mode: DecodeMode,
) -> Result<Vec<MatrixBlock>> {
    if let Some(bad) = results.iter().find(|r| r.set_index != ctx.set_index) {
        return Err(Error::invalid(format!(
            "result from set {} passed to decoder of set {}",
            bad.set_index, ctx.set_index
        )));
    }
    if let Some(first) = results.first() {
        let shape = first.payload.shape();
        if results.iter().any(|r| r.payload.shape() != shape) {
            return Err(Error::invalid("result payloads must share one shape"));
        }
    }
    let targets = &ctx.alpha.nodes()[..ctx.set_size];
    match mode {
        DecodeMode::Accurate => {
            let needed = ThresholdRule::Accurate.threshold(
                ctx.set_size,
                ctx.colluders,
                ctx.degree,
                ctx.workers,
            );
            if results.len() < needed {
                return Err(Error::InsufficientResults {
                    needed,
                    got: results.len(),
                });
            }
            let used = &results[..needed];
            let xs: Vec<f64> = used.iter().map(|r| r.eval_point).collect();
            let weights = interp::polynomial_weights_for(&xs)?;
            let values: Vec<MatrixBlock> = used.iter().map(|r| r.payload.clone()).collect();
            targets
                .iter()
                .map(|&a| interp::bary_eval_at(&xs, weights.as_slice(), &values, a))
                .collect()
        }
        DecodeMode::Approximate => {
            if results.is_empty() {
                return Err(Error::InsufficientResults { needed: 1, got: 0 });
            }
            let mut sorted: Vec<&ReturnedResult> = results.iter().collect();
            sorted.sort_by(|a, b| b.eval_point.total_cmp(&a.eval_point));
            let xs: Vec<f64> = sorted.iter().map(|r| r.eval_point).collect();
            let gap = xs
                .windows(2)
                .map(|w| w[0] - w[1])
                .fold(f64::INFINITY, f64::min);
            if gap < interp::MIN_NODE_GAP {
                return Err(Error::DegenerateNodes { gap });
            }
            let weights = berrut_weights(xs.len());
            let values: Vec<MatrixBlock> = sorted.iter().map(|r| r.payload.clone()).collect();
            targets
                .iter()
                .map(|&a| interp::bary_eval_at(&xs, weights.as_slice(), &values, a))
                .collect()
        }
        DecodeMode::Uncoded => {
            if ctx.mode != CodingMode::Uncoded {
                return Err(Error::invalid(
                    "uncoded decoding needs a context built in uncoded mode",
                ));
            }
            targets
                .iter()
                .map(|&a| {
                    results
                        .iter()
                        .find(|r| (r.eval_point - a).abs() < POLE_TOLERANCE)
                        .map(|r| r.payload.clone())
                        .ok_or(Error::InsufficientResults {
                            needed: recovery_threshold(ctx),
                            got: results.len(),
                        })
                })
                .collect()
        }
    }
}

/// Coefficients of the pad blocks in the shares of `worker_subset`.
///
/// Entry `(s, j)` multiplies `Z_{i,K_i+j}` in `g_i(β_{worker_subset[s]})`.
pub fn padding_coefficient_matrix(
    ctx: &CodecContext,
    worker_subset: &[usize],
) -> Result<MatrixBlock> {
    if ctx.colluders == 0 {
        return Err(Error::invalid("padding matrix needs L >= 1"));
    }
    if worker_subset.len() != ctx.colluders {
        return Err(Error::invalid(format!(
            "subset must have exactly L = {} workers",
            ctx.colluders
        )));
    }
    for (i, &n) in worker_subset.iter().enumerate() {
        if n >= ctx.workers {
            return Err(Error::invalid(format!("worker index {n} out of range")));
        }
        if worker_subset[..i].contains(&n) {
            return Err(Error::invalid(format!("duplicate worker index {n}")));
        }
    }
    let l = ctx.colluders;
    let mut entries = Vec::with_capacity(l * l);
    for &n in worker_subset {
        let coeffs = ctx.encoding_coefficients(ctx.beta[n]);
        entries.extend_from_slice(&coeffs[ctx.set_size..]);
    }
    MatrixBlock::new(l, l, entries)
}

/// Absolute determinant of the padding matrix after scaling each row to unit max-norm.
///
/// A zero row (a worker whose share carries no pad at all) yields 0.
pub fn privacy_witness(ctx: &CodecContext, worker_subset: &[usize]) -> Result<f64> {
    let m = padding_coefficient_matrix(ctx, worker_subset)?;
    let l = m.rows();
    let mut normalized = m.clone();
    for r in 0..l {
        let scale = (0..l).fold(0.0f64, |acc, c| acc.max(m.get(r, c).abs()));
        if scale == 0.0 {
            return Ok(0.0);
        }
        for c in 0..l {
            normalized.set(r, c, m.get(r, c) / scale);
        }
    }
    Ok(normalized.determinant()?.abs())
}

/// Worker indices whose evaluation point coincides with a data node.
///
/// Such a worker receives a raw data block; no pad can hide it.
pub fn exposed_workers(ctx: &CodecContext) -> Vec<usize> {
    if ctx.mode == CodingMode::Uncoded {
        return (0..ctx.workers).collect();
    }
    let data_nodes = &ctx.alpha.nodes()[..ctx.set_size];
    ctx.beta
        .iter()
        .enumerate()
        .filter(|(_, b)| data_nodes.iter().any(|a| (*b - a).abs() < POLE_TOLERANCE))
        .map(|(n, _)| n)
        .collect()
}
