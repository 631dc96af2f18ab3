//! Chebyshev node families and barycentric interpolation kernels.
//!
//! Both the encoder and the two decoders evaluate interpolants in the
//! barycentric form
//!
//! ```text
//!          Σ_j  w_j / (x − x_j) · v_j
//! p(x) = ─────────────────────────────
//!          Σ_k  w_k / (x − x_k)
//! ```
//!
//! With `w_j = 1/Π_{k≠j}(x_j − x_k)` this is the unique polynomial of degree
//! `< M` through the `M` samples. With `w_j = (−1)^j` it is Berrut's rational
//! interpolant, which has no real poles and stays well conditioned for any
//! number of samples.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::MatrixBlock;

/// Minimum pairwise gap for two nodes to count as distinct.
pub const MIN_NODE_GAP: f64 = 1e-12;

/// Evaluation points closer than this to a node return that node's value.
pub const POLE_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    /// `cos((2j+1)π / 2M)`, the roots of `T_M`.
    ChebyshevFirst,
    /// `cos(jπ / (M−1))`, the extrema of `T_{M−1}`.
    ChebyshevSecond,
    Arbitrary,
}

/// Distinct interpolation nodes in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSet {
    nodes: Vec<f64>,
    kind: NodeKind,
}

impl NodeSet {
    /// Wraps user-supplied nodes after checking range and distinctness.
    pub fn arbitrary(nodes: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::invalid("node set must not be empty"));
        }
        if let Some(x) = nodes.iter().find(|x| !(-1.0..=1.0).contains(*x)) {
            return Err(Error::invalid(format!("node {x} lies outside [-1, 1]")));
        }
        let gap = min_pairwise_gap(&nodes);
        if gap < MIN_NODE_GAP {
            return Err(Error::DegenerateNodes { gap });
        }
        Ok(Self {
            nodes,
            kind: NodeKind::Arbitrary,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Barycentric weights aligned with a [`NodeSet`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaryWeights(Vec<f64>);

impl BaryWeights {
    pub fn new(weights: Vec<f64>) -> Self {
        Self(weights)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Chebyshev nodes of the requested kind in strictly decreasing order.
pub fn chebyshev_nodes(count: usize, kind: NodeKind) -> Result<NodeSet> {
    if count == 0 {
        return Err(Error::invalid("node count must be at least 1"));
    }
    let nodes = match kind {
        NodeKind::ChebyshevFirst => (0..count)
            .map(|j| ((2 * j + 1) as f64 * PI / (2 * count) as f64).cos())
            .collect(),
        NodeKind::ChebyshevSecond => {
            if count < 2 {
                return Err(Error::invalid(
                    "second-kind Chebyshev nodes need at least 2 points",
                ));
            }
            (0..count)
                .map(|j| (j as f64 * PI / (count - 1) as f64).cos())
                .collect()
        }
        NodeKind::Arbitrary => {
            return Err(Error::invalid(
                "arbitrary nodes must be supplied through NodeSet::arbitrary",
            ))
        }
    };
    Ok(NodeSet { nodes, kind })
}

/// `w_j = 1 / Π_{k≠j} (x_j − x_k)`.
pub fn polynomial_weights(nodes: &NodeSet) -> Result<BaryWeights> {
    polynomial_weights_for(nodes.nodes())
}

pub(crate) fn polynomial_weights_for(xs: &[f64]) -> Result<BaryWeights> {
    let gap = min_pairwise_gap(xs);
    if gap < MIN_NODE_GAP {
        return Err(Error::DegenerateNodes { gap });
    }
    let weights = xs
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            let prod: f64 = xs
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &xk)| xj - xk)
                .product();
            1.0 / prod
        })
        .collect();
    Ok(BaryWeights(weights))
}

/// Berrut's weights `(−1)^j`.
pub fn berrut_weights(count: usize) -> BaryWeights {
    BaryWeights(
        (0..count)
            .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 })
            .collect(),
    )
}

/// Normalized barycentric basis values `ℓ_j(x)` at `x`.
///
/// When `x` sits within [`POLE_TOLERANCE`] of a node the result is the
/// indicator of that node.
pub fn basis_values(xs: &[f64], weights: &[f64], x: f64) -> Vec<f64> {
    debug_assert_eq!(xs.len(), weights.len());
    if let Some(hit) = xs.iter().position(|&xj| (x - xj).abs() < POLE_TOLERANCE) {
        let mut out = vec![0.0; xs.len()];
        out[hit] = 1.0;
        return out;
    }
    let mut terms: Vec<f64> = xs
        .iter()
        .zip(weights)
        .map(|(&xj, &wj)| wj / (x - xj))
        .collect();
    let denom: f64 = terms.iter().sum();
    for t in &mut terms {
        *t /= denom;
    }
    terms
}

/// Evaluates the barycentric interpolant through `(nodes[j], values[j])` at `x`.
pub fn bary_eval(
    nodes: &NodeSet,
    weights: &BaryWeights,
    values: &[MatrixBlock],
    x: f64,
) -> Result<MatrixBlock> {
    bary_eval_at(nodes.nodes(), weights.as_slice(), values, x)
}

pub(crate) fn bary_eval_at(
    xs: &[f64],
    weights: &[f64],
    values: &[MatrixBlock],
    x: f64,
) -> Result<MatrixBlock> {
    if xs.is_empty() {
        return Err(Error::invalid("interpolation needs at least one node"));
    }
    if xs.len() != weights.len() || xs.len() != values.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} nodes, {} weights, {} values",
            xs.len(),
            weights.len(),
            values.len()
        )));
    }
    let shape = values[0].shape();
    if values.iter().any(|v| v.shape() != shape) {
        return Err(Error::invalid("interpolation values must share one shape"));
    }
    if let Some(hit) = xs.iter().position(|&xj| (x - xj).abs() < POLE_TOLERANCE) {
        return Ok(values[hit].clone());
    }
    Ok(combine(&basis_values(xs, weights, x), values))
}

/// `Σ_j coeffs[j] · values[j]`.
pub(crate) fn combine(coeffs: &[f64], values: &[MatrixBlock]) -> MatrixBlock {
    let (rows, cols) = values[0].shape();
    let mut out = MatrixBlock::zeros(rows, cols);
    for (c, v) in coeffs.iter().zip(values) {
        if *c != 0.0 {
            out.axpy(*c, v);
        }
    }
    out
}

/// Scalar convenience wrapper around [`bary_eval`].
pub fn bary_eval_scalar(xs: &[f64], weights: &[f64], values: &[f64], x: f64) -> Result<f64> {
    if xs.len() != weights.len() || xs.len() != values.len() || xs.is_empty() {
        return Err(Error::invalid("length mismatch in scalar interpolation"));
    }
    if let Some(hit) = xs.iter().position(|&xj| (x - xj).abs() < POLE_TOLERANCE) {
        return Ok(values[hit]);
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for ((&xj, &wj), &vj) in xs.iter().zip(weights).zip(values) {
        let t = wj / (x - xj);
        num += t * vj;
        den += t;
    }
    Ok(num / den)
}

fn min_pairwise_gap(xs: &[f64]) -> f64 {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}
