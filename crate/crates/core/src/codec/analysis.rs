//! Closed-form performance figures: encoding rate, capacity, the division
//! bound, the Berrut error bound, and the multilinear construction used to
//! extend threshold bounds from multilinear to general polynomial `f`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::MatrixBlock;

/// Largest degree accepted by [`multilinearize`]; evaluation costs `2^d` calls.
pub const MAX_MULTILINEAR_DEGREE: usize = 20;

/// `K / (N − S)`.
pub fn encoding_rate(subtasks: usize, workers: usize, stragglers: usize) -> Result<f64> {
    if stragglers >= workers {
        return Err(Error::invalid(format!(
            "stragglers ({stragglers}) must be fewer than workers ({workers})"
        )));
    }
    Ok(subtasks as f64 / (workers - stragglers) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Capacity {
    pub value: f64,
    pub feasible: bool,
}

/// Supremum of the encoding rate over linear schemes tolerating `S`
/// stragglers and `L` colluders for a degree-`d` polynomial.
pub fn capacity(
    workers: usize,
    stragglers: usize,
    colluders: usize,
    degree: usize,
) -> Result<Capacity> {
    if stragglers >= workers {
        return Err(Error::invalid("stragglers must be fewer than workers"));
    }
    if degree == 0 {
        return Err(Error::invalid("degree must be positive"));
    }
    let live = (workers - stragglers) as f64;
    let d = degree as f64;
    if colluders > 0 {
        let numerator = live - d * (colluders as f64 - 1.0) - 1.0;
        if numerator <= 0.0 {
            return Ok(Capacity {
                value: 0.0,
                feasible: false,
            });
        }
        Ok(Capacity {
            value: numerator / (d * live),
            feasible: true,
        })
    } else {
        let coded = (live + d - 1.0) / (d * live);
        let repeated = workers as f64 / (live * (stragglers as f64 + 1.0));
        Ok(Capacity {
            value: coded.max(repeated),
            feasible: true,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DivisionBound {
    pub value: i64,
    pub feasible: bool,
}

/// Maximum number of task divisions `K` that keeps the computation decodable.
pub fn max_divisions(
    workers: usize,
    stragglers: usize,
    colluders: usize,
    degree: usize,
) -> Result<DivisionBound> {
    if stragglers >= workers {
        return Err(Error::invalid("stragglers must be fewer than workers"));
    }
    if degree == 0 {
        return Err(Error::invalid("degree must be positive"));
    }
    let live = (workers - stragglers) as i64;
    let d = degree as i64;
    let value = if colluders > 0 {
        (live - 1).div_euclid(d) - colluders as i64 + 1
    } else {
        ((live + d - 1) / d).max(workers as i64 / (stragglers as i64 + 1))
    };
    Ok(DivisionBound {
        value,
        feasible: value >= 1,
    })
}

/// Upper bound on the sup-norm error of Berrut decoding from `R` of `N`
/// second-kind Chebyshev samples of `h`.
///
/// `second_deriv_norm` and `first_deriv_norm` are `‖h''‖∞` and `‖h'‖∞` on
/// `[-1, 1]`; the first-derivative term only enters for odd `R`.
pub fn approx_error_bound(
    workers: usize,
    received: usize,
    second_deriv_norm: f64,
    first_deriv_norm: f64,
) -> Result<f64> {
    if received <= 3 {
        return Err(Error::invalid("the error bound needs more than 3 results"));
    }
    if received > workers {
        return Err(Error::invalid("cannot receive more results than workers"));
    }
    if second_deriv_norm < 0.0 || first_deriv_norm < 0.0 {
        return Err(Error::invalid("derivative norms must be non-negative"));
    }
    let missing = (workers - received) as f64;
    let gamma = (missing + 1.0) * (missing + 3.0) * PI * PI / 4.0;
    let factor =
        2.0 * (1.0 + gamma) * ((missing + 1.0) * PI / (2.0 * (workers as f64 - 1.0))).sin();
    Ok(if received.is_multiple_of(2) {
        factor * second_deriv_norm
    } else {
        factor * (second_deriv_norm + first_deriv_norm)
    })
}

/// The `d`-argument multilinear form built from a degree-`d` function `f`:
///
/// ```text
/// f'(D_1, …, D_d) = Σ_{T ⊆ [1:d]} (−1)^{|T|} f(Σ_{k∈T} D_k)
/// ```
///
/// All terms of `f` below total degree `d`, and every monomial repeating an
/// argument, cancel; what is left is linear in each argument.
pub struct Multilinear<F> {
    f: F,
    degree: usize,
}

pub fn multilinearize<F>(f: F, degree: usize) -> Result<Multilinear<F>>
where
    F: Fn(&MatrixBlock) -> MatrixBlock,
{
    if degree == 0 {
        return Err(Error::invalid("degree must be positive"));
    }
    if degree > MAX_MULTILINEAR_DEGREE {
        return Err(Error::TooLarge {
            count: 1u128 << degree,
            limit: 1u128 << MAX_MULTILINEAR_DEGREE,
        });
    }
    Ok(Multilinear { f, degree })
}

impl<F> Multilinear<F>
where
    F: Fn(&MatrixBlock) -> MatrixBlock,
{
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval(&self, args: &[MatrixBlock]) -> Result<MatrixBlock> {
        if args.len() != self.degree {
            return Err(Error::invalid(format!(
                "expected {} arguments, got {}",
                self.degree,
                args.len()
            )));
        }
        let (rows, cols) = args[0].shape();
        if args.iter().any(|a| a.shape() != (rows, cols)) {
            return Err(Error::invalid("arguments must share one shape"));
        }
        let mut acc: Option<MatrixBlock> = None;
        for mask in 0u32..(1u32 << self.degree) {
            let mut sum = MatrixBlock::zeros(rows, cols);
            for (k, a) in args.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    sum.axpy(1.0, a);
                }
            }
            let term = (self.f)(&sum);
            let sign = if mask.count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            match acc.as_mut() {
                None => acc = Some(term.scale(sign)),
                Some(total) => {
                    if total.shape() != term.shape() {
                        return Err(Error::invalid("f must return blocks of one shape"));
                    }
                    total.axpy(sign, &term);
                }
            }
        }
        Ok(acc.expect("at least one subset"))
    }
}
