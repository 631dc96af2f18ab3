//! Choosing the set sizes `K_0..K_{r−1}`.
//!
//! Set `i` is finished once `H_i` workers have returned its result, and every
//! worker runs the sets in index order, so set `i` needs `i+1` subtask times.
//! With per-subtask delay `a + Exp(μ)` the expected-count constraint
//! `N·P[T_{i+1} ≤ t_i] ≥ H_i` gives the per-set time without cancellation
//!
//! ```text
//! t_i = (i+1) · (a − ln(1 − H_i/N) / μ)
//! ```
//!
//! and with cancellation the expected first arrival among the
//! `N − H_i + 1` workers still racing for the last needed result
//!
//! ```text
//! t_i = (i+1) / (μ (N − H_i + 1)) + a (i+1).
//! ```
//!
//! The goal is `min max_i t_i` subject to `Σ K_i = K`. Relaxing integrality
//! equalizes all `t_i` at a common `z*` found by bisection; rounding that and
//! running maximum value descent (repeatedly moving one subtask off the
//! bottleneck set) reaches the integer optimum.

use serde::{Deserialize, Serialize};

use crate::codec::ThresholdRule;
use crate::error::{Error, Result};

/// Bisection iteration cap for the relaxed solutions.
pub const MAX_BISECTION_STEPS: usize = 200;

/// Upper limit on compositions enumerated by [`brute_force`].
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimModel {
    pub workers: usize,
    pub subtasks: usize,
    pub colluders: usize,
    pub degree: usize,
    pub sets: usize,
    /// Per-subtask rate (1/s).
    pub mu: f64,
    /// Per-subtask minimum time (s).
    pub a: f64,
    pub cancellation: bool,
    pub threshold: ThresholdRule,
}

impl OptimModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        workers: usize,
        subtasks: usize,
        colluders: usize,
        degree: usize,
        sets: usize,
        mu: f64,
        a: f64,
        cancellation: bool,
    ) -> Result<Self> {
        Self {
            workers,
            subtasks,
            colluders,
            degree,
            sets,
            mu,
            a,
            cancellation,
            threshold: ThresholdRule::Accurate,
        }
        .validated()
    }

    pub fn with_threshold(mut self, rule: ThresholdRule) -> Result<Self> {
        self.threshold = rule;
        self.validated()
    }

    fn validated(self) -> Result<Self> {
        if self.workers == 0 || self.subtasks == 0 || self.degree == 0 || self.sets == 0 {
            return Err(Error::invalid(
                "workers, subtasks, degree and set count must be positive",
            ));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) || !(self.a >= 0.0 && self.a.is_finite()) {
            return Err(Error::invalid("need mu > 0 and a >= 0"));
        }
        if self.threshold == ThresholdRule::Uncoded && self.colluders != 0 {
            return Err(Error::invalid("the uncoded threshold requires L = 0"));
        }
        Ok(self)
    }

    pub fn threshold_for(&self, set_size: usize) -> usize {
        self.threshold
            .threshold(set_size, self.colluders, self.degree, self.workers)
    }

    /// Largest set size with a finite per-set time.
    pub fn set_cap(&self) -> usize {
        let n = self.workers;
        let mut k = 0;
        loop {
            let h = self.threshold_for(k + 1);
            let ok = if self.cancellation { h <= n } else { h < n };
            if !ok || k + 1 > n * 4 + 4 {
                return k;
            }
            k += 1;
        }
    }

    /// Per-set time under the model's cancellation setting.
    pub fn set_time(&self, set_size: usize, set_index: usize) -> Result<f64> {
        if self.cancellation {
            set_time_cancel(set_size, set_index, self)
        } else {
            set_time_nocancel(set_size, set_index, self)
        }
    }

    fn set_time_or_inf(&self, set_size: usize, set_index: usize) -> f64 {
        self.set_time(set_size, set_index).unwrap_or(f64::INFINITY)
    }

    /// Degree used by the relaxed closed forms (`d`, or `d/2` for the reduced rule).
    fn relaxed_degree(&self) -> Result<f64> {
        match self.threshold {
            ThresholdRule::Accurate => Ok(self.degree as f64),
            ThresholdRule::Reduced => Ok(self.degree as f64 / 2.0),
            ThresholdRule::Uncoded => Err(Error::invalid(
                "no closed-form relaxation for the uncoded threshold",
            )),
        }
    }

    /// Feasibility of the integer problem: `r ≤ K ≤ r·cap`.
    pub fn check_feasible(&self) -> Result<()> {
        let cap = self.set_cap();
        if cap == 0 {
            return Err(Error::InfeasibleModel(format!(
                "no set size is feasible with N = {}, L = {}, d = {}",
                self.workers, self.colluders, self.degree
            )));
        }
        if self.sets > self.subtasks {
            return Err(Error::InfeasibleModel(format!(
                "{} sets cannot hold only {} subtasks",
                self.sets, self.subtasks
            )));
        }
        if self.sets * cap < self.subtasks {
            return Err(Error::InfeasibleModel(format!(
                "{} subtasks exceed {} sets of at most {}",
                self.subtasks, self.sets, cap
            )));
        }
        Ok(())
    }
}

/// Smallest `t` meeting the expected-count constraint of set `i` with equality.
pub fn set_time_nocancel(set_size: usize, set_index: usize, model: &OptimModel) -> Result<f64> {
    let h = model.threshold_for(set_size);
    let n = model.workers;
    if h >= n {
        return Err(Error::InfeasibleSet {
            set: set_index,
            size: set_size,
            reason: format!("threshold {h} is not below N = {n}"),
        });
    }
    let m = (set_index + 1) as f64;
    Ok(m * (model.a - (1.0 - h as f64 / n as f64).ln() / model.mu))
}

/// Expected delay of set `i` when it is the last to finish, with cancellation.
pub fn set_time_cancel(set_size: usize, set_index: usize, model: &OptimModel) -> Result<f64> {
    let h = model.threshold_for(set_size);
    let n = model.workers;
    if h > n {
        return Err(Error::InfeasibleSet {
            set: set_index,
            size: set_size,
            reason: format!("threshold {h} exceeds N = {n}"),
        });
    }
    let racing = (n - h + 1) as f64;
    let m = (set_index + 1) as f64;
    Ok(m / (model.mu * racing) + model.a * m)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelaxedSolution {
    pub z_star: f64,
    pub real_sizes: Vec<f64>,
    /// `|LHS − RHS|` of the implicit equation at `z_star`.
    pub residual: f64,
}

/// Continuous per-set times for real-valued sizes, matching the relaxed problem.
pub fn relaxed_set_times(model: &OptimModel, real_sizes: &[f64]) -> Result<Vec<f64>> {
    let d = model.relaxed_degree()?;
    let n = model.workers as f64;
    let l = model.colluders as f64;
    Ok(real_sizes
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let m = (i + 1) as f64;
            if model.cancellation {
                m / (model.mu * (n - d * (k + l - 1.0))) + model.a * m
            } else {
                let h = d * (k + l - 1.0) + 1.0;
                m * (model.a - (1.0 - h / n).ln() / model.mu)
            }
        })
        .collect())
}

/// Closed-form optimum of the integer-relaxed problem.
pub fn solve_relaxed(model: &OptimModel) -> Result<RelaxedSolution> {
    let d = model.relaxed_degree()?;
    let n = model.workers as f64;
    let k = model.subtasks as f64;
    let l = model.colluders as f64;
    let r = model.sets as f64;
    let (mu, a) = (model.mu, model.a);
    let total_threshold = d * (k + r * l - r) + r;
    let lo = a * r;
    let hi_limit = 1e6 * a.max(1.0 / mu);

    if model.cancellation {
        let rhs = mu * (r * n - total_threshold + r);
        if rhs <= 0.0 {
            return Err(Error::InfeasibleModel(format!(
                "cancellation relaxation needs μ[rN − d(K+rL−r)] > 0, got {rhs}"
            )));
        }
        let lhs = |z: f64| -> f64 {
            (0..model.sets)
                .map(|i| {
                    let m = (i + 1) as f64;
                    m / (z - a * m)
                })
                .sum()
        };
        let z = bisect_decreasing(lhs, rhs, lo, lo + 1.0 / mu, hi_limit, true)?;
        let real_sizes = (0..model.sets)
            .map(|i| {
                let m = (i + 1) as f64;
                n / d - m / (d * mu * (z - a * m)) - l + 1.0
            })
            .collect();
        Ok(RelaxedSolution {
            z_star: z,
            real_sizes,
            residual: (lhs(z) - rhs).abs(),
        })
    } else {
        let rhs = r - total_threshold / n;
        if !(rhs > 0.0 && rhs < r) {
            return Err(Error::InfeasibleModel(format!(
                "relaxation needs r − (d(K+rL−r)+r)/N in (0, r), got {rhs}"
            )));
        }
        let lhs = |z: f64| -> f64 {
            (0..model.sets)
                .map(|i| (-mu * (z / (i + 1) as f64 - a)).exp())
                .sum()
        };
        // With a large shift the root falls below a·r: the last set would need
        // fewer than zero results. The relaxation still admits it (sizes are
        // unconstrained reals), and lhs(0) = r·e^{μa} > rhs brackets it.
        let lo = if lhs(lo) >= rhs { lo } else { 0.0 };
        let z = bisect_decreasing(lhs, rhs, lo, lo + 1.0 / mu, hi_limit, false)?;
        let real_sizes = (0..model.sets)
            .map(|i| {
                let cdf = 1.0 - (-mu * (z / (i + 1) as f64 - a)).exp();
                n / d * cdf - 1.0 / d - l + 1.0
            })
            .collect();
        Ok(RelaxedSolution {
            z_star: z,
            real_sizes,
            residual: (lhs(z) - rhs).abs(),
        })
    }
}

/// Root of a decreasing `f(z) = target` on `(lo, hi_limit]`, expanding the
/// upper end geometrically from `hi`.
fn bisect_decreasing(
    f: impl Fn(f64) -> f64,
    target: f64,
    lo: f64,
    mut hi: f64,
    hi_limit: f64,
    lo_open: bool,
) -> Result<f64> {
    let mut lo = lo;
    if !lo_open && f(lo) == target {
        return Ok(lo);
    }
    while f(hi) > target {
        if hi >= hi_limit {
            return Err(Error::Numeric(format!(
                "no bracket for the implicit equation below z = {hi_limit:e}"
            )));
        }
        lo = hi;
        hi = (hi * 2.0).min(hi_limit);
    }
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Pick whichever end of the final bracket is closer.
    let z = if lo_open && !(f(lo).is_finite()) {
        hi
    } else if (f(lo) - target).abs() < (f(hi) - target).abs() {
        lo
    } else {
        hi
    };
    Ok(z)
}

/// KKT residuals of a relaxed solution, with multipliers recovered from the
/// stationarity equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KktResiduals {
    /// Largest violation of the gradient-of-Lagrangian equations.
    pub stationarity: f64,
    /// Largest `|multiplier × constraint|`.
    pub complementary_slackness: f64,
    /// Largest primal violation, including `|Σ K_i − K|`.
    pub primal: f64,
    /// Smallest multiplier; must be non-negative.
    pub min_multiplier: f64,
}

pub fn kkt_residuals(model: &OptimModel, solution: &RelaxedSolution) -> Result<KktResiduals> {
    let d = model.relaxed_degree()?;
    let n = model.workers as f64;
    let l = model.colluders as f64;
    let (mu, a, z) = (model.mu, model.a, solution.z_star);
    let sizes = &solution.real_sizes;
    let times = relaxed_set_times(model, sizes)?;
    let sum_gap = (sizes.iter().sum::<f64>() - model.subtasks as f64).abs();

    if model.cancellation {
        // ∂/∂K_i: λ + α_i d(i+1) / (μ (N − d(K_i+L−1))²) = 0, Σ α_i = 1.
        let scale: Vec<f64> = sizes
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let slack = n - d * (k + l - 1.0);
                mu * slack * slack / (d * (i + 1) as f64)
            })
            .collect();
        let neg_lambda = 1.0 / scale.iter().sum::<f64>();
        let alphas: Vec<f64> = scale.iter().map(|s| neg_lambda * s).collect();
        let stationarity = sizes
            .iter()
            .zip(&alphas)
            .enumerate()
            .map(|(i, (&k, &al))| {
                let slack = n - d * (k + l - 1.0);
                (-neg_lambda + al * d * (i + 1) as f64 / (mu * slack * slack)).abs()
            })
            .fold((1.0 - alphas.iter().sum::<f64>()).abs(), f64::max);
        let complementary = alphas
            .iter()
            .zip(&times)
            .map(|(al, t)| (al * (t - z)).abs())
            .fold(0.0, f64::max);
        let primal = times
            .iter()
            .map(|t| (t - z).max(0.0))
            .fold(sum_gap, f64::max);
        let min_multiplier = alphas.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(KktResiduals {
            stationarity,
            complementary_slackness: complementary,
            primal,
            min_multiplier,
        })
    } else {
        // ∂/∂K_i: λ + d β_i = 0; ∂/∂t_i: α_i = β_i N μ/(i+1) e^{−μ(t_i/(i+1) − a)}; Σ α_i = 1.
        let decay: Vec<f64> = times
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let m = (i + 1) as f64;
                n * mu / m * (-mu * (t / m - a)).exp()
            })
            .collect();
        let beta = 1.0 / decay.iter().sum::<f64>();
        let lambda = -d * beta;
        let alphas: Vec<f64> = decay.iter().map(|e| beta * e).collect();
        let stationarity = alphas
            .iter()
            .zip(&decay)
            .map(|(al, e)| (al - beta * e).abs())
            .fold((lambda + d * beta).abs(), f64::max)
            .max((1.0 - alphas.iter().sum::<f64>()).abs());
        let constraint: Vec<f64> = sizes
            .iter()
            .zip(&times)
            .enumerate()
            .map(|(i, (&k, &t))| {
                let m = (i + 1) as f64;
                d * (k + l - 1.0) + 1.0 - n * (1.0 - (-mu * (t / m - a)).exp())
            })
            .collect();
        let complementary = alphas
            .iter()
            .zip(&times)
            .map(|(al, t)| (al * (t - z)).abs())
            .chain(constraint.iter().map(|g| (beta * g).abs()))
            .fold(0.0, f64::max);
        let primal = constraint
            .iter()
            .map(|g| g.max(0.0))
            .chain(times.iter().map(|t| (t - z).max(0.0)))
            .fold(sum_gap, f64::max);
        let min_multiplier = alphas.iter().copied().fold(beta, f64::min);
        Ok(KktResiduals {
            stationarity,
            complementary_slackness: complementary,
            primal,
            min_multiplier,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionSolution {
    pub set_sizes: Vec<usize>,
    /// `max_i t_i` in seconds.
    pub objective: f64,
    pub per_set_times: Vec<f64>,
    /// Accepted descent steps (zero for exhaustive search).
    pub iterations: usize,
    /// Objective before the first and after every accepted step.
    pub trajectory: Vec<f64>,
}

/// Largest-remainder rounding of relaxed sizes to a feasible integer partition.
pub fn round_and_repair(
    real_sizes: &[f64],
    total: usize,
    model: &OptimModel,
) -> Result<Vec<usize>> {
    let r = real_sizes.len();
    if r == 0 || r != model.sets {
        return Err(Error::invalid(format!(
            "expected {} relaxed sizes, got {r}",
            model.sets
        )));
    }
    let cap = model.set_cap();
    if total < r || r * cap < total {
        return Err(Error::InfeasibleModel(format!(
            "cannot split {total} subtasks into {r} sets of size 1..={cap}"
        )));
    }
    let clean: Vec<f64> = real_sizes
        .iter()
        .map(|&x| if x.is_finite() { x.max(0.0) } else { 0.0 })
        .collect();
    let mut sizes: Vec<usize> = clean.iter().map(|x| x.floor() as usize).collect();
    let mut order: Vec<usize> = (0..r).collect();
    // Largest remainder first; lower index wins ties.
    order.sort_by(|&p, &q| {
        let rp = clean[p] - clean[p].floor();
        let rq = clean[q] - clean[q].floor();
        rq.total_cmp(&rp).then(p.cmp(&q))
    });
    let assigned: usize = sizes.iter().sum();
    if assigned < total {
        for step in 0..total - assigned {
            sizes[order[step % r]] += 1;
        }
    } else {
        for step in 0..assigned - total {
            // Take from the smallest remainders, skipping empty sets.
            let mut idx = r - 1 - step % r;
            let mut guard = 0;
            while sizes[order[idx]] == 0 && guard < r {
                idx = (idx + r - 1) % r;
                guard += 1;
            }
            sizes[order[idx]] -= 1;
        }
    }
    // Floor at one: borrow from the largest set (lower index on ties).
    for i in 0..r {
        while sizes[i] == 0 {
            let donor = argmax_by_size(&sizes);
            sizes[donor] -= 1;
            sizes[i] += 1;
        }
    }
    // Clamp to the cap; spill into the least-loaded sets with room.
    for i in 0..r {
        while sizes[i] > cap {
            let taker = (0..r)
                .filter(|&j| sizes[j] < cap)
                .min_by(|&p, &q| sizes[p].cmp(&sizes[q]).then(p.cmp(&q)))
                .ok_or_else(|| {
                    Error::InfeasibleModel("set caps cannot absorb the excess".into())
                })?;
            sizes[i] -= 1;
            sizes[taker] += 1;
        }
    }
    Ok(sizes)
}

fn argmax_by_size(sizes: &[usize]) -> usize {
    let mut best = 0;
    for (i, &s) in sizes.iter().enumerate() {
        if s > sizes[best] {
            best = i;
        }
    }
    best
}

fn evaluate(model: &OptimModel, sizes: &[usize]) -> (Vec<f64>, f64) {
    let times: Vec<f64> = sizes
        .iter()
        .enumerate()
        .map(|(i, &k)| model.set_time_or_inf(k, i))
        .collect();
    let z = times.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (times, z)
}

/// Maximum value descent from a feasible starting partition.
pub fn mvd(model: &OptimModel, initial: &[usize]) -> Result<PartitionSolution> {
    model.check_feasible()?;
    let cap = model.set_cap();
    if initial.len() != model.sets
        || initial.iter().sum::<usize>() != model.subtasks
        || initial.iter().any(|&k| k < 1 || k > cap)
    {
        return Err(Error::InfeasibleModel(format!(
            "initial partition {initial:?} is not feasible (sum {}, sizes 1..={cap})",
            model.subtasks
        )));
    }
    let time = |k: usize, i: usize| model.set_time_or_inf(k, i);
    let (sizes, trajectory) = descend(initial.to_vec(), cap, &time);
    let (per_set_times, objective) = evaluate(model, &sizes);
    if !objective.is_finite() {
        return Err(Error::InfeasibleModel(
            "descent ended on a partition with an infinite set time".into(),
        ));
    }
    Ok(PartitionSolution {
        set_sizes: sizes,
        objective,
        per_set_times,
        iterations: trajectory.len() - 1,
        trajectory,
    })
}

/// Descent loop shared by [`mvd`] and tests with synthetic time functions.
///
/// Each round moves one subtask from the bottleneck set `j` (lowest index
/// among ties) to whichever other set gives the smallest new maximum (lowest
/// index among ties), and stops when no move strictly lowers the maximum.
/// Returns the final sizes and the objective trajectory.
pub fn descend(
    mut sizes: Vec<usize>,
    cap: usize,
    time: &dyn Fn(usize, usize) -> f64,
) -> (Vec<usize>, Vec<f64>) {
    let r = sizes.len();
    let mut times: Vec<f64> = sizes.iter().enumerate().map(|(i, &k)| time(k, i)).collect();
    let mut trajectory = vec![times.iter().copied().fold(f64::NEG_INFINITY, f64::max)];
    loop {
        let (j, z) = times
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bj, bz), (i, &t)| {
                if t > bz {
                    (i, t)
                } else {
                    (bj, bz)
                }
            });
        if sizes[j] <= 1 {
            break;
        }
        let tj = time(sizes[j] - 1, j);
        let mut best: Option<(usize, f64, f64)> = None;
        for l in (0..r).filter(|&l| l != j && sizes[l] < cap) {
            let tl = time(sizes[l] + 1, l);
            let z_temp = times
                .iter()
                .enumerate()
                .map(|(i, &t)| {
                    if i == j {
                        tj
                    } else if i == l {
                        tl
                    } else {
                        t
                    }
                })
                .fold(f64::NEG_INFINITY, f64::max);
            if z_temp < best.map_or(z, |b| b.1) {
                best = Some((l, z_temp, tl));
            }
        }
        match best {
            Some((l, z_new, tl)) => {
                sizes[j] -= 1;
                sizes[l] += 1;
                times[j] = tj;
                times[l] = tl;
                trajectory.push(z_new);
            }
            None => break,
        }
    }
    (sizes, trajectory)
}

/// Exhaustive integer optimum over all compositions of `K` into `r` parts.
pub fn brute_force(model: &OptimModel) -> Result<PartitionSolution> {
    model.check_feasible()?;
    let cap = model.set_cap();
    let table: Vec<Vec<f64>> = (0..model.sets)
        .map(|i| {
            (0..=cap)
                .map(|k| {
                    if k == 0 {
                        f64::INFINITY
                    } else {
                        model.set_time_or_inf(k, i)
                    }
                })
                .collect()
        })
        .collect();
    let sizes = exhaustive_min_max(model.sets, model.subtasks, cap, &|k, i| table[i][k])?;
    let (per_set_times, objective) = evaluate(model, &sizes);
    if !objective.is_finite() {
        return Err(Error::InfeasibleModel(
            "no partition has finite set times".into(),
        ));
    }
    Ok(PartitionSolution {
        set_sizes: sizes,
        objective,
        per_set_times,
        iterations: 0,
        trajectory: vec![objective],
    })
}

/// Number of compositions of `total` into `parts` parts each in `1..=cap`.
pub fn composition_count(parts: usize, total: usize, cap: usize) -> u128 {
    let mut ways = vec![0u128; total + 1];
    ways[0] = 1;
    for _ in 0..parts {
        let mut next = vec![0u128; total + 1];
        for (s, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for k in 1..=cap {
                if s + k > total {
                    break;
                }
                next[s + k] = next[s + k].saturating_add(w);
            }
        }
        ways = next;
    }
    ways[total]
}

/// Lexicographically first composition minimizing `max_i time(K_i, i)`.
pub fn exhaustive_min_max(
    parts: usize,
    total: usize,
    cap: usize,
    time: &dyn Fn(usize, usize) -> f64,
) -> Result<Vec<usize>> {
    let count = composition_count(parts, total, cap);
    if count > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            count,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if count == 0 {
        return Err(Error::InfeasibleModel(format!(
            "no composition of {total} into {parts} parts of size 1..={cap}"
        )));
    }
    struct Search<'a> {
        parts: usize,
        cap: usize,
        time: &'a dyn Fn(usize, usize) -> f64,
        current: Vec<usize>,
        best: Option<(f64, Vec<usize>)>,
    }
    impl Search<'_> {
        fn walk(&mut self, i: usize, remaining: usize, running: f64) {
            if let Some((b, _)) = &self.best {
                if running >= *b {
                    return;
                }
            }
            let left = self.parts - i;
            if left == 1 {
                if remaining < 1 || remaining > self.cap {
                    return;
                }
                let z = running.max((self.time)(remaining, i));
                if self.best.as_ref().is_none_or(|(b, _)| z < *b) {
                    self.current[i] = remaining;
                    self.best = Some((z, self.current.clone()));
                }
                return;
            }
            let max_here = self.cap.min(remaining - (left - 1));
            let min_here = remaining.saturating_sub(self.cap * (left - 1)).max(1);
            for k in min_here..=max_here {
                self.current[i] = k;
                let z = running.max((self.time)(k, i));
                self.walk(i + 1, remaining - k, z);
            }
        }
    }
    let mut search = Search {
        parts,
        cap,
        time,
        current: vec![0; parts],
        best: None,
    };
    search.walk(0, total, f64::NEG_INFINITY);
    search
        .best
        .map(|(_, s)| s)
        .ok_or_else(|| Error::InfeasibleModel("no feasible composition".into()))
}

/// Relaxed solution, rounding, then descent. Falls back to an even split when
/// the relaxation has no closed form or no root.
pub fn optimize(model: &OptimModel) -> Result<PartitionSolution> {
    model.check_feasible()?;
    let initial = match solve_relaxed(model) {
        Ok(relaxed) => round_and_repair(&relaxed.real_sizes, model.subtasks, model)?,
        Err(_) => {
            let even = vec![model.subtasks as f64 / model.sets as f64; model.sets];
            round_and_repair(&even, model.subtasks, model)?
        }
    };
    mvd(model, &initial)
}
