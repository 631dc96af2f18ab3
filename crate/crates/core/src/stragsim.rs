//! Monte Carlo straggler simulation.
//!
//! Every worker's time for one subtask is a shifted exponential `a + Exp(μ)`
//! with `μ = K·μ0` and `a = a0/K` when the whole task is split `K` ways, so
//! all strategies below see the same per-worker load when their division
//! counts are matched (`K′ = K/r`, `K^{LM} = K`).
//!
//! APCC workers run their `r` subtasks in set order. Set `i` completes when
//! its `H_i`-th result arrives; with cancellation, workers still busy on a
//! completed set drop it and move straight to their next unfinished set.
//! The task is done when every set is.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{PartitionPlan, ThresholdRule};
use crate::error::{Error, Result};
use crate::partopt::{self, OptimModel};

/// How a worker's subtask durations relate to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    /// One draw per worker, reused for all of its subtasks.
    #[default]
    Persistent,
    /// A fresh draw for every subtask.
    Iid,
}

impl FromStr for SamplingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "persistent" => Ok(Self::Persistent),
            "iid" => Ok(Self::Iid),
            other => Err(Error::invalid(format!(
                "unknown sampling mode '{other}' (expected persistent or iid)"
            ))),
        }
    }
}

impl fmt::Display for SamplingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Persistent => "persistent",
            Self::Iid => "iid",
        })
    }
}

/// Entire-task delay parameters scaled to one subtask of a `K`-way split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayModel {
    pub mu0: f64,
    pub a0: f64,
    pub divisions: usize,
    pub mode: SamplingMode,
}

impl DelayModel {
    pub fn new(mu0: f64, a0: f64, divisions: usize, mode: SamplingMode) -> Result<Self> {
        if !(mu0 > 0.0 && mu0.is_finite()) {
            return Err(Error::invalid("mu0 must be positive and finite"));
        }
        if !(a0 >= 0.0 && a0.is_finite()) {
            return Err(Error::invalid("a0 must be non-negative and finite"));
        }
        if divisions == 0 {
            return Err(Error::invalid("divisions must be positive"));
        }
        Ok(Self {
            mu0,
            a0,
            divisions,
            mode,
        })
    }

    /// The same entire-task parameters at the division count `cfg` runs at.
    pub fn for_strategy(&self, cfg: &StrategyConfig) -> Self {
        Self {
            divisions: cfg.divisions,
            ..*self
        }
    }

    /// Per-subtask rate `K·μ0`.
    pub fn mu(&self) -> f64 {
        self.divisions as f64 * self.mu0
    }

    /// Per-subtask shift `a0/K`.
    pub fn a(&self) -> f64 {
        self.a0 / self.divisions as f64
    }

    fn sampler(&self) -> Sampler {
        Sampler {
            a: self.a(),
            exp: Exp::new(self.mu()).expect("validated rate"),
        }
    }
}

struct Sampler {
    a: f64,
    exp: Exp<f64>,
}

impl Sampler {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.a + self.exp.sample(rng)
    }
}

/// One `a + Exp(μ)` subtask duration.
pub fn sample_subtask_delay<R: Rng + ?Sized>(model: &DelayModel, rng: &mut R) -> f64 {
    model.sampler().draw(rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    Apcc,
    Lcc,
    LccMmc,
    Bacc,
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "apcc" => Ok(Self::Apcc),
            "lcc" => Ok(Self::Lcc),
            "lcc-mmc" => Ok(Self::LccMmc),
            "bacc" => Ok(Self::Bacc),
            other => Err(Error::invalid(format!(
                "unknown strategy '{other}' (expected apcc, lcc, lcc-mmc or bacc)"
            ))),
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Apcc => "apcc",
            Self::Lcc => "lcc",
            Self::LccMmc => "lcc-mmc",
            Self::Bacc => "bacc",
        })
    }
}

/// A strategy together with everything needed to simulate it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyConfig {
    pub kind: StrategyKind,
    pub workers: usize,
    pub colluders: usize,
    pub degree: usize,
    /// Set sizes (APCC only).
    pub plan: Option<PartitionPlan>,
    /// Division count setting the per-subtask scale: `K` for APCC, `K′` for
    /// LCC and BACC, `K^{LM}` for LCC-MMC.
    pub divisions: usize,
    /// Subtasks each worker runs in sequence (`r` for APCC and LCC-MMC, 1 otherwise).
    pub rounds: usize,
    pub cancellation: bool,
    pub bacc_threshold: Option<usize>,
    /// Threshold rule for APCC sets.
    pub threshold_rule: ThresholdRule,
}

impl StrategyConfig {
    pub fn apcc(
        workers: usize,
        colluders: usize,
        degree: usize,
        plan: PartitionPlan,
        cancellation: bool,
    ) -> Result<Self> {
        Self::apcc_with_rule(
            workers,
            colluders,
            degree,
            plan,
            cancellation,
            ThresholdRule::Accurate,
        )
    }

    pub fn apcc_with_rule(
        workers: usize,
        colluders: usize,
        degree: usize,
        plan: PartitionPlan,
        cancellation: bool,
        rule: ThresholdRule,
    ) -> Result<Self> {
        Self {
            kind: StrategyKind::Apcc,
            workers,
            colluders,
            degree,
            divisions: plan.total(),
            rounds: plan.sets(),
            plan: Some(plan),
            cancellation,
            bacc_threshold: None,
            threshold_rule: rule,
        }
        .validated()
    }

    pub fn lcc(workers: usize, colluders: usize, degree: usize, kprime: usize) -> Result<Self> {
        Self::single_round(StrategyKind::Lcc, workers, colluders, degree, kprime, None)
    }

    pub fn bacc(workers: usize, kprime: usize, threshold: usize) -> Result<Self> {
        Self::single_round(StrategyKind::Bacc, workers, 0, 1, kprime, Some(threshold))
    }

    /// LCC with each worker running `rounds` subtasks of a `K^{LM}`-way split.
    pub fn lcc_mmc(
        workers: usize,
        colluders: usize,
        degree: usize,
        rounds: usize,
        k_lm: usize,
    ) -> Result<Self> {
        Self {
            kind: StrategyKind::LccMmc,
            workers,
            colluders,
            degree,
            plan: None,
            divisions: k_lm,
            rounds,
            cancellation: false,
            bacc_threshold: None,
            threshold_rule: ThresholdRule::Accurate,
        }
        .validated()
    }

    fn single_round(
        kind: StrategyKind,
        workers: usize,
        colluders: usize,
        degree: usize,
        kprime: usize,
        bacc_threshold: Option<usize>,
    ) -> Result<Self> {
        Self {
            kind,
            workers,
            colluders,
            degree,
            plan: None,
            divisions: kprime,
            rounds: 1,
            cancellation: false,
            bacc_threshold,
            threshold_rule: ThresholdRule::Accurate,
        }
        .validated()
    }

    /// A baseline carrying the same per-worker load as this APCC config:
    /// `K′ = K/r` for LCC and BACC (BACC reuses APCC's threshold rule at
    /// `K′`), `K^{LM} = K` with `r` rounds for LCC-MMC.
    pub fn matched(&self, kind: StrategyKind) -> Result<Self> {
        let plan = match (&self.plan, self.kind) {
            (Some(plan), StrategyKind::Apcc) => plan,
            _ => return Err(Error::invalid("load matching starts from an APCC config")),
        };
        let (k, r) = (plan.total(), plan.sets());
        if k % r != 0 {
            return Err(Error::invalid(format!(
                "K = {k} is not a multiple of r = {r}, so K′ = K/r is not an integer"
            )));
        }
        let kprime = k / r;
        match kind {
            StrategyKind::Apcc => Ok(self.clone()),
            StrategyKind::Lcc => Self::lcc(self.workers, self.colluders, self.degree, kprime),
            StrategyKind::Bacc => {
                let h = self.threshold_rule.threshold(
                    kprime,
                    self.colluders,
                    self.degree,
                    self.workers,
                );
                Self::bacc(self.workers, kprime, h)
            }
            StrategyKind::LccMmc => Self::lcc_mmc(self.workers, self.colluders, self.degree, r, k),
        }
    }

    /// APCC at `K = r·K′` with set sizes chosen by the partition optimizer
    /// under the delay model's per-subtask parameters.
    #[allow(clippy::too_many_arguments)]
    pub fn apcc_optimized(
        workers: usize,
        colluders: usize,
        degree: usize,
        sets: usize,
        kprime: usize,
        cancellation: bool,
        rule: ThresholdRule,
        delay: &DelayModel,
    ) -> Result<Self> {
        let k = sets * kprime;
        let scaled = DelayModel {
            divisions: k,
            ..*delay
        };
        let model = OptimModel::new(
            workers,
            k,
            colluders,
            degree,
            sets,
            scaled.mu(),
            scaled.a(),
            cancellation,
        )?
        .with_threshold(rule)?;
        let solution = partopt::optimize(&model)?;
        Self::apcc_with_rule(
            workers,
            colluders,
            degree,
            PartitionPlan::new(k, solution.set_sizes)?,
            cancellation,
            rule,
        )
    }

    fn validated(self) -> Result<Self> {
        if self.workers == 0 || self.degree == 0 || self.divisions == 0 || self.rounds == 0 {
            return Err(Error::invalid(
                "workers, degree, divisions and rounds must be positive",
            ));
        }
        if self.kind == StrategyKind::LccMmc && self.colluders > 0 {
            return Err(Error::invalid(
                "LCC-MMC cannot preserve privacy; it requires L = 0",
            ));
        }
        if self.threshold_rule == ThresholdRule::Uncoded && self.colluders > 0 {
            return Err(Error::invalid("the uncoded threshold requires L = 0"));
        }
        for (set, &h) in self.thresholds().iter().enumerate() {
            let available = if self.kind == StrategyKind::LccMmc {
                self.workers * self.rounds
            } else {
                self.workers
            };
            if h == 0 {
                return Err(Error::invalid("thresholds must be positive"));
            }
            if h > available {
                return Err(match &self.plan {
                    Some(plan) => Error::InfeasibleSet {
                        set,
                        size: plan.set_sizes()[set],
                        reason: format!("threshold {h} exceeds N = {}", self.workers),
                    },
                    None => Error::InfeasibleThreshold {
                        threshold: h,
                        workers: available,
                    },
                });
            }
        }
        Ok(self)
    }

    /// Results needed: one per APCC set, a single value for the baselines.
    pub fn thresholds(&self) -> Vec<usize> {
        let (n, l, d) = (self.workers, self.colluders, self.degree);
        match self.kind {
            StrategyKind::Apcc => self
                .plan
                .as_ref()
                .map(|p| {
                    p.set_sizes()
                        .iter()
                        .map(|&k| self.threshold_rule.threshold(k, l, d, n))
                        .collect()
                })
                .unwrap_or_default(),
            StrategyKind::Lcc => vec![ThresholdRule::Accurate.threshold(self.divisions, l, d, n)],
            StrategyKind::LccMmc => vec![d * (self.divisions - 1) + 1],
            StrategyKind::Bacc => vec![self.bacc_threshold.unwrap_or(1)],
        }
    }

    /// Division count shown in sweep tables: `K′` for every strategy.
    pub fn kprime(&self) -> usize {
        match self.kind {
            StrategyKind::Apcc | StrategyKind::LccMmc => self.divisions / self.rounds,
            _ => self.divisions,
        }
    }

    /// Expected compute per worker for one task, in seconds.
    pub fn expected_load(&self, delay: &DelayModel) -> f64 {
        let m = delay.for_strategy(self);
        self.rounds as f64 * (m.a() + 1.0 / m.mu())
    }
}

/// One simulated run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub delay: f64,
    /// Completion instant of each APCC set, empty for baselines.
    pub set_completion: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
struct Event {
    time: f64,
    set: usize,
    worker: usize,
    epoch: u32,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    // Reversed so the max-heap pops the earliest event, ties by (set, worker).
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then(other.set.cmp(&self.set))
            .then(other.worker.cmp(&self.worker))
    }
}

/// APCC completion times for given durations, `durations[n·r + i]` being
/// worker `n`'s time for its set-`i` subtask.
pub fn apcc_trial_from_durations(
    thresholds: &[usize],
    workers: usize,
    durations: &[f64],
    cancellation: bool,
) -> Result<TrialOutcome> {
    let r = thresholds.len();
    if r == 0 || durations.len() != workers * r {
        return Err(Error::invalid(format!(
            "expected {} durations for {workers} workers and {r} sets, got {}",
            workers * r,
            durations.len()
        )));
    }
    if let Some(&h) = thresholds.iter().find(|&&h| h == 0 || h > workers) {
        return Err(Error::InfeasibleThreshold {
            threshold: h,
            workers,
        });
    }
    let set_completion = if cancellation {
        event_driven(thresholds, workers, durations)
    } else {
        sequential_sets(thresholds, workers, durations)
    };
    let delay = set_completion
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(TrialOutcome {
        delay,
        set_completion,
    })
}

/// Without cancellation every worker finishes set `i` at the running sum of
/// its first `i+1` durations, so set `i` completes at the `H_i`-th smallest.
fn sequential_sets(thresholds: &[usize], workers: usize, durations: &[f64]) -> Vec<f64> {
    let r = thresholds.len();
    let mut clock = vec![0.0; workers];
    let mut scratch = vec![0.0; workers];
    thresholds
        .iter()
        .enumerate()
        .map(|(i, &h)| {
            for (n, c) in clock.iter_mut().enumerate() {
                *c += durations[n * r + i];
            }
            scratch.copy_from_slice(&clock);
            kth_smallest(&mut scratch, h)
        })
        .collect()
}

fn kth_smallest(values: &mut [f64], k: usize) -> f64 {
    let (_, v, _) = values.select_nth_unstable_by(k - 1, f64::total_cmp);
    *v
}

fn event_driven(thresholds: &[usize], workers: usize, durations: &[f64]) -> Vec<f64> {
    let r = thresholds.len();
    let mut completed: Vec<Option<f64>> = vec![None; r];
    let mut received = vec![0usize; r];
    let mut current: Vec<Option<usize>> = vec![Some(0); workers];
    let mut epoch = vec![0u32; workers];
    let mut open = r;
    let mut queue: BinaryHeap<Event> = (0..workers)
        .map(|n| Event {
            time: durations[n * r],
            set: 0,
            worker: n,
            epoch: 0,
        })
        .collect();

    let next_open =
        |completed: &[Option<f64>], after: usize| (after + 1..r).find(|&j| completed[j].is_none());

    while let Some(ev) = queue.pop() {
        if ev.epoch != epoch[ev.worker] {
            continue;
        }
        let (t, i, n) = (ev.time, ev.set, ev.worker);
        received[i] += 1;
        if received[i] == thresholds[i] {
            completed[i] = Some(t);
            open -= 1;
            if open == 0 {
                break;
            }
            let busy: Vec<usize> = (0..workers)
                .filter(|&m| m != n && current[m] == Some(i))
                .collect();
            for m in busy {
                epoch[m] += 1;
                current[m] = next_open(&completed, i);
                if let Some(j) = current[m] {
                    queue.push(Event {
                        time: t + durations[m * r + j],
                        set: j,
                        worker: m,
                        epoch: epoch[m],
                    });
                }
            }
        }
        current[n] = next_open(&completed, i);
        if let Some(j) = current[n] {
            queue.push(Event {
                time: t + durations[n * r + j],
                set: j,
                worker: n,
                epoch: epoch[n],
            });
        }
    }
    completed
        .into_iter()
        .map(|c| c.expect("every set completes once all workers have reported"))
        .collect()
}

/// Worker-major duration matrix: persistent mode repeats one draw per worker.
fn draw_durations<R: Rng + ?Sized>(
    model: &DelayModel,
    workers: usize,
    rounds: usize,
    rng: &mut R,
) -> Vec<f64> {
    let sampler = model.sampler();
    let mut out = Vec::with_capacity(workers * rounds);
    for _ in 0..workers {
        match model.mode {
            SamplingMode::Persistent => {
                let t = sampler.draw(rng);
                out.extend(std::iter::repeat_n(t, rounds));
            }
            SamplingMode::Iid => out.extend((0..rounds).map(|_| sampler.draw(rng))),
        }
    }
    out
}

fn check_model(cfg: &StrategyConfig, model: &DelayModel) -> Result<()> {
    if model.divisions != cfg.divisions {
        return Err(Error::invalid(format!(
            "delay model is scaled for K = {} but the strategy runs at {}; use DelayModel::for_strategy",
            model.divisions, cfg.divisions
        )));
    }
    Ok(())
}

pub fn run_apcc_trial<R: Rng + ?Sized>(
    cfg: &StrategyConfig,
    model: &DelayModel,
    rng: &mut R,
) -> Result<TrialOutcome> {
    if cfg.kind != StrategyKind::Apcc {
        return Err(Error::invalid(format!(
            "{} is not an APCC config",
            cfg.kind
        )));
    }
    check_model(cfg, model)?;
    let durations = draw_durations(model, cfg.workers, cfg.rounds, rng);
    apcc_trial_from_durations(&cfg.thresholds(), cfg.workers, &durations, cfg.cancellation)
}

pub fn run_baseline_trial<R: Rng + ?Sized>(
    cfg: &StrategyConfig,
    model: &DelayModel,
    rng: &mut R,
) -> Result<f64> {
    check_model(cfg, model)?;
    let h = cfg.thresholds()[0];
    match cfg.kind {
        StrategyKind::Apcc => Err(Error::invalid("APCC is not a baseline")),
        StrategyKind::Lcc | StrategyKind::Bacc => {
            let mut d = draw_durations(model, cfg.workers, 1, rng);
            Ok(kth_smallest(&mut d, h))
        }
        StrategyKind::LccMmc => {
            let r = cfg.rounds;
            let mut d = draw_durations(model, cfg.workers, r, rng);
            for row in d.chunks_mut(r) {
                for m in 1..r {
                    row[m] += row[m - 1];
                }
            }
            Ok(kth_smallest(&mut d, h))
        }
    }
}

/// Trial-level sample of delays with summary statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimOutcome {
    pub trial_delays: Vec<f64>,
    /// Per-trial set completion instants (APCC only).
    pub per_set_completion: Vec<Vec<f64>>,
    pub mean: f64,
    /// Sample standard deviation over `√trials`; zero for a single trial.
    pub stderr: f64,
    pub min: f64,
}

impl SimOutcome {
    fn from_trials(trial_delays: Vec<f64>, per_set_completion: Vec<Vec<f64>>) -> Self {
        let (mean, stderr) = mean_stderr(&trial_delays);
        let min = trial_delays.iter().copied().fold(f64::INFINITY, f64::min);
        Self {
            trial_delays,
            per_set_completion,
            mean,
            stderr,
            min,
        }
    }
}

/// Mean and standard error, summed in index order.
pub fn mean_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    if samples.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Generator for trial `t`: stream `t` of a ChaCha8 keyed by the master seed.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

pub fn monte_carlo(
    cfg: &StrategyConfig,
    model: &DelayModel,
    trials: usize,
    master_seed: u64,
) -> Result<SimOutcome> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    check_model(cfg, model)?;
    let results: Vec<TrialOutcome> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(master_seed, t);
            match cfg.kind {
                StrategyKind::Apcc => run_apcc_trial(cfg, model, &mut rng),
                _ => run_baseline_trial(cfg, model, &mut rng).map(|delay| TrialOutcome {
                    delay,
                    set_completion: Vec::new(),
                }),
            }
        })
        .collect::<Result<_>>()?;
    let delays = results.iter().map(|o| o.delay).collect();
    let per_set = if cfg.kind == StrategyKind::Apcc {
        results.into_iter().map(|o| o.set_completion).collect()
    } else {
        Vec::new()
    };
    Ok(SimOutcome::from_trials(delays, per_set))
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

/// Average number of workers holding a finished set-`i` result at time `t`.
pub fn empirical_expected_results(
    cfg: &StrategyConfig,
    model: &DelayModel,
    t: f64,
    set_index: usize,
    trials: usize,
    master_seed: u64,
) -> Result<Estimate> {
    if cfg.kind != StrategyKind::Apcc || cfg.cancellation {
        return Err(Error::invalid(
            "the expected-results formula only holds for APCC without cancellation",
        ));
    }
    if model.mode != SamplingMode::Persistent {
        return Err(Error::invalid(
            "the expected-results formula assumes persistent sampling",
        ));
    }
    if set_index >= cfg.rounds {
        return Err(Error::invalid(format!(
            "set {set_index} out of range for {} sets",
            cfg.rounds
        )));
    }
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    check_model(cfg, model)?;
    let r = cfg.rounds;
    let counts: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(master_seed, trial);
            let d = draw_durations(model, cfg.workers, r, &mut rng);
            d.chunks(r)
                .filter(|row| row[..=set_index].iter().sum::<f64>() <= t)
                .count() as f64
        })
        .collect();
    let (mean, stderr) = mean_stderr(&counts);
    Ok(Estimate { mean, stderr })
}

/// `N · P[(i+1)·T ≤ t]` for the persistent model.
pub fn expected_results(workers: usize, model: &DelayModel, t: f64, set_index: usize) -> f64 {
    let per = t / (set_index + 1) as f64 - model.a();
    if per < 0.0 {
        0.0
    } else {
        workers as f64 * (1.0 - (-model.mu() * per).exp())
    }
}

/// Expected `H`-th order statistic of `N` draws of `a + Exp(μ)`.
pub fn order_statistic_mean(model: &DelayModel, workers: usize, h: usize) -> f64 {
    model.a() + (0..h).map(|k| 1.0 / (workers - k) as f64).sum::<f64>() / model.mu()
}

/// One row of a division sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub kprime: usize,
    pub config: StrategyConfig,
    pub outcome: SimOutcome,
}

/// Simulates `kind` at every `K′` in `kprimes` that yields a feasible config.
///
/// APCC runs at `K = r·K′` with optimized set sizes; baselines are built
/// load-matched to that APCC config. Infeasible points are skipped.
pub fn sweep(
    kind: StrategyKind,
    base: &SweepSpec,
    kprimes: impl IntoIterator<Item = usize>,
    trials: usize,
    master_seed: u64,
) -> Result<Vec<SweepPoint>> {
    let mut out = Vec::new();
    for kprime in kprimes {
        let cfg = match base.config(kind, kprime) {
            Ok(cfg) => cfg,
            Err(e) if e.is_infeasible() => continue,
            Err(e) => return Err(e),
        };
        let model = base.delay.for_strategy(&cfg);
        let outcome = monte_carlo(&cfg, &model, trials, master_seed)?;
        out.push(SweepPoint {
            kprime,
            config: cfg,
            outcome,
        });
    }
    Ok(out)
}

/// Shared experiment parameters for building load-matched strategies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    pub workers: usize,
    pub colluders: usize,
    pub degree: usize,
    pub sets: usize,
    pub cancellation: bool,
    pub threshold_rule: ThresholdRule,
    pub delay: DelayModel,
}

impl SweepSpec {
    pub fn config(&self, kind: StrategyKind, kprime: usize) -> Result<StrategyConfig> {
        let apcc = || {
            StrategyConfig::apcc_optimized(
                self.workers,
                self.colluders,
                self.degree,
                self.sets,
                kprime,
                self.cancellation,
                self.threshold_rule,
                &self.delay,
            )
        };
        match kind {
            StrategyKind::Apcc => apcc(),
            StrategyKind::Lcc => {
                StrategyConfig::lcc(self.workers, self.colluders, self.degree, kprime)
            }
            StrategyKind::Bacc => {
                let h = self.threshold_rule.threshold(
                    kprime,
                    self.colluders,
                    self.degree,
                    self.workers,
                );
                StrategyConfig::bacc(self.workers, kprime, h)
            }
            StrategyKind::LccMmc => StrategyConfig::lcc_mmc(
                self.workers,
                self.colluders,
                self.degree,
                self.sets,
                self.sets * kprime,
            ),
        }
    }
}

/// Smallest mean over a sweep, with its `K′`.
pub fn best_point(points: &[SweepPoint]) -> Option<&SweepPoint> {
    points.iter().min_by(|p, q| {
        p.outcome
            .mean
            .total_cmp(&q.outcome.mean)
            .then(p.kprime.cmp(&q.kprime))
    })
}
