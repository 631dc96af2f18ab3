//! Experiment configuration and the commands behind the `apcc` binary.
//!
//! A configuration starts from built-in defaults (the `N = 10, K = 12, r = 3,
//! L = 1, d = 2` running example), is overlaid with a JSON file, and then
//! with command-line flags. Every command returns a typed report that renders
//! to text, so the same code backs the binary, the examples and the tests.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codec::{
    self, CodecContext, CodingMode, DecodeMode, PartitionPlan, ReturnedResult, ThresholdRule,
};
use crate::error::{Error, Result};
use crate::matrix::MatrixBlock;
use crate::partopt::{self, OptimModel};
use crate::stragsim::{self, DelayModel, SamplingMode, StrategyKind, SweepSpec};

/// Column header of `simulate` output.
pub const CSV_HEADER: &str =
    "strategy,N,L,d,r,kdiv,trials,seed,cancellation,mean_delay_s,stderr_s,min_delay_s";

/// Largest composition count `optimize` will brute-force.
pub const OPTIMIZE_BRUTE_FORCE_LIMIT: u128 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub strategies: Vec<StrategyKind>,
    pub n: usize,
    pub l: usize,
    pub d: usize,
    pub r: usize,
    /// Total subtasks `K` for `optimize`, `demo` and `report-costs`.
    pub k: usize,
    pub kdiv_min: usize,
    /// Defaults to the largest feasible `K′`.
    pub kdiv_max: Option<usize>,
    pub a0: f64,
    pub mu0: f64,
    pub trials: usize,
    pub seed: u64,
    pub cancellation: bool,
    pub mode: SamplingMode,
    pub threshold: ThresholdRule,
    /// `-` or absent writes to standard output.
    pub out: Option<String>,
    pub demo: RegressionSettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            strategies: vec![StrategyKind::Apcc, StrategyKind::Lcc],
            n: 10,
            l: 1,
            d: 2,
            r: 3,
            k: 12,
            kdiv_min: 1,
            kdiv_max: None,
            a0: 0.5,
            mu0: 0.2,
            trials: 2000,
            seed: 1,
            cancellation: true,
            mode: SamplingMode::Persistent,
            threshold: ThresholdRule::Accurate,
            out: None,
            demo: RegressionSettings::default(),
        }
    }
}

/// Sparse settings from a config file or the command line; present fields win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub strategies: Option<Vec<StrategyKind>>,
    pub n: Option<usize>,
    pub l: Option<usize>,
    pub d: Option<usize>,
    pub r: Option<usize>,
    pub k: Option<usize>,
    pub kdiv_min: Option<usize>,
    pub kdiv_max: Option<usize>,
    pub a0: Option<f64>,
    pub mu0: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub cancellation: Option<bool>,
    pub mode: Option<SamplingMode>,
    pub threshold: Option<ThresholdRule>,
    pub out: Option<String>,
    pub demo: Option<RegressionSettings>,
}

impl ConfigOverrides {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("bad config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

impl ExperimentConfig {
    pub fn apply(mut self, o: ConfigOverrides) -> Self {
        macro_rules! take {
            ($($field:ident),*) => { $( if let Some(v) = o.$field { self.$field = v; } )* };
        }
        take!(
            strategies,
            n,
            l,
            d,
            r,
            k,
            kdiv_min,
            a0,
            mu0,
            trials,
            seed,
            cancellation,
            mode,
            threshold,
            demo
        );
        if o.kdiv_max.is_some() {
            self.kdiv_max = o.kdiv_max;
        }
        if o.out.is_some() {
            self.out = o.out;
        }
        self
    }

    /// Defaults, then the file, then the flags.
    pub fn resolve(file: Option<ConfigOverrides>, flags: ConfigOverrides) -> Result<Self> {
        let mut cfg = Self::default();
        if let Some(f) = file {
            cfg = cfg.apply(f);
        }
        cfg = cfg.apply(flags);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a0 > 0.0 && self.a0.is_finite()) || !(self.mu0 > 0.0 && self.mu0.is_finite()) {
            return Err(Error::invalid("a0 and mu0 must be positive and finite"));
        }
        if self.n == 0 || self.d == 0 || self.r == 0 || self.k == 0 || self.trials == 0 {
            return Err(Error::invalid("n, d, r, k and trials must be positive"));
        }
        if self.strategies.is_empty() {
            return Err(Error::invalid("at least one strategy is required"));
        }
        if self.threshold == ThresholdRule::Uncoded && self.l > 0 {
            return Err(Error::invalid("the uncoded threshold requires L = 0"));
        }
        if self.kdiv_min == 0 {
            return Err(Error::invalid("kdiv-min must be at least 1"));
        }
        Ok(())
    }

    /// Largest `K′` whose single-set threshold fits in `N` under the rule.
    pub fn max_kdiv(&self) -> usize {
        self.threshold.max_set_size(self.l, self.d, self.n)
    }

    /// The `K′` sweep, checked against the division bound.
    pub fn kdiv_range(&self) -> Result<std::ops::RangeInclusive<usize>> {
        let bound = self.max_kdiv();
        if bound == 0 {
            return Err(Error::InfeasibleThreshold {
                threshold: self.threshold.threshold(1, self.l, self.d, self.n),
                workers: self.n,
            });
        }
        let hi = self.kdiv_max.unwrap_or(bound);
        if hi > bound {
            return Err(Error::InfeasibleModel(format!(
                "kdiv-max {hi} exceeds the largest feasible division count {bound}"
            )));
        }
        if self.kdiv_min > hi {
            return Err(Error::invalid(format!(
                "kdiv-min {} is above kdiv-max {hi}",
                self.kdiv_min
            )));
        }
        Ok(self.kdiv_min..=hi)
    }

    pub fn delay(&self) -> Result<DelayModel> {
        DelayModel::new(self.mu0, self.a0, 1, self.mode)
    }

    /// Optimizer model at `K = k` with per-subtask parameters scaled by `K`.
    pub fn optim_model(&self) -> Result<OptimModel> {
        let k = self.k as f64;
        OptimModel::new(
            self.n,
            self.k,
            self.l,
            self.d,
            self.r,
            k * self.mu0,
            self.a0 / k,
            self.cancellation,
        )?
        .with_threshold(self.threshold)
    }

    fn sweep_spec(&self) -> Result<SweepSpec> {
        Ok(SweepSpec {
            workers: self.n,
            colluders: self.l,
            degree: self.d,
            sets: self.r,
            cancellation: self.cancellation,
            threshold_rule: self.threshold,
            delay: self.delay()?,
        })
    }
}

/// Process exit code for a command error: 2 for configurations that cannot
/// run, 1 for everything else.
pub fn exit_code(err: &Error) -> u8 {
    if err.is_infeasible() || matches!(err, Error::InvalidArgument(_)) {
        2
    } else {
        1
    }
}

/// Writes to the file named by `out`, or to standard output for `-`/absent.
pub fn emit(out: Option<&str>, text: &str) -> std::io::Result<()> {
    use std::io::Write;
    match out {
        None | Some("-") => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()
        }
        Some(path) => std::fs::write(path, text),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeRow {
    pub method: String,
    pub set_sizes: Vec<f64>,
    pub objective_s: f64,
    pub iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeReport {
    pub rows: Vec<OptimizeRow>,
}

impl OptimizeReport {
    pub fn row(&self, method: &str) -> Option<&OptimizeRow> {
        self.rows.iter().find(|r| r.method == method)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("method,set_sizes,objective_s,iterations\n");
        for row in &self.rows {
            let sizes: Vec<String> = row
                .set_sizes
                .iter()
                .map(|&x| {
                    if x.fract() == 0.0 {
                        format!("{x}")
                    } else {
                        format!("{x:.4}")
                    }
                })
                .collect();
            let iters = row.iterations.map_or(String::new(), |i| i.to_string());
            let _ = writeln!(
                s,
                "{},{},{:.9},{}",
                row.method,
                sizes.join(" "),
                row.objective_s,
                iters
            );
        }
        s
    }
}

/// Relaxed optimum, its rounding, MVD, and brute force when small enough.
pub fn cmd_optimize(cfg: &ExperimentConfig) -> Result<OptimizeReport> {
    let model = cfg.optim_model()?;
    model.check_feasible()?;
    let mut rows = Vec::new();
    let start = match partopt::solve_relaxed(&model) {
        Ok(relaxed) => {
            rows.push(OptimizeRow {
                method: "relaxed".into(),
                set_sizes: relaxed.real_sizes.clone(),
                objective_s: relaxed.z_star,
                iterations: None,
            });
            partopt::round_and_repair(&relaxed.real_sizes, model.subtasks, &model)?
        }
        Err(_) => {
            let even = vec![model.subtasks as f64 / model.sets as f64; model.sets];
            partopt::round_and_repair(&even, model.subtasks, &model)?
        }
    };
    let rounded_times: Vec<f64> = start
        .iter()
        .enumerate()
        .map(|(i, &k)| model.set_time(k, i).unwrap_or(f64::INFINITY))
        .collect();
    rows.push(OptimizeRow {
        method: "rounded".into(),
        set_sizes: start.iter().map(|&k| k as f64).collect(),
        objective_s: rounded_times
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max),
        iterations: None,
    });
    let mvd = partopt::mvd(&model, &start)?;
    rows.push(OptimizeRow {
        method: "mvd".into(),
        set_sizes: mvd.set_sizes.iter().map(|&k| k as f64).collect(),
        objective_s: mvd.objective,
        iterations: Some(mvd.iterations),
    });
    if partopt::composition_count(model.sets, model.subtasks, model.set_cap())
        <= OPTIMIZE_BRUTE_FORCE_LIMIT
    {
        let bf = partopt::brute_force(&model)?;
        rows.push(OptimizeRow {
            method: "brute-force".into(),
            set_sizes: bf.set_sizes.iter().map(|&k| k as f64).collect(),
            objective_s: bf.objective,
            iterations: None,
        });
    }
    Ok(OptimizeReport { rows })
}

/// One CSV row of `simulate`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRow {
    pub strategy: StrategyKind,
    pub n: usize,
    pub l: usize,
    pub d: usize,
    pub r: usize,
    pub kdiv: usize,
    pub trials: usize,
    pub seed: u64,
    pub cancellation: bool,
    pub mean_delay_s: f64,
    pub stderr_s: f64,
    pub min_delay_s: f64,
}

/// One row per strategy and feasible `K′` in the sweep.
pub fn cmd_simulate(cfg: &ExperimentConfig) -> Result<Vec<SimRow>> {
    let range = cfg.kdiv_range()?;
    let spec = cfg.sweep_spec()?;
    let mut rows = Vec::new();
    for &kind in &cfg.strategies {
        if kind == StrategyKind::LccMmc && cfg.l > 0 {
            return Err(Error::invalid(
                "lcc-mmc cannot preserve privacy; it requires L = 0",
            ));
        }
        for point in stragsim::sweep(kind, &spec, range.clone(), cfg.trials, cfg.seed)? {
            rows.push(SimRow {
                strategy: kind,
                n: cfg.n,
                l: cfg.l,
                d: cfg.d,
                r: cfg.r,
                kdiv: point.kprime,
                trials: cfg.trials,
                seed: cfg.seed,
                cancellation: point.config.cancellation,
                mean_delay_s: point.outcome.mean,
                stderr_s: point.outcome.stderr,
                min_delay_s: point.outcome.min,
            });
        }
    }
    Ok(rows)
}

pub fn simulation_csv(rows: &[SimRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{:.9},{:.9},{:.9}",
            r.strategy,
            r.n,
            r.l,
            r.d,
            r.r,
            r.kdiv,
            r.trials,
            r.seed,
            r.cancellation,
            r.mean_delay_s,
            r.stderr_s,
            r.min_delay_s
        );
    }
    s
}

/// Size and step settings for the regression demo.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegressionSettings {
    /// Samples `p`; split into `K` row blocks (must be a multiple of `K`).
    pub rows: usize,
    /// Features `q`.
    pub cols: usize,
    pub iterations: usize,
    pub learning_rate: f64,
}

impl Default for RegressionSettings {
    fn default() -> Self {
        Self {
            rows: 240,
            cols: 8,
            iterations: 25,
            learning_rate: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoReport {
    pub set_sizes: Vec<usize>,
    pub iterations: usize,
    /// Largest relative error of a coded gradient against the direct one.
    pub max_gradient_deviation: f64,
    /// Same for the `L = 0` repetition variant, when it fits.
    pub uncoded_max_gradient_deviation: Option<f64>,
    pub initial_loss: f64,
    pub final_loss: f64,
    pub weights: Vec<f64>,
}

impl DemoReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "set sizes                {:?}", self.set_sizes);
        let _ = writeln!(s, "iterations               {}", self.iterations);
        let _ = writeln!(
            s,
            "max gradient deviation   {:.3e}",
            self.max_gradient_deviation
        );
        match self.uncoded_max_gradient_deviation {
            Some(v) => {
                let _ = writeln!(s, "uncoded (L=0) deviation  {v:.3e}");
            }
            None => {
                let _ = writeln!(s, "uncoded (L=0) deviation  n/a");
            }
        }
        let _ = writeln!(
            s,
            "loss                     {:.6} -> {:.6}",
            self.initial_loss, self.final_loss
        );
        s
    }
}

/// Linear regression by gradient descent where `Σ_k D_kᵀ D_k w` is computed
/// through the codec on simulated workers.
pub fn cmd_demo(cfg: &ExperimentConfig) -> Result<DemoReport> {
    let s = cfg.demo;
    if s.rows == 0 || s.cols == 0 || s.rows > 512 || s.cols > 32 {
        return Err(Error::invalid(
            "demo needs 1 ≤ rows ≤ 512 and 1 ≤ cols ≤ 32",
        ));
    }
    if !s.rows.is_multiple_of(cfg.k) {
        return Err(Error::invalid(format!(
            "demo rows ({}) must be a multiple of K = {}",
            s.rows, cfg.k
        )));
    }
    if cfg.d != 2 {
        return Err(Error::invalid(
            "the regression gradient DᵀD·w has degree d = 2",
        ));
    }
    let model = cfg.optim_model()?.with_threshold(ThresholdRule::Accurate)?;
    let plan = PartitionPlan::new(cfg.k, partopt::optimize(&model)?.set_sizes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let x = MatrixBlock::random_uniform(s.rows, s.cols, -1.0, 1.0, &mut rng);
    let truth = MatrixBlock::random_uniform(s.cols, 1, -1.0, 1.0, &mut rng);
    let noise = MatrixBlock::random_uniform(s.rows, 1, -0.05, 0.05, &mut rng);
    let y = x.matmul(&truth)?.add(&noise)?;
    let block_rows = s.rows / cfg.k;
    let blocks: Vec<MatrixBlock> = (0..cfg.k)
        .map(|b| MatrixBlock::from_fn(block_rows, s.cols, |i, j| x.get(b * block_rows + i, j)))
        .collect();
    let sets = plan.split(&blocks)?;
    let xty = x.transpose().matmul(&y)?;

    let coded: Vec<CodecContext> = plan
        .set_sizes()
        .iter()
        .enumerate()
        .map(|(i, &k)| CodecContext::new(i, k, cfg.l, cfg.n, cfg.d, CodingMode::Accurate))
        .collect::<Result<_>>()?;
    let uncoded: Option<Vec<CodecContext>> = plan
        .set_sizes()
        .iter()
        .enumerate()
        .map(|(i, &k)| CodecContext::new(i, k, 0, cfg.n, cfg.d, CodingMode::Uncoded))
        .collect::<Result<_>>()
        .ok();

    let mut w = MatrixBlock::zeros(s.cols, 1);
    let loss = |w: &MatrixBlock| -> Result<f64> {
        let r = x.matmul(w)?.sub(&y)?;
        Ok(r.frobenius_norm().powi(2) / (2.0 * s.rows as f64))
    };
    let initial_loss = loss(&w)?;
    let mut max_dev: f64 = 0.0;
    let mut max_dev_uncoded: Option<f64> = uncoded.as_ref().map(|_| 0.0);

    for _ in 0..s.iterations {
        let f = |d: &MatrixBlock| {
            d.transpose()
                .matmul(d)
                .and_then(|g| g.matmul(&w))
                .expect("shapes agree")
        };
        let direct = blocks
            .iter()
            .map(&f)
            .reduce(|a, b| a.add(&b).expect("same shape"))
            .expect("K ≥ 1");
        let via = |contexts: &[CodecContext],
                   mode: DecodeMode,
                   rng: &mut ChaCha8Rng|
         -> Result<MatrixBlock> {
            let mut total = MatrixBlock::zeros(s.cols, 1);
            for (ctx, data) in contexts.iter().zip(&sets) {
                let shares = codec::encode_set(ctx, data, rng)?;
                let mut results: Vec<ReturnedResult> = shares
                    .iter()
                    .map(|sh| ReturnedResult::compute(sh, f))
                    .collect();
                // Workers answer in a random order; the decoder uses the earliest.
                results.shuffle(rng);
                results.truncate(codec::recovery_threshold(ctx));
                for v in codec::decode_set(ctx, &results, mode)? {
                    total = total.add(&v)?;
                }
            }
            Ok(total)
        };
        let coded_sum = via(&coded, DecodeMode::Accurate, &mut rng)?;
        max_dev = max_dev.max(coded_sum.relative_error(&direct));
        if let (Some(ctxs), Some(dev)) = (uncoded.as_ref(), max_dev_uncoded.as_mut()) {
            let sum = via(ctxs, DecodeMode::Uncoded, &mut rng)?;
            *dev = dev.max(sum.relative_error(&direct));
        }
        let grad = coded_sum.sub(&xty)?.scale(1.0 / s.rows as f64);
        w = w.sub(&grad.scale(s.learning_rate))?;
    }
    Ok(DemoReport {
        set_sizes: plan.set_sizes().to_vec(),
        iterations: s.iterations,
        max_gradient_deviation: max_dev,
        uncoded_max_gradient_deviation: max_dev_uncoded,
        initial_loss,
        final_loss: loss(&w)?,
        weights: w.into_entries(),
    })
}

/// One line of the communication/operation cost comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostRow {
    pub metric: &'static str,
    pub apcc_formula: &'static str,
    pub apcc: f64,
    pub lcc_formula: &'static str,
    pub lcc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostReport {
    pub k: usize,
    pub kprime: usize,
    pub rows: Vec<CostRow>,
}

impl CostReport {
    pub fn row(&self, metric: &str) -> Option<&CostRow> {
        self.rows.iter().find(|r| r.metric == metric)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("metric,apcc_formula,apcc,lcc_formula,lcc\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                r.metric, r.apcc_formula, r.apcc, r.lcc_formula, r.lcc
            );
        }
        s
    }
}

/// Input, feedback and encode/decode counts for APCC at `K` against LCC at
/// `K′ = K/r`. Data sizes are in units of the whole input `x`.
pub fn cmd_report_costs(cfg: &ExperimentConfig) -> Result<CostReport> {
    if !cfg.k.is_multiple_of(cfg.r) {
        return Err(Error::invalid(format!(
            "K = {} must be a multiple of r = {} for K′ = K/r",
            cfg.k, cfg.r
        )));
    }
    let (k, r, n, l, d) = (
        cfg.k as f64,
        cfg.r as f64,
        cfg.n as f64,
        cfg.l as f64,
        cfg.d as f64,
    );
    let kp = k / r;
    let rows = vec![
        CostRow {
            metric: "input_data",
            apcc_formula: "x*r*N/K",
            apcc: r * n / k,
            lcc_formula: "x*N/K'",
            lcc: n / kp,
        },
        CostRow {
            metric: "feedback_results",
            apcc_formula: "d(K+rL-r)+r",
            apcc: d * (k + r * l - r) + r,
            lcc_formula: "r*(d(K'+L-1)+1)",
            lcc: r * (d * (kp + l - 1.0) + 1.0),
        },
        CostRow {
            metric: "encode_ops",
            apcc_formula: "N*r",
            apcc: n * r,
            lcc_formula: "N",
            lcc: n,
        },
        CostRow {
            metric: "decode_ops",
            apcc_formula: "K",
            apcc: k,
            lcc_formula: "K'",
            lcc: kp,
        },
    ];
    Ok(CostReport {
        k: cfg.k,
        kprime: cfg.k / cfg.r,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_override_defaults() {
        let file = ConfigOverrides::from_json(r#"{"n": 40, "r": 4, "mode": "iid"}"#).unwrap();
        let flags = ConfigOverrides {
            r: Some(2),
            ..Default::default()
        };
        let cfg = ExperimentConfig::resolve(Some(file), flags).unwrap();
        assert_eq!(
            (cfg.n, cfg.r, cfg.mode, cfg.d),
            (40, 2, SamplingMode::Iid, 2)
        );
        assert!(ConfigOverrides::from_json(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn single_set_optimize_agrees_everywhere() {
        let cfg = ExperimentConfig {
            r: 1,
            k: 4,
            ..Default::default()
        };
        let rep = cmd_optimize(&cfg).unwrap();
        let objectives: Vec<f64> = rep.rows.iter().map(|r| r.objective_s).collect();
        assert_eq!(rep.rows.len(), 4);
        for o in &objectives {
            assert!((o - objectives[0]).abs() <= 1e-12 * objectives[0]);
        }
    }

    #[test]
    fn optimize_running_example() {
        let cfg = ExperimentConfig {
            n: 20,
            ..Default::default()
        };
        let rep = cmd_optimize(&cfg).unwrap();
        assert_eq!(
            rep.row("mvd").unwrap().objective_s,
            rep.row("brute-force").unwrap().objective_s
        );
        let over = ExperimentConfig { k: 40, ..cfg };
        assert_eq!(exit_code(&cmd_optimize(&over).unwrap_err()), 2);
    }

    #[test]
    fn cost_report_examples() {
        let rep = cmd_report_costs(&ExperimentConfig::default()).unwrap();
        let fb = rep.row("feedback_results").unwrap();
        assert_eq!((fb.apcc, fb.lcc), (27.0, 27.0));
        let enc = rep.row("encode_ops").unwrap();
        assert_eq!((enc.apcc, enc.lcc), (30.0, 10.0));
        let input = rep.row("input_data").unwrap();
        assert_eq!(input.apcc, input.lcc);

        let single = cmd_report_costs(&ExperimentConfig {
            r: 1,
            k: 4,
            ..Default::default()
        })
        .unwrap();
        assert!(single.rows.iter().all(|r| r.apcc == r.lcc));
    }

    #[test]
    fn demo_gradients_match_direct() {
        let rep = cmd_demo(&ExperimentConfig::default()).unwrap();
        assert!(
            rep.max_gradient_deviation <= 1e-6,
            "{}",
            rep.max_gradient_deviation
        );
        assert!(rep.uncoded_max_gradient_deviation.unwrap() <= 1e-6);
        assert!(rep.final_loss < rep.initial_loss);
    }

    #[test]
    fn demo_zero_step_keeps_weights() {
        let cfg = ExperimentConfig {
            demo: RegressionSettings {
                iterations: 1,
                learning_rate: 0.0,
                ..Default::default()
            },
            ..Default::default()
        };
        let rep = cmd_demo(&cfg).unwrap();
        assert!(rep.weights.iter().all(|&w| w == 0.0));
        assert_eq!(rep.initial_loss, rep.final_loss);
    }

    #[test]
    fn csv_header_is_always_present() {
        assert_eq!(simulation_csv(&[]), format!("{CSV_HEADER}\n"));
    }
}
