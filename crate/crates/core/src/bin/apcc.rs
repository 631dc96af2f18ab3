use std::path::PathBuf;
use std::process::ExitCode;

use apcc::bench::{self, ConfigOverrides, ExperimentConfig};
use apcc::stragsim::{SamplingMode, StrategyKind};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "apcc",
    version,
    about = "Adaptive privacy-preserving coded computing experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare relaxed, MVD and brute-force set sizes for one K.
    Optimize(Common),
    /// Sweep K′ for each strategy and write one CSV row per point.
    Simulate(Common),
    /// Coded linear-regression gradients against direct computation.
    Demo(Common),
    /// Communication and encode/decode counts of APCC against LCC.
    ReportCosts(Common),
}

#[derive(Args)]
struct Common {
    /// JSON file of settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Workers N.
    #[arg(long)]
    n: Option<usize>,
    /// Colluding workers L.
    #[arg(long)]
    l: Option<usize>,
    /// Polynomial degree d.
    #[arg(long)]
    d: Option<usize>,
    /// Partitioned sets r.
    #[arg(long)]
    r: Option<usize>,
    /// Total subtasks K.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    kdiv_min: Option<usize>,
    #[arg(long)]
    kdiv_max: Option<usize>,
    /// Entire-task delay shift in seconds.
    #[arg(long)]
    a0: Option<f64>,
    /// Entire-task delay rate in 1/s.
    #[arg(long)]
    mu0: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, overrides_with = "no_cancel")]
    cancel: bool,
    #[arg(long, overrides_with = "cancel")]
    no_cancel: bool,
    /// apcc, lcc, lcc-mmc or bacc; repeat for several.
    #[arg(long = "strategy", value_parser = parse_strategy)]
    strategies: Vec<StrategyKind>,
    /// persistent or iid.
    #[arg(long, value_parser = parse_mode)]
    mode: Option<SamplingMode>,
    /// Output file, `-` for standard output.
    #[arg(long)]
    out: Option<String>,
}

fn parse_strategy(s: &str) -> Result<StrategyKind, String> {
    s.parse().map_err(|e: apcc::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<SamplingMode, String> {
    s.parse().map_err(|e: apcc::Error| e.to_string())
}

impl Common {
    fn resolve(&self) -> apcc::Result<ExperimentConfig> {
        let file = self
            .config
            .as_deref()
            .map(ConfigOverrides::from_file)
            .transpose()?;
        let flags = ConfigOverrides {
            strategies: (!self.strategies.is_empty()).then(|| self.strategies.clone()),
            n: self.n,
            l: self.l,
            d: self.d,
            r: self.r,
            k: self.k,
            kdiv_min: self.kdiv_min,
            kdiv_max: self.kdiv_max,
            a0: self.a0,
            mu0: self.mu0,
            trials: self.trials,
            seed: self.seed,
            cancellation: if self.cancel {
                Some(true)
            } else if self.no_cancel {
                Some(false)
            } else {
                None
            },
            mode: self.mode,
            out: self.out.clone(),
            ..Default::default()
        };
        ExperimentConfig::resolve(file, flags)
    }
}

fn run(cli: &Cli) -> apcc::Result<(String, Option<String>)> {
    let (common, render): (&Common, fn(&ExperimentConfig) -> apcc::Result<String>) =
        match &cli.command {
            Command::Optimize(c) => (c, |cfg| Ok(bench::cmd_optimize(cfg)?.to_csv())),
            Command::Simulate(c) => (c, |cfg| {
                Ok(bench::simulation_csv(&bench::cmd_simulate(cfg)?))
            }),
            Command::Demo(c) => (c, |cfg| Ok(bench::cmd_demo(cfg)?.render())),
            Command::ReportCosts(c) => (c, |cfg| Ok(bench::cmd_report_costs(cfg)?.to_csv())),
        };
    let cfg = common.resolve()?;
    Ok((render(&cfg)?, cfg.out.clone()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok((text, out)) => match bench::emit(out.as_deref(), &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("apcc: cannot write output: {e}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("apcc: {e}");
            ExitCode::from(bench::exit_code(&e))
        }
    }
}
