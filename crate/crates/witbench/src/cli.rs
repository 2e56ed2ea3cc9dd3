//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use witbench_core::bounds::{self, adversarial_report, bayes_report};
use witbench_core::sim::{self, DEFAULT_SAMPLES, DEFAULT_SEARCH_GRID, DEFAULT_Z_MARGIN};
use witbench_core::strategies::{
    best_strategy, linear_strategy, optimal_linear_cost, quantizer_strategy, zero_forcing_strategy,
    zero_input_passthrough, zero_input_strategy,
};
use witbench_core::{Interval, LinearStrategySpec, NoiseModel, ProblemParams, Strategy, SQRT_3};

use crate::config::{GridSpec, Model, NoiseSpec, SweepConfig};
use crate::table::{Format, Table};
use crate::{par, sweep, AppError};

#[derive(Debug, Parser)]
#[command(name = "witbench", version, about = "Bounded-noise Witsenhausen counterexample bench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Upper and lower bounds on the optimal average cost at one point.
    Bounds(BoundsArgs),
    /// Monte Carlo cost of one strategy.
    Simulate(SimulateArgs),
    /// Worst-case cost of one strategy over initial states and noise.
    Adversarial(AdversarialArgs),
    /// Bound ratios over a (k, sigma0) grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file; `-` or absent for stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct PointArgs {
    #[arg(long, allow_negative_numbers = true)]
    k: f64,
    #[arg(long, allow_negative_numbers = true)]
    sigma0: f64,
    /// uniform, triangular or file:PATH
    #[arg(long, default_value = "uniform")]
    noise: NoiseSpec,
    #[arg(long, default_value_t = 1)]
    m: usize,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[command(flatten)]
    point: PointArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    point: PointArgs,
    /// quantizer, zero-input, zero-forcing, zero-input-passthrough, linear,
    /// optimal-linear or best
    #[arg(long)]
    strategy: String,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct AdversarialArgs {
    #[arg(long, allow_negative_numbers = true)]
    k: f64,
    /// quantizer, zero-input-passthrough, zero-forcing, linear or best
    #[arg(long)]
    strategy: String,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// `lo:hi` or `lo,hi`; defaults to ten quantizer bins (or 10·2√3) each side.
    #[arg(long, allow_hyphen_values = true)]
    x0_range: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEARCH_GRID)]
    grid: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// JSON file with sweep settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    model: Option<Model>,
    /// `a,b,c` or log range `lo:hi:count`
    #[arg(long)]
    k: Option<GridSpec>,
    #[arg(long)]
    sigma0: Option<GridSpec>,
    #[arg(long)]
    noise: Option<NoiseSpec>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    m: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = par::thread_pool().and_then(|pool| pool.install(|| run(cli.command)));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("witbench: {e}");
            e.exit_code()
        }
    }
}

fn run(command: Command) -> Result<u8, AppError> {
    match command {
        Command::Bounds(a) => cmd_bounds(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Adversarial(a) => cmd_adversarial(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

fn point(p: &PointArgs) -> Result<(ProblemParams, NoiseModel), AppError> {
    let params = ProblemParams::new(p.k, p.sigma0, p.m)?;
    Ok((params, p.noise.resolve()?))
}

fn emit(table: &Table, output: &OutputArgs, format: Format) -> Result<(), AppError> {
    let sink = Sink::open(output.out.as_deref())?;
    sink.write(table, output.format.unwrap_or(format))
}

/// Output destination, opened before any work so a bad path fails fast.
enum Sink {
    Stdout,
    File(PathBuf, File),
}

impl Sink {
    fn open(out: Option<&Path>) -> Result<Sink, AppError> {
        match out {
            None => Ok(Sink::Stdout),
            Some(p) if p == Path::new("-") => Ok(Sink::Stdout),
            Some(path) => {
                let file = File::create(path).map_err(|e| AppError::io(path, e))?;
                Ok(Sink::File(path.to_owned(), file))
            }
        }
    }

    fn write(self, table: &Table, format: Format) -> Result<(), AppError> {
        match self {
            Sink::Stdout => table
                .write(format, io::stdout().lock())
                .map_err(|e| AppError::io(Path::new("<stdout>"), e)),
            Sink::File(path, file) => {
                let mut w = BufWriter::new(file);
                table.write(format, &mut w).map_err(|e| AppError::io(&path, e))?;
                w.flush().map_err(|e| AppError::io(&path, e))
            }
        }
    }
}

fn cmd_bounds(a: BoundsArgs) -> Result<u8, AppError> {
    let (params, noise) = point(&a.point)?;
    let r = bayes_report(&params, &noise)?;
    let mut t = Table::new(vec![
        "k", "sigma0", "noise", "m", "upper", "lower", "p_star", "ratio", "mu_bound", "winner",
    ]);
    t.push(vec![
        params.k().into(),
        params.sigma0().into(),
        noise.label().into(),
        params.m().into(),
        r.upper.into(),
        r.lower.into(),
        r.p_star.into(),
        r.ratio.into(),
        bounds::mu_bound(noise.half_width(), noise.entropy_bits()).into(),
        r.winning_strategy.as_ref().into(),
    ]);
    emit(&t, &a.output, Format::Csv)?;
    Ok(0)
}

fn linear_spec(alpha: Option<f64>, beta: Option<f64>) -> Result<LinearStrategySpec, AppError> {
    match (alpha, beta) {
        (Some(alpha), Some(beta)) if alpha.is_finite() && beta.is_finite() => {
            Ok(LinearStrategySpec { alpha, beta })
        }
        (Some(_), Some(_)) => Err(AppError::usage("--alpha and --beta must be finite")),
        _ => Err(AppError::usage("strategy linear needs --alpha and --beta")),
    }
}

fn bayes_strategy(
    name: &str,
    params: &ProblemParams,
    noise: &NoiseModel,
    alpha: Option<f64>,
    beta: Option<f64>,
) -> Result<Strategy, AppError> {
    Ok(match name {
        "quantizer" => quantizer_strategy(2.0 * noise.half_width())?,
        "zero-input" => zero_input_strategy(params.sigma0(), 1.0)?,
        "zero-forcing" => zero_forcing_strategy(),
        "zero-input-passthrough" => zero_input_passthrough(),
        "linear" => linear_strategy(linear_spec(alpha, beta)?),
        "optimal-linear" => optimal_linear_cost(params)?.strategy(params.sigma0()),
        "best" => best_strategy(params, noise),
        _ => return Err(AppError::usage(format!("unknown strategy {name:?}"))),
    })
}

fn adversarial_strategy(name: &str, k: f64, alpha: Option<f64>, beta: Option<f64>) -> Result<Strategy, AppError> {
    Ok(match name {
        "quantizer" => quantizer_strategy(2.0 * SQRT_3)?,
        "zero-input-passthrough" => zero_input_passthrough(),
        "zero-forcing" => zero_forcing_strategy(),
        "linear" => linear_strategy(linear_spec(alpha, beta)?),
        "best" if k * k <= 1.0 => quantizer_strategy(2.0 * SQRT_3)?,
        "best" => zero_input_passthrough(),
        _ => {
            return Err(AppError::usage(format!(
                "unknown adversarial strategy {name:?}; expected quantizer, zero-input-passthrough, \
                 zero-forcing, linear or best"
            )))
        }
    })
}

fn cmd_simulate(a: SimulateArgs) -> Result<u8, AppError> {
    let (params, noise) = point(&a.point)?;
    let strategy = bayes_strategy(&a.strategy, &params, &noise, a.alpha, a.beta)?;
    let est = par::monte_carlo_cost(&params, &strategy, &noise, a.n, a.seed)?;
    let r = bayes_report(&params, &noise)?;
    let mut t = Table::new(vec![
        "k",
        "sigma0",
        "noise",
        "m",
        "strategy",
        "n",
        "seed",
        "mean",
        "ci_halfwidth",
        "std_dev",
        "lower",
        "upper",
    ]);
    t.push(vec![
        params.k().into(),
        params.sigma0().into(),
        noise.label().into(),
        params.m().into(),
        strategy.label().into(),
        est.n.into(),
        est.seed.into(),
        est.mean.into(),
        est.ci_halfwidth.into(),
        est.std_dev.into(),
        r.lower.into(),
        r.upper.into(),
    ]);
    emit(&t, &a.output, Format::Csv)?;
    Ok(0)
}

fn parse_range(s: &str) -> Result<Interval, AppError> {
    let parts: Vec<&str> = s.split([':', ',']).collect();
    let [lo, hi] = parts[..] else {
        return Err(AppError::usage(format!("bad --x0-range {s:?}; expected lo:hi")));
    };
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|e| AppError::usage(format!("bad --x0-range {s:?}: {e}")))
    };
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(AppError::usage("--x0-range must be finite"));
    }
    Interval::new(lo, hi).map_err(|_| AppError::usage(format!("empty --x0-range {s:?}")))
}

fn cmd_adversarial(a: AdversarialArgs) -> Result<u8, AppError> {
    let params = ProblemParams::scalar(a.k, 1.0)?;
    let strategy = adversarial_strategy(&a.strategy, a.k, a.alpha, a.beta)?;
    let range = match &a.x0_range {
        Some(s) => parse_range(s)?,
        None => sim::default_x0_range(1.0, &strategy),
    };
    let wc = sim::worst_case_cost(&params, &strategy, range, a.grid, DEFAULT_Z_MARGIN)?;
    let r = adversarial_report(a.k)?;
    let mut t = Table::new(vec![
        "k",
        "strategy",
        "x0_lo",
        "x0_hi",
        "grid",
        "worst_case",
        "at_x0",
        "at_z",
        "on_x0_boundary",
        "upper",
        "lower",
    ]);
    t.push(vec![
        a.k.into(),
        strategy.label().into(),
        range.lo().into(),
        range.hi().into(),
        a.grid.into(),
        wc.value.into(),
        wc.at_x0.into(),
        wc.at_z.into(),
        wc.on_x0_boundary.into(),
        r.upper.into(),
        r.lower.into(),
    ]);
    emit(&t, &a.output, Format::Csv)?;
    Ok(0)
}

fn sweep_config(a: &SweepArgs) -> Result<SweepConfig, AppError> {
    let mut cfg = match &a.config {
        Some(path) => SweepConfig::from_json_file(path)?,
        None => SweepConfig::default(),
    };
    if let Some(v) = a.model {
        cfg.model = v;
    }
    if let Some(v) = &a.k {
        cfg.k_grid = v.clone();
    }
    if let Some(v) = &a.sigma0 {
        cfg.sigma0_grid = v.clone();
    }
    if let Some(v) = &a.noise {
        cfg.noise = v.clone();
    }
    if let Some(v) = a.n {
        cfg.n = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.m {
        cfg.m = v;
    }
    if let Some(v) = &a.output.out {
        cfg.out_path = Some(v.clone());
    }
    if let Some(v) = a.output.format {
        cfg.format = v;
    }
    Ok(cfg)
}

fn cmd_sweep(a: SweepArgs) -> Result<u8, AppError> {
    let cfg = sweep_config(&a)?;
    cfg.grids()?;
    let sink = Sink::open(cfg.out_path.as_deref())?;
    let outcome = match cfg.model {
        Model::Bayes => sweep::run_bayes(&cfg, &cfg.noise.resolve()?)?,
        Model::Adversarial => sweep::run_adversarial(&cfg)?,
    };
    sink.write(&outcome.table, cfg.format)?;
    if outcome.certified {
        Ok(0)
    } else {
        eprintln!(
            "witbench: certification failed: max ratio {} exceeds {}",
            outcome.max_ratio, outcome.ratio_bound
        );
        Ok(1)
    }
}
