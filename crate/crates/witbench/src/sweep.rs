//! Grid sweeps with ratio certification.

use rayon::prelude::*;
use witbench_core::bounds::{self, adversarial_report};
use witbench_core::{NoiseModel, ProblemParams, TWO_PI_E};

use crate::config::SweepConfig;
use crate::par;
use crate::table::{Cell, Table};
use crate::AppError;

pub const BAYES_COLUMNS: [&str; 14] = [
    "k",
    "sigma0",
    "noise",
    "m",
    "upper",
    "lower",
    "p_star",
    "ratio",
    "mu_bound",
    "mc_best_mean",
    "mc_best_ci",
    "linear_cost",
    "linear_ratio",
    "winner",
];

pub const ADVERSARIAL_COLUMNS: [&str; 7] = ["k", "upper", "lower", "p_star", "ratio", "ratio_bound", "winner"];

/// Label in the `k` column of the trailing summary row.
pub const SUMMARY_LABEL: &str = "summary";

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub table: Table,
    pub max_ratio: f64,
    pub ratio_bound: f64,
    pub certified: bool,
}

fn verdict(certified: bool) -> &'static str {
    if certified {
        "certified"
    } else {
        "violated"
    }
}

/// Evaluates every `(k, σ₀)` pair (k outer, σ₀ inner) on the current rayon
/// pool. Rows come back in grid order.
pub fn run_bayes(cfg: &SweepConfig, noise: &NoiseModel) -> Result<SweepOutcome, AppError> {
    let (ks, sigmas) = cfg.grids()?;
    let points: Vec<(f64, f64)> = ks.iter().flat_map(|&k| sigmas.iter().map(move |&s| (k, s))).collect();
    let reports = points
        .par_iter()
        .map(|&(k, s)| {
            let params = ProblemParams::new(k, s, cfg.m)?;
            par::ratio_report(&params, noise, cfg.n, cfg.seed)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mu = bounds::mu_bound(noise.half_width(), noise.entropy_bits());
    let mut table = Table::new(BAYES_COLUMNS.to_vec());
    let mut max_ratio = 0.0f64;
    let mut max_linear_ratio = 0.0f64;
    for (&(k, s), r) in points.iter().zip(&reports) {
        max_ratio = max_ratio.max(r.bounds.ratio);
        max_linear_ratio = max_linear_ratio.max(r.linear_ratio);
        table.push(vec![
            k.into(),
            s.into(),
            noise.label().into(),
            cfg.m.into(),
            r.bounds.upper.into(),
            r.bounds.lower.into(),
            r.bounds.p_star.into(),
            r.bounds.ratio.into(),
            r.mu_bound.into(),
            r.best.mean.into(),
            r.best.ci_halfwidth.into(),
            r.linear.cost.into(),
            r.linear_ratio.into(),
            r.bounds.winning_strategy.as_ref().into(),
        ]);
    }
    let certified = max_ratio <= mu;
    table.push(vec![
        SUMMARY_LABEL.into(),
        Cell::Empty,
        noise.label().into(),
        cfg.m.into(),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        max_ratio.into(),
        mu.into(),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        max_linear_ratio.into(),
        verdict(certified).into(),
    ]);
    Ok(SweepOutcome {
        table,
        max_ratio,
        ratio_bound: mu,
        certified,
    })
}

/// Adversarial bounds over the `k` grid; `σ₀` plays no role.
pub fn run_adversarial(cfg: &SweepConfig) -> Result<SweepOutcome, AppError> {
    let (ks, _) = cfg.grids()?;
    let reports = ks
        .par_iter()
        .map(|&k| adversarial_report(k))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new(ADVERSARIAL_COLUMNS.to_vec());
    let mut max_ratio = 0.0f64;
    for (&k, r) in ks.iter().zip(&reports) {
        max_ratio = max_ratio.max(r.ratio);
        table.push(vec![
            k.into(),
            r.upper.into(),
            r.lower.into(),
            r.p_star.into(),
            r.ratio.into(),
            TWO_PI_E.into(),
            r.winning_strategy.as_ref().into(),
        ]);
    }
    let certified = max_ratio <= TWO_PI_E;
    table.push(vec![
        SUMMARY_LABEL.into(),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        max_ratio.into(),
        TWO_PI_E.into(),
        verdict(certified).into(),
    ]);
    Ok(SweepOutcome {
        table,
        max_ratio,
        ratio_bound: TWO_PI_E,
        certified,
    })
}
