//! Multi-threaded wrappers over the sequential core.

use rayon::prelude::*;
use witbench_core::sim::{self, McEstimate, RatioReport};
use witbench_core::{NoiseModel, ProblemParams, Strategy};

use crate::AppError;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "WITBENCH_THREADS";

/// Thread pool sized by `WITBENCH_THREADS`, or rayon's default when unset.
pub fn thread_pool() -> Result<rayon::ThreadPool, AppError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => n,
            _ => return Err(AppError::usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| AppError::usage(format!("cannot start thread pool: {e}")))
}

/// Same result as [`sim::monte_carlo_cost`], with chunks spread over the
/// current rayon pool.
pub fn monte_carlo_cost(
    params: &ProblemParams,
    strategy: &Strategy,
    noise: &NoiseModel,
    n: usize,
    seed: u64,
) -> witbench_core::Result<McEstimate> {
    if n < sim::MIN_SAMPLES {
        // Let the core produce the canonical error.
        return sim::monte_carlo_cost(params, strategy, noise, n, seed);
    }
    let chunks: Vec<_> = (0..sim::chunk_count(n))
        .into_par_iter()
        .map(|c| sim::monte_carlo_chunk(params, strategy, noise, n, seed, c))
        .collect();
    Ok(sim::estimate_from_chunks(chunks, n, seed))
}

pub fn ratio_report(
    params: &ProblemParams,
    noise: &NoiseModel,
    n: usize,
    seed: u64,
) -> witbench_core::Result<RatioReport> {
    sim::ratio_report_with(params, noise, |s| monte_carlo_cost(params, s, noise, n, seed))
}
