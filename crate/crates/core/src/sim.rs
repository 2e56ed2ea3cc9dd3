//! Monte Carlo estimation of expected cost and grid search for the
//! adversarial worst case.
//!
//! Monte Carlo draws are split into fixed-size chunks. Chunk `i` uses its
//! own ChaCha stream `i` under the run seed, and chunk statistics are merged
//! in index order, so an estimate depends only on `(seed, n)` and never on
//! how chunks are scheduled.

use alloc::borrow::Cow;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::bounds::{self, BoundReport};
use crate::entropy::Interval;
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::problem::{cost_of, scalar_cost, ProblemParams, Realization};
use crate::strategies::{self, LinearOptimum, Strategy};
use crate::SQRT_3;

/// Confidence half-width in units of the standard error.
pub const CI_MULTIPLIER: f64 = 3.0;
pub const CHUNK_SAMPLES: usize = 4096;
pub const MIN_SAMPLES: usize = 100;
pub const DEFAULT_SAMPLES: usize = 100_000;

pub const DEFAULT_SEARCH_GRID: usize = 2001;
/// Relative distance kept from the open noise boundary `±√3`.
pub const DEFAULT_Z_MARGIN: f64 = 1e-12;
/// An endpoint maximum must beat the interior maximum by this relative
/// amount to count as boundary attainment.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Sample mean of the total cost with a `3·stderr` half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub ci_halfwidth: f64,
    pub std_dev: f64,
    pub n: usize,
    pub seed: u64,
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChunkStats {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl ChunkStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Pooled statistics of `self` followed by `other`.
    pub fn merge(self, other: ChunkStats) -> ChunkStats {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let (na, nb) = (self.count as f64, other.count as f64);
        let delta = other.mean - self.mean;
        ChunkStats {
            count,
            mean: self.mean + delta * nb / count as f64,
            m2: self.m2 + other.m2 + delta * delta * na * nb / count as f64,
        }
    }
}

/// Draws `x₀ ~ N(0, σ₀²)` and `z` from the noise model, coordinate by
/// coordinate, from one chunk's stream.
pub struct RealizationSampler<'a> {
    sigma0: f64,
    noise: &'a NoiseModel,
    rng: ChaCha12Rng,
}

impl<'a> RealizationSampler<'a> {
    pub fn new(params: &ProblemParams, noise: &'a NoiseModel, seed: u64, chunk: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(chunk);
        RealizationSampler {
            sigma0: params.sigma0(),
            noise,
            rng,
        }
    }

    /// Overwrites `realization` with the next draw.
    pub fn fill(&mut self, realization: &mut Realization) {
        for (x0, z) in realization.x0.iter_mut().zip(realization.z.iter_mut()) {
            let g: f64 = StandardNormal.sample(&mut self.rng);
            *x0 = self.sigma0 * g;
            *z = self.noise.sample(&mut self.rng);
        }
    }
}

pub fn chunk_count(n: usize) -> usize {
    n.div_ceil(CHUNK_SAMPLES)
}

fn chunk_len(n: usize, chunk: usize) -> usize {
    CHUNK_SAMPLES.min(n - chunk * CHUNK_SAMPLES)
}

fn check_samples(n: usize) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(Error::invalid(alloc::format!(
            "Monte Carlo needs at least {MIN_SAMPLES} samples, got {n}"
        )));
    }
    Ok(())
}

/// Statistics of the total cost over chunk `chunk` of an `n`-sample run.
pub fn monte_carlo_chunk(
    params: &ProblemParams,
    strategy: &Strategy,
    noise: &NoiseModel,
    n: usize,
    seed: u64,
    chunk: usize,
) -> ChunkStats {
    let mut sampler = RealizationSampler::new(params, noise, seed, chunk as u64);
    let mut buf = Realization::zeros(params.m());
    let mut stats = ChunkStats::default();
    for _ in 0..chunk_len(n, chunk) {
        sampler.fill(&mut buf);
        stats.push(cost_of(params.k(), strategy, &buf.x0, &buf.z).total);
    }
    stats
}

/// Merges per-chunk statistics given in chunk order.
pub fn estimate_from_chunks<I>(chunks: I, n: usize, seed: u64) -> McEstimate
where
    I: IntoIterator<Item = ChunkStats>,
{
    let stats = chunks.into_iter().fold(ChunkStats::default(), ChunkStats::merge);
    let std_dev = if stats.count > 1 {
        libm::sqrt(stats.m2 / (stats.count - 1) as f64)
    } else {
        0.0
    };
    McEstimate {
        mean: stats.mean,
        ci_halfwidth: CI_MULTIPLIER * std_dev / libm::sqrt(n as f64),
        std_dev,
        n,
        seed,
    }
}

pub fn monte_carlo_cost(
    params: &ProblemParams,
    strategy: &Strategy,
    noise: &NoiseModel,
    n: usize,
    seed: u64,
) -> Result<McEstimate> {
    check_samples(n)?;
    let chunks = (0..chunk_count(n)).map(|c| monte_carlo_chunk(params, strategy, noise, n, seed, c));
    Ok(estimate_from_chunks(chunks, n, seed))
}

/// Largest cost found by the adversarial search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstCase {
    pub value: f64,
    pub at_x0: f64,
    pub at_z: f64,
    /// The maximum over the two range endpoints exceeds the interior maximum,
    /// so the true supremum may lie outside the box (or be infinite).
    pub on_x0_boundary: bool,
}

/// `±10·max(σ₀, 1)·s`, where `s` is the quantizer spacing or `2√3`.
pub fn default_x0_range(sigma0: f64, strategy: &Strategy) -> Interval {
    let scale = strategy.lattice().map_or(2.0 * SQRT_3, |(spacing, _)| spacing);
    Interval::symmetric(10.0 * sigma0.max(1.0) * scale).expect("positive half-width")
}

/// Candidate initial states: `grid` evenly spaced points plus, for a
/// quantizer, every bin edge inside the range.
pub fn x0_search_points(strategy: &Strategy, range: Interval, grid: usize) -> Vec<f64> {
    let mut points: Vec<f64> = range.linspace(grid).collect();
    if let Some((spacing, offset)) = strategy.lattice() {
        let first = libm::ceil((range.lo() - offset) / spacing - 0.5);
        let last = libm::floor((range.hi() - offset) / spacing - 0.5);
        let mut j = first;
        while j <= last {
            let edge = offset + spacing * (j + 0.5);
            if edge >= range.lo() && edge <= range.hi() {
                points.push(edge);
            }
            j += 1.0;
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

/// `grid` noise values from `−√3(1 − margin)` to `√3(1 − margin)`.
pub fn z_search_points(grid: usize, z_margin: f64) -> Vec<f64> {
    let edge = SQRT_3 * (1.0 - z_margin);
    Interval::symmetric(edge)
        .expect("margin < 1")
        .linspace(grid)
        .collect()
}

/// Exhaustive search of `J(x₀, z)` over `x0_range × (−√3, √3)`.
pub fn worst_case_cost(
    params: &ProblemParams,
    strategy: &Strategy,
    x0_range: Interval,
    grid: usize,
    z_margin: f64,
) -> Result<WorstCase> {
    if grid < 3 {
        return Err(Error::invalid("search grid needs at least 3 points"));
    }
    if !(z_margin > 0.0 && z_margin < 1.0) {
        return Err(Error::invalid("z margin must lie in (0, 1)"));
    }
    let xs = x0_search_points(strategy, x0_range, grid);
    let zs = z_search_points(grid, z_margin);
    let k = params.k();

    let mut best = WorstCase {
        value: f64::NEG_INFINITY,
        at_x0: xs[0],
        at_z: zs[0],
        on_x0_boundary: false,
    };
    let mut endpoint_max = f64::NEG_INFINITY;
    let mut interior_max = f64::NEG_INFINITY;
    for (i, &x0) in xs.iter().enumerate() {
        let mut row_max = f64::NEG_INFINITY;
        for &z in &zs {
            let cost = scalar_cost(k, strategy, x0, z).total;
            if cost > row_max {
                row_max = cost;
            }
            if cost > best.value {
                best.value = cost;
                best.at_x0 = x0;
                best.at_z = z;
            }
        }
        if i == 0 || i + 1 == xs.len() {
            endpoint_max = endpoint_max.max(row_max);
        } else {
            interior_max = interior_max.max(row_max);
        }
    }
    best.on_x0_boundary =
        endpoint_max > interior_max + BOUNDARY_TOLERANCE * interior_max.abs().max(1.0);
    Ok(best)
}

/// Bounds, the best nonlinear strategy's simulated cost and the optimal
/// linear cost at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub bounds: BoundReport,
    pub mu_bound: f64,
    pub best_label: Cow<'static, str>,
    pub best: McEstimate,
    pub linear: LinearOptimum,
    /// `linear cost / min(simulated best cost, upper bound)`.
    pub linear_ratio: f64,
}

pub fn ratio_report(params: &ProblemParams, noise: &NoiseModel, n: usize, seed: u64) -> Result<RatioReport> {
    ratio_report_with(params, noise, |s| monte_carlo_cost(params, s, noise, n, seed))
}

/// [`ratio_report`] with a caller-supplied Monte Carlo runner.
pub fn ratio_report_with<F>(params: &ProblemParams, noise: &NoiseModel, mut simulate: F) -> Result<RatioReport>
where
    F: FnMut(&Strategy) -> Result<McEstimate>,
{
    let bounds = bounds::bayes_report(params, noise)?;
    let best_strategy = strategies::best_strategy(params, noise);
    let best = simulate(&best_strategy)?;
    let linear = strategies::optimal_linear_cost(params)?;
    let linear_ratio = bounds::bound_ratio(linear.cost, best.mean.min(bounds.upper));
    Ok(RatioReport {
        mu_bound: bounds::mu_bound(noise.half_width(), noise.entropy_bits()),
        bounds,
        best_label: Cow::Owned(best_strategy.label().into()),
        best,
        linear,
        linear_ratio,
    })
}
