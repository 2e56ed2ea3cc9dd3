//! Analytic upper and lower bounds on the optimal cost.
//!
//! Bayesian model: the upper bound is the best of three explicit strategies;
//! the lower bound combines the triangle inequality on `E‖·‖²` with the
//! capacity of the `x₁ → y₂` channel and the Gaussian distortion-rate
//! function, which yields
//!
//! ```text
//! J_opt ≥ inf_{P≥0} k²P + ((√κ(P) − √P)⁺)²,
//! κ(P) = σ₀² 2^{2h(Z)} / (2πe ((σ₀ + √P)² + 1)).
//! ```
//!
//! Adversarial model (`|z| < √3`, no prior): the upper bound is
//! `min{3k², 3}` and the lower bound is the `σ₀ → ∞` limit of the Bayesian
//! one with uniform noise, for which `κ → 6/(πe)`.

use alloc::borrow::Cow;

use crate::error::Result;
use crate::minimize::{self, Minimum};
use crate::noise::NoiseModel;
use crate::problem::ProblemParams;
use crate::TWO_PI_E;

/// `6/(πe)`, the adversarial lower-bound kernel.
pub const ADVERSARIAL_KAPPA: f64 = 12.0 / TWO_PI_E;

/// Which strategy attains the Bayesian upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperBoundWinner {
    Quantizer,
    ZeroInput,
    ZeroForcing,
}

impl UpperBoundWinner {
    pub fn label(self) -> &'static str {
        match self {
            UpperBoundWinner::Quantizer => "quantizer",
            UpperBoundWinner::ZeroInput => "zero-input",
            UpperBoundWinner::ZeroForcing => "zero-forcing",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperBound {
    pub bound: f64,
    pub winner: UpperBoundWinner,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound {
    pub bound: f64,
    pub p_star: f64,
}

impl From<Minimum> for LowerBound {
    fn from(m: Minimum) -> Self {
        LowerBound {
            bound: m.value,
            p_star: m.argmin,
        }
    }
}

/// Upper and lower bound for one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub upper: f64,
    pub lower: f64,
    pub p_star: f64,
    pub ratio: f64,
    pub winning_strategy: Cow<'static, str>,
}

/// `upper/lower`, with `0/0 = 1` and `x/0 = ∞`.
pub fn bound_ratio(upper: f64, lower: f64) -> f64 {
    if lower > 0.0 {
        upper / lower
    } else if upper > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

/// The three strategy costs `(k²a², σ₀²/(σ₀²+1), k²σ₀²)`.
pub fn upper_bound_terms(k: f64, sigma0: f64, half_width: f64) -> [f64; 3] {
    let k2 = k * k;
    let s2 = sigma0 * sigma0;
    [k2 * half_width * half_width, s2 / (s2 + 1.0), k2 * s2]
}

/// `min{k²a², σ₀²/(σ₀²+1), k²σ₀²}` and its minimizer.
pub fn upper_bound_bayes(params: &ProblemParams, noise: &NoiseModel) -> UpperBound {
    let terms = upper_bound_terms(params.k(), params.sigma0(), noise.half_width());
    let winners = [
        UpperBoundWinner::Quantizer,
        UpperBoundWinner::ZeroInput,
        UpperBoundWinner::ZeroForcing,
    ];
    let mut best = UpperBound {
        bound: terms[0],
        winner: winners[0],
    };
    for (&bound, &winner) in terms.iter().zip(&winners).skip(1) {
        if bound < best.bound {
            best = UpperBound { bound, winner };
        }
    }
    best
}

/// `κ(P) = σ₀²·2^{2h}/(2πe((σ₀+√P)² + 1))`.
pub fn kappa(p: f64, sigma0: f64, h_bits: f64) -> f64 {
    let spread = sigma0 + libm::sqrt(p);
    sigma0 * sigma0 * libm::exp2(2.0 * h_bits) / (TWO_PI_E * (spread * spread + 1.0))
}

/// `lim_{σ₀→∞} κ(P) = 2^{2h}/(2πe)`, independent of `P`.
pub fn kappa_limit(h_bits: f64) -> f64 {
    libm::exp2(2.0 * h_bits) / TWO_PI_E
}

/// `k²P + ((√κ − √P)⁺)²`.
fn power_tradeoff(k: f64, kappa: f64, p: f64) -> f64 {
    let gap = (libm::sqrt(kappa) - libm::sqrt(p)).max(0.0);
    k * k * p + gap * gap
}

/// The Bayesian lower-bound objective at power `p`.
pub fn lower_bound_objective(k: f64, sigma0: f64, h_bits: f64, p: f64) -> f64 {
    power_tradeoff(k, kappa(p, sigma0, h_bits), p)
}

/// `inf_{P≥0} k²P + ((√κ(P) − √P)⁺)²`.
///
/// Beyond `P = κ(0)` the second term is zero and the objective grows
/// linearly, so the search bracket is `[0, min(2κ(0), max(σ₀², 1))]`.
pub fn lower_bound_bayes(params: &ProblemParams, h_bits: f64) -> Result<LowerBound> {
    let (k, sigma0) = (params.k(), params.sigma0());
    let p_max = (2.0 * kappa(0.0, sigma0, h_bits)).min((sigma0 * sigma0).max(1.0));
    minimize::minimize_over_power(
        |p| lower_bound_objective(k, sigma0, h_bits, p),
        p_max,
        minimize::DEFAULT_GRID_POINTS,
        minimize::DEFAULT_TOLERANCE,
    )
    .map(LowerBound::from)
}

/// Per-dimension bound on `I(X₁; Y₂)` in bits:
/// `½·log₂(2πe((σ₀+√P)² + 1)/2^{2h})`.
pub fn capacity_bound(p: f64, sigma0: f64, h_bits: f64) -> f64 {
    let spread = sigma0 + libm::sqrt(p);
    0.5 * (libm::log2(TWO_PI_E * (spread * spread + 1.0)) - 2.0 * h_bits)
}

/// Distortion-rate function of a Gaussian source, `σ₀²·2^{−2R}`.
pub fn distortion_rate_gaussian(sigma0_sq: f64, rate: f64) -> f64 {
    sigma0_sq * libm::exp2(-2.0 * rate)
}

/// The approximation-ratio constant `200a²/2^{2h}`.
pub fn mu_bound(half_width: f64, h_bits: f64) -> f64 {
    200.0 * half_width * half_width / libm::exp2(2.0 * h_bits)
}

/// `min{3k², 3}`.
pub fn upper_bound_adversarial(k: f64) -> f64 {
    (3.0 * k * k).min(3.0)
}

/// The adversarial lower-bound objective at power `p`.
pub fn adversarial_lower_objective(k: f64, p: f64) -> f64 {
    power_tradeoff(k, ADVERSARIAL_KAPPA, p)
}

/// `inf_{P≥0} k²P + ((√(6/πe) − √P)⁺)²`, searched on `P ∈ [0, 6/(πe)]`.
pub fn lower_bound_adversarial(k: f64) -> Result<LowerBound> {
    minimize::minimize_over_power(
        |p| adversarial_lower_objective(k, p),
        ADVERSARIAL_KAPPA,
        minimize::DEFAULT_GRID_POINTS,
        minimize::DEFAULT_TOLERANCE,
    )
    .map(LowerBound::from)
}

/// Bayesian upper/lower bounds with their ratio.
pub fn bayes_report(params: &ProblemParams, noise: &NoiseModel) -> Result<BoundReport> {
    let upper = upper_bound_bayes(params, noise);
    let lower = lower_bound_bayes(params, noise.entropy_bits())?;
    Ok(BoundReport {
        upper: upper.bound,
        lower: lower.bound,
        p_star: lower.p_star,
        ratio: bound_ratio(upper.bound, lower.bound),
        winning_strategy: Cow::Borrowed(upper.winner.label()),
    })
}

/// Adversarial upper/lower bounds with their ratio. The quantizer wins for
/// `k ≤ 1`, zero-input pass-through above.
pub fn adversarial_report(k: f64) -> Result<BoundReport> {
    let upper = upper_bound_adversarial(k);
    let lower = lower_bound_adversarial(k)?;
    let winner = if k * k <= 1.0 {
        "quantizer"
    } else {
        "zero-input-passthrough"
    };
    Ok(BoundReport {
        upper,
        lower: lower.bound,
        p_star: lower.p_star,
        ratio: bound_ratio(upper, lower.bound),
        winning_strategy: Cow::Borrowed(winner),
    })
}
