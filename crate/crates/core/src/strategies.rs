//! The control strategies: lattice quantizer, zero-input with LLSE,
//! zero-forcing and the linear family.

use alloc::borrow::Cow;
use alloc::format;

use crate::bounds::{self, UpperBoundWinner};
use crate::error::{Error, Result};
use crate::minimize;
use crate::noise::NoiseModel;
use crate::problem::ProblemParams;

/// `u₁ = α·x₀`, `u₂ = β·y₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearStrategySpec {
    pub alpha: f64,
    pub beta: f64,
}

/// The scalar maps of a strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControlLaw {
    /// Lattice `offset + spacing·ℤ`. The first controller moves the state
    /// to the nearest lattice point, the second decodes to the nearest one.
    Quantizer { spacing: f64, offset: f64 },
    Linear(LinearStrategySpec),
}

/// A pair `(γ₁, γ₂)` applied coordinate-wise, with a display label.
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    law: ControlLaw,
    label: Cow<'static, str>,
}

impl Strategy {
    pub fn new(law: ControlLaw, label: impl Into<Cow<'static, str>>) -> Self {
        Strategy {
            law,
            label: label.into(),
        }
    }

    pub fn law(&self) -> ControlLaw {
        self.law
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `(spacing, offset)` when this is a quantizer.
    pub fn lattice(&self) -> Option<(f64, f64)> {
        match self.law {
            ControlLaw::Quantizer { spacing, offset } => Some((spacing, offset)),
            ControlLaw::Linear(_) => None,
        }
    }

    /// First controller: observation `x₀` to input `u₁`.
    #[inline]
    pub fn gamma1(&self, x0: f64) -> f64 {
        match self.law {
            // p − x₀ is exact (Sterbenz) whenever x₀ lies in p's bin, so the
            // resulting state x₀ + u₁ is exactly the lattice point.
            ControlLaw::Quantizer { spacing, offset } => nearest_point(x0, spacing, offset) - x0,
            ControlLaw::Linear(spec) => spec.alpha * x0,
        }
    }

    /// Second controller: observation `y₂` to estimate `u₂`.
    #[inline]
    pub fn gamma2(&self, y2: f64) -> f64 {
        match self.law {
            ControlLaw::Quantizer { spacing, offset } => nearest_point(y2, spacing, offset),
            ControlLaw::Linear(spec) => spec.beta * y2,
        }
    }
}

/// Nearest point of `offset + spacing·ℤ`; ties go to the even index.
#[inline]
fn nearest_point(x: f64, spacing: f64, offset: f64) -> f64 {
    offset + spacing * libm::rint((x - offset) / spacing)
}

pub fn quantizer_strategy(spacing: f64) -> Result<Strategy> {
    quantizer_strategy_with_offset(spacing, 0.0)
}

pub fn quantizer_strategy_with_offset(spacing: f64, offset: f64) -> Result<Strategy> {
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(Error::invalid("quantizer spacing must be finite and > 0"));
    }
    if !offset.is_finite() {
        return Err(Error::invalid("quantizer offset must be finite"));
    }
    Ok(Strategy::new(
        ControlLaw::Quantizer { spacing, offset },
        "quantizer",
    ))
}

/// LLSE coefficient `σ₀²/(σ₀² + σ_z²)`.
pub fn llse_coefficient(sigma0: f64, sigma_z2: f64) -> f64 {
    let s2 = sigma0 * sigma0;
    s2 / (s2 + sigma_z2)
}

/// `γ₁ = 0`, `γ₂` the LLSE estimate of `x₁` from `y₂`.
pub fn zero_input_strategy(sigma0: f64, sigma_z2: f64) -> Result<Strategy> {
    if !(sigma0.is_finite() && sigma0 >= 0.0) {
        return Err(Error::invalid("sigma0 must be finite and >= 0"));
    }
    if !(sigma_z2.is_finite() && sigma_z2 > 0.0) {
        return Err(Error::invalid("noise variance must be finite and > 0"));
    }
    Ok(Strategy::new(
        ControlLaw::Linear(LinearStrategySpec {
            alpha: 0.0,
            beta: llse_coefficient(sigma0, sigma_z2),
        }),
        "zero-input",
    ))
}

/// `γ₁ = 0`, `γ₂(y₂) = y₂`. The adversarial zero-input strategy.
pub fn zero_input_passthrough() -> Strategy {
    Strategy::new(
        ControlLaw::Linear(LinearStrategySpec {
            alpha: 0.0,
            beta: 1.0,
        }),
        "zero-input-passthrough",
    )
}

/// `u₁ = −x₀`, `u₂ = 0`.
pub fn zero_forcing_strategy() -> Strategy {
    Strategy::new(
        ControlLaw::Linear(LinearStrategySpec {
            alpha: -1.0,
            beta: 0.0,
        }),
        "zero-forcing",
    )
}

pub fn linear_strategy(spec: LinearStrategySpec) -> Strategy {
    Strategy::new(
        ControlLaw::Linear(spec),
        format!("linear({},{})", spec.alpha, spec.beta),
    )
}

/// Expected cost of the best linear strategy spending power `p`:
/// `k²P + t²/(t² + 1)` with `t = (σ₀ − √P)⁺`.
pub fn linear_cost_at_power(k: f64, sigma0: f64, p: f64) -> f64 {
    let t = (sigma0 - libm::sqrt(p)).max(0.0);
    let t2 = t * t;
    k * k * p + t2 / (t2 + 1.0)
}

/// Minimizer of the linear cost over the input power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearOptimum {
    pub cost: f64,
    pub p_star: f64,
}

impl LinearOptimum {
    /// The linear strategy realizing this power: `α = −√P*/σ₀` and the LLSE
    /// gain for the shrunken state `σ̃₀ = σ₀(1 + α)`.
    pub fn strategy(&self, sigma0: f64) -> Strategy {
        let alpha = if sigma0 > 0.0 {
            -libm::sqrt(self.p_star) / sigma0
        } else {
            0.0
        };
        let shrunk = sigma0 * (1.0 + alpha);
        Strategy::new(
            ControlLaw::Linear(LinearStrategySpec {
                alpha,
                beta: llse_coefficient(shrunk, 1.0),
            }),
            "optimal-linear",
        )
    }
}

/// Minimum over `P ∈ [0, σ₀²]` of [`linear_cost_at_power`].
pub fn optimal_linear_cost(params: &ProblemParams) -> Result<LinearOptimum> {
    let (k, sigma0) = (params.k(), params.sigma0());
    let min = minimize::minimize_over_power(
        |p| linear_cost_at_power(k, sigma0, p),
        sigma0 * sigma0,
        minimize::DEFAULT_GRID_POINTS,
        minimize::DEFAULT_TOLERANCE,
    )?;
    Ok(LinearOptimum {
        cost: min.value,
        p_star: min.argmin,
    })
}

/// The candidate with the smallest analytic upper bound among quantizer
/// (spacing `2a`), zero-input and zero-forcing, ties in that order.
pub fn best_strategy(params: &ProblemParams, noise: &NoiseModel) -> Strategy {
    match bounds::upper_bound_bayes(params, noise).winner {
        UpperBoundWinner::Quantizer => {
            quantizer_strategy(2.0 * noise.half_width()).expect("half-width is positive")
        }
        UpperBoundWinner::ZeroInput => {
            zero_input_strategy(params.sigma0(), 1.0).expect("params are validated")
        }
        UpperBoundWinner::ZeroForcing => zero_forcing_strategy(),
    }
}
