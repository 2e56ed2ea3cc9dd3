//! Problem parameters and the per-realization quadratic cost.
//!
//! For a strategy `(γ₁, γ₂)` and a realization `(x₀, z)`:
//!
//! ```text
//! u₁ = γ₁(x₀)   x₁ = x₀ + u₁   y₂ = x₁ + z   u₂ = γ₂(y₂)   x₂ = x₁ − u₂
//! J  = k²‖u₁‖²/m + ‖x₂‖²/m
//! ```

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::strategies::Strategy;

/// Input-cost weight `k`, initial-state standard deviation `σ₀` and vector
/// length `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    k: f64,
    sigma0: f64,
    m: usize,
}

impl ProblemParams {
    pub fn new(k: f64, sigma0: f64, m: usize) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::invalid("k must be finite and > 0"));
        }
        if !(sigma0.is_finite() && sigma0 >= 0.0) {
            return Err(Error::invalid("sigma0 must be finite and >= 0"));
        }
        if m == 0 {
            return Err(Error::invalid("vector length m must be >= 1"));
        }
        Ok(ProblemParams { k, sigma0, m })
    }

    /// Scalar problem, `m = 1`.
    pub fn scalar(k: f64, sigma0: f64) -> Result<Self> {
        Self::new(k, sigma0, 1)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

/// One draw of the primitive variables: initial state and observation noise.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub x0: Vec<f64>,
    pub z: Vec<f64>,
}

impl Realization {
    pub fn new(x0: Vec<f64>, z: Vec<f64>) -> Result<Self> {
        if x0.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: x0.len(),
                got: z.len(),
            });
        }
        Ok(Realization { x0, z })
    }

    pub fn scalar(x0: f64, z: f64) -> Self {
        Realization {
            x0: alloc::vec![x0],
            z: alloc::vec![z],
        }
    }

    /// Zero-filled realization of length `m`, for reuse as a sampling buffer.
    pub fn zeros(m: usize) -> Self {
        Realization {
            x0: alloc::vec![0.0; m],
            z: alloc::vec![0.0; m],
        }
    }

    pub fn len(&self) -> usize {
        self.x0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x0.is_empty()
    }
}

/// Per-dimension cost split into the two stages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    /// `k²‖u₁‖²/m`
    pub first_stage: f64,
    /// `‖x₂‖²/m`
    pub second_stage: f64,
    pub total: f64,
}

impl CostBreakdown {
    fn from_sums(k: f64, input_energy: f64, residual_energy: f64, m: usize) -> Self {
        let m = m as f64;
        let first_stage = k * k * input_energy / m;
        let second_stage = residual_energy / m;
        CostBreakdown {
            first_stage,
            second_stage,
            total: first_stage + second_stage,
        }
    }
}

/// Squared first-stage input and squared final state for one coordinate.
#[inline]
pub(crate) fn coordinate_energies(strategy: &Strategy, x0: f64, z: f64) -> (f64, f64) {
    let u1 = strategy.gamma1(x0);
    let x1 = x0 + u1;
    let u2 = strategy.gamma2(x1 + z);
    let x2 = x1 - u2;
    (u1 * u1, x2 * x2)
}

/// Cost of a scalar realization. Bit-identical to [`evaluate_cost`] on
/// `Realization::scalar(x0, z)` with `m = 1`.
pub(crate) fn scalar_cost(k: f64, strategy: &Strategy, x0: f64, z: f64) -> CostBreakdown {
    cost_of(k, strategy, &[x0], &[z])
}

/// Applies `strategy` coordinate-wise to `realization` and returns the cost.
pub fn evaluate_cost(
    params: &ProblemParams,
    strategy: &Strategy,
    realization: &Realization,
) -> Result<CostBreakdown> {
    let m = params.m();
    for len in [realization.x0.len(), realization.z.len()] {
        if len != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: len,
            });
        }
    }
    Ok(cost_of(params.k(), strategy, &realization.x0, &realization.z))
}

/// [`evaluate_cost`] without the length checks; `x0` and `z` must have the
/// same length.
pub(crate) fn cost_of(k: f64, strategy: &Strategy, x0: &[f64], z: &[f64]) -> CostBreakdown {
    let (input, residual) = x0.iter().zip(z).fold((0.0, 0.0), |(su, sx), (&x0, &z)| {
        let (u, x) = coordinate_energies(strategy, x0, z);
        (su + u, sx + x)
    });
    CostBreakdown::from_sums(k, input, residual, x0.len())
}
