//! Numerical differential entropy of bounded densities.

use alloc::format;

use crate::error::{Error, Result};

pub const DEFAULT_GRID_POINTS: usize = 100_000;

/// Allowed deviation of the trapezoidal mass from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::invalid(format!(
                "interval [{lo}, {hi}] must be finite and non-empty"
            )));
        }
        Ok(Interval { lo, hi })
    }

    /// `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64) -> Result<Self> {
        Self::new(-half_width, half_width)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `n ≥ 2` evenly spaced points, both endpoints included exactly.
    pub fn linspace(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let step = self.width() / (n - 1) as f64;
        (0..n).map(move |i| {
            if i + 1 == n {
                self.hi
            } else {
                self.lo + step * i as f64
            }
        })
    }
}

/// Trapezoidal estimate of `−∫ f log₂ f` over `support`, in bits.
///
/// The density is sampled at `grid_points` evenly spaced nodes including
/// both endpoints. Every sample must be finite and non-negative and the
/// trapezoidal mass must be within [`NORMALIZATION_TOLERANCE`] of one.
pub fn entropy_oracle<F>(pdf: F, support: Interval, grid_points: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if grid_points < 2 {
        return Err(Error::invalid("entropy grid needs at least 2 points"));
    }
    let step = support.width() / (grid_points - 1) as f64;
    let mut mass = 0.0;
    let mut neg_entropy = 0.0;
    for (i, x) in support.linspace(grid_points).enumerate() {
        let f = pdf(x);
        if !f.is_finite() || f < 0.0 {
            return Err(Error::InvalidDensity(format!("density is {f} at x = {x}")));
        }
        let weight = if i == 0 || i + 1 == grid_points { 0.5 } else { 1.0 };
        mass += weight * f;
        if f > 0.0 {
            neg_entropy += weight * f * libm::log2(f);
        }
    }
    mass *= step;
    if (mass - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::InvalidDensity(format!(
            "density integrates to {mass}, expected 1"
        )));
    }
    Ok(-neg_entropy * step)
}
