//! Bounded, zero-mean, unit-variance observation noise.

use alloc::borrow::Cow;
use alloc::format;
use alloc::vec::Vec;

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::entropy::{self, Interval};
use crate::error::{Error, Result};
use crate::SQRT_3;

/// `½·log₂(2πe)`, the entropy of a unit-variance Gaussian and the largest
/// entropy any unit-variance density can have.
pub const GAUSSIAN_ENTROPY_BITS: f64 = 2.047_095_585_180_641;

/// Half-width of the symmetric unit-variance triangular law.
pub const TRIANGULAR_HALF_WIDTH: f64 = 2.449_489_742_783_178;

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Uniform,
    Triangular,
    Tabulated(TabulatedDensity),
}

/// A noise law with support inside `(−a, a)`, unit variance and known
/// differential entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    half_width: f64,
    entropy_bits: f64,
    label: Cow<'static, str>,
    shape: Shape,
}

impl NoiseModel {
    /// Uniform on `(−√3, √3)`.
    pub fn uniform() -> Self {
        NoiseModel {
            half_width: SQRT_3,
            entropy_bits: libm::log2(2.0 * SQRT_3),
            label: Cow::Borrowed("uniform"),
            shape: Shape::Uniform,
        }
    }

    /// Symmetric triangular on `(−√6, √6)`; entropy `ln √6 + ½` nats.
    pub fn triangular() -> Self {
        NoiseModel {
            half_width: TRIANGULAR_HALF_WIDTH,
            entropy_bits: (0.5 + libm::log(TRIANGULAR_HALF_WIDTH)) / core::f64::consts::LN_2,
            label: Cow::Borrowed("triangular"),
            shape: Shape::Triangular,
        }
    }

    /// Density tabulated at strictly increasing nodes `xs` and linearly
    /// interpolated between them.
    ///
    /// The table is normalized and then standardized to zero mean and unit
    /// variance, so any positive scale is accepted. The entropy is computed
    /// with [`entropy::entropy_oracle`] on the standardized density.
    pub fn tabulated(
        xs: &[f64],
        density: &[f64],
        label: impl Into<Cow<'static, str>>,
    ) -> Result<Self> {
        let table = TabulatedDensity::new(xs, density)?;
        let support = Interval::new(table.xs[0], table.xs[table.xs.len() - 1])?;
        let grid = entropy::DEFAULT_GRID_POINTS.max(16 * table.xs.len());
        let entropy_bits = entropy::entropy_oracle(|x| table.pdf(x), support, grid)?;
        if entropy_bits > GAUSSIAN_ENTROPY_BITS {
            return Err(Error::InvalidDensity(format!(
                "entropy {entropy_bits} bits exceeds the unit-variance maximum {GAUSSIAN_ENTROPY_BITS}"
            )));
        }
        let half_width = support.lo().abs().max(support.hi().abs());
        Ok(NoiseModel {
            half_width,
            entropy_bits,
            label: label.into(),
            shape: Shape::Tabulated(table),
        })
    }

    /// Support half-width `a`.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Differential entropy `h(Z)` in bits.
    pub fn entropy_bits(&self) -> f64 {
        self.entropy_bits
    }

    /// `2^{2h(Z)}`.
    pub fn entropy_power(&self) -> f64 {
        libm::exp2(2.0 * self.entropy_bits)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// One draw, strictly inside `(−a, a)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let z = match &self.shape {
                Shape::Uniform => SQRT_3 * (2.0 * rng.sample::<f64, _>(Open01) - 1.0),
                Shape::Triangular => {
                    let u: f64 = rng.sample(Open01);
                    let v: f64 = rng.sample(Open01);
                    0.5 * TRIANGULAR_HALF_WIDTH * ((2.0 * u - 1.0) + (2.0 * v - 1.0))
                }
                Shape::Tabulated(t) => t.inverse_cdf(rng.sample(Open01)),
            };
            if z.abs() < self.half_width {
                return z;
            }
        }
    }

    /// `count` draws from a generator seeded with `seed`.
    pub fn samples(&self, seed: u64, count: usize) -> Vec<f64> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        (0..count).map(|_| self.sample(&mut rng)).collect()
    }
}

/// Piecewise-linear density, already standardized.
#[derive(Debug, Clone, PartialEq)]
struct TabulatedDensity {
    xs: Vec<f64>,
    fs: Vec<f64>,
    /// Cumulative mass at each node; `cdf[0] = 0`, last entry is 1 up to
    /// rounding.
    cdf: Vec<f64>,
}

/// Exact `∫ xⁿ f` over one cell of a piecewise-linear density, `n = 0..=2`.
fn cell_moments(x0: f64, x1: f64, f0: f64, f1: f64) -> [f64; 3] {
    let h = x1 - x0;
    // f(x0 + t) = f0 + s t on t ∈ [0, h]
    let s = (f1 - f0) / h;
    let t_moment = |p: i32| libm::pow(h, f64::from(p + 1)) / f64::from(p + 1);
    let base = [t_moment(0), t_moment(1), t_moment(2), t_moment(3)];
    // ∫ (x0 + t)ⁿ (f0 + s t) dt expanded in powers of t.
    let m0 = f0 * base[0] + s * base[1];
    let m1 = x0 * m0 + f0 * base[1] + s * base[2];
    let m2 = x0 * x0 * m0 + 2.0 * x0 * (f0 * base[1] + s * base[2]) + f0 * base[2] + s * base[3];
    [m0, m1, m2]
}

impl TabulatedDensity {
    fn new(xs: &[f64], density: &[f64]) -> Result<Self> {
        if xs.len() != density.len() {
            return Err(Error::DimensionMismatch {
                expected: xs.len(),
                got: density.len(),
            });
        }
        if xs.len() < 2 {
            return Err(Error::InvalidDensity(format!(
                "need at least 2 nodes, got {}",
                xs.len()
            )));
        }
        if xs.iter().any(|x| !x.is_finite()) || xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidDensity("nodes must be finite and strictly increasing".into()));
        }
        if let Some(f) = density.iter().find(|f| !f.is_finite() || **f < 0.0) {
            return Err(Error::InvalidDensity(format!("density value {f} is not a finite non-negative number")));
        }

        let mut moments = [0.0; 3];
        for i in 0..xs.len() - 1 {
            let m = cell_moments(xs[i], xs[i + 1], density[i], density[i + 1]);
            moments.iter_mut().zip(m).for_each(|(acc, v)| *acc += v);
        }
        let mass = moments[0];
        if mass <= 0.0 {
            return Err(Error::InvalidDensity("density has zero mass".into()));
        }
        let mean = moments[1] / mass;
        let variance = moments[2] / mass - mean * mean;
        if variance <= 0.0 {
            return Err(Error::InvalidDensity("density has zero variance".into()));
        }
        let std = libm::sqrt(variance);

        let xs: Vec<f64> = xs.iter().map(|x| (x - mean) / std).collect();
        let fs: Vec<f64> = density.iter().map(|f| f * std / mass).collect();
        let mut cdf = Vec::with_capacity(xs.len());
        cdf.push(0.0);
        for i in 0..xs.len() - 1 {
            let last = cdf[i];
            cdf.push(last + 0.5 * (fs[i] + fs[i + 1]) * (xs[i + 1] - xs[i]));
        }
        Ok(TabulatedDensity { xs, fs, cdf })
    }

    fn pdf(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return 0.0;
        }
        let i = self.xs.partition_point(|&node| node <= x).clamp(1, n - 1) - 1;
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let w = (x - x0) / (x1 - x0);
        self.fs[i] + w * (self.fs[i + 1] - self.fs[i])
    }

    fn inverse_cdf(&self, u: f64) -> f64 {
        let n = self.xs.len();
        let i = self.cdf.partition_point(|&c| c <= u).clamp(1, n - 1) - 1;
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let (f0, f1) = (self.fs[i], self.fs[i + 1]);
        // Mass inside the cell is f0 t + s t²/2 with s = (f1 − f0)/h. The
        // rationalized root stays finite as s → 0.
        let slope = (f1 - f0) / h;
        let target = u - self.cdf[i];
        let disc = (f0 * f0 + 2.0 * slope * target).max(0.0);
        let denom = f0 + libm::sqrt(disc);
        let t = if denom > 0.0 { 2.0 * target / denom } else { 0.0 };
        x0 + t.clamp(0.0, h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn moments(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn uniform_constants() {
        let u = NoiseModel::uniform();
        assert!((u.half_width() - 1.7321).abs() < 1e-4);
        assert!((u.entropy_bits() - 1.7925).abs() < 1e-4);
        assert!((u.entropy_power() - 12.0).abs() < 1e-12);
        assert_eq!(u.label(), "uniform");
    }

    #[test]
    fn gaussian_entropy_constant() {
        let h = 0.5 * libm::log2(crate::TWO_PI_E);
        assert!((h - GAUSSIAN_ENTROPY_BITS).abs() < 1e-15);
        assert_eq!(TRIANGULAR_HALF_WIDTH, libm::sqrt(6.0));
    }

    #[test]
    fn uniform_sample_variance() {
        let xs = NoiseModel::uniform().samples(11, 1_000_000);
        let (mean, var) = moments(&xs);
        assert!(mean.abs() < 5e-3);
        assert!((var - 1.0).abs() < 0.01, "{var}");
    }

    #[test]
    fn triangular_sample_variance_and_entropy() {
        let t = NoiseModel::triangular();
        let (_, var) = moments(&t.samples(5, 400_000));
        assert!((var - 1.0).abs() < 0.01, "{var}");
        assert!(t.entropy_bits() <= GAUSSIAN_ENTROPY_BITS);
        assert!((t.entropy_bits() - 2.013_828_770_805_06).abs() < 1e-12);
    }

    #[test]
    fn tabulated_standardizes() {
        // A uniform density on [0, 10] given at 3 nodes, unnormalized.
        let model = NoiseModel::tabulated(&[0.0, 5.0, 10.0], &[2.0, 2.0, 2.0], "flat").unwrap();
        assert!((model.half_width() - SQRT_3).abs() < 1e-12);
        assert!((model.entropy_bits() - libm::log2(2.0 * SQRT_3)).abs() < 1e-6);
        let (mean, var) = moments(&model.samples(3, 400_000));
        assert!(mean.abs() < 1e-2);
        assert!((var - 1.0).abs() < 0.01, "{var}");
    }

    #[test]
    fn tabulated_triangle_matches_builtin() {
        let xs: Vec<f64> = (0..=200).map(|i| -1.0 + i as f64 / 100.0).collect();
        let fs: Vec<f64> = xs.iter().map(|x| 1.0 - x.abs()).collect();
        let model = NoiseModel::tabulated(&xs, &fs, "tri").unwrap();
        let builtin = NoiseModel::triangular();
        assert!((model.half_width() - builtin.half_width()).abs() < 1e-9);
        assert!((model.entropy_bits() - builtin.entropy_bits()).abs() < 1e-3);
        let (_, var) = moments(&model.samples(9, 400_000));
        assert!((var - 1.0).abs() < 0.01, "{var}");
    }

    #[test]
    fn tabulated_rejects_bad_tables() {
        assert!(NoiseModel::tabulated(&[0.0], &[1.0], "x").is_err());
        assert!(NoiseModel::tabulated(&[0.0, 0.0], &[1.0, 1.0], "x").is_err());
        assert!(NoiseModel::tabulated(&[0.0, 1.0], &[1.0, -1.0], "x").is_err());
        assert!(NoiseModel::tabulated(&[0.0, 1.0], &[0.0, 0.0], "x").is_err());
        assert!(NoiseModel::tabulated(&[0.0, 1.0, 2.0], &[1.0, 1.0], "x").is_err());
    }

    #[test]
    fn cell_moments_match_quadrature() {
        let [m0, m1, m2] = cell_moments(1.0, 3.0, 0.5, 2.0);
        let f = |x: f64| 0.5 + 0.75 * (x - 1.0);
        let n = 20_000;
        let h = 2.0 / n as f64;
        let (mut q0, mut q1, mut q2) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let x = 1.0 + (i as f64 + 0.5) * h;
            q0 += f(x) * h;
            q1 += x * f(x) * h;
            q2 += x * x * f(x) * h;
        }
        assert!((m0 - q0).abs() < 1e-8 && (m1 - q1).abs() < 1e-8 && (m2 - q2).abs() < 1e-7);
    }

    proptest! {
        #[test]
        fn samples_are_seed_deterministic_and_inside_support(seed in any::<u64>()) {
            let tab = NoiseModel::tabulated(&[-1.0, 0.0, 2.0], &[0.0, 1.0, 0.0], "skew").unwrap();
            for model in [NoiseModel::uniform(), NoiseModel::triangular(), tab] {
                let a = model.samples(seed, 256);
                prop_assert_eq!(&a, &model.samples(seed, 256));
                prop_assert!(a.iter().all(|z| z.abs() < model.half_width()));
            }
        }
    }
}
