//! Strategies, analytic bounds and cost evaluation for the bounded-noise
//! Witsenhausen counterexample, in both its Bayesian (Gaussian state,
//! bounded noise, expected cost) and adversarial (worst-case state and
//! noise with `|z| < √3`) forms.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs and, for Monte Carlo, of an explicit seed. The
//! `witbench` crate adds threading, file formats and the command line.
//!
//! ```
//! use witbench_core::{bounds, NoiseModel, ProblemParams};
//!
//! let params = ProblemParams::scalar(1.0, 1.0).unwrap();
//! let report = bounds::bayes_report(&params, &NoiseModel::uniform()).unwrap();
//! assert!(report.lower <= report.upper);
//! assert!(report.ratio <= 50.0);
//! ```

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod entropy;
mod error;
pub mod minimize;
pub mod noise;
pub mod problem;
pub mod sim;
pub mod strategies;

pub use bounds::BoundReport;
pub use entropy::{entropy_oracle, Interval};
pub use error::{Error, Result};
pub use minimize::{minimize_scalar, Minimum};
pub use noise::NoiseModel;
pub use problem::{evaluate_cost, CostBreakdown, ProblemParams, Realization};
pub use sim::{McEstimate, WorstCase};
pub use strategies::{ControlLaw, LinearStrategySpec, Strategy};

/// `√3`, the noise half-width of unit-variance uniform noise and the
/// disturbance bound of the adversarial model.
pub const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// `2πe`.
pub const TWO_PI_E: f64 = 2.0 * core::f64::consts::PI * core::f64::consts::E;
