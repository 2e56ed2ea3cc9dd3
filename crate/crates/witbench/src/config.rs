//! Sweep configuration: parameter grids, noise selection and output.
//!
//! A config file is JSON with the [`SweepConfig`] keys; flags given on the
//! command line override values from the file.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use witbench_core::NoiseModel;

use crate::table::Format;
use crate::{density, AppError};

/// A list `a,b,c` or a log-spaced range `lo:hi:count`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    LogRange { lo: f64, hi: f64, count: usize },
    Text(String),
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>, AppError> {
        match self {
            GridSpec::List(v) => {
                if v.is_empty() {
                    return Err(AppError::usage("grid must not be empty"));
                }
                Ok(v.clone())
            }
            GridSpec::LogRange { lo, hi, count } => log_range(*lo, *hi, *count),
            GridSpec::Text(s) => s.parse::<GridSpec>()?.values(),
        }
    }
}

impl FromStr for GridSpec {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |e: std::num::ParseFloatError| AppError::usage(format!("bad grid {s:?}: {e}"));
        if let [lo, hi, count] = s.split(':').collect::<Vec<_>>()[..] {
            let count = count
                .trim()
                .parse()
                .map_err(|_| AppError::usage(format!("bad grid count in {s:?}")))?;
            return Ok(GridSpec::LogRange {
                lo: lo.trim().parse().map_err(bad)?,
                hi: hi.trim().parse().map_err(bad)?,
                count,
            });
        }
        let list = s
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(bad)?;
        Ok(GridSpec::List(list))
    }
}

/// `count` points from `lo` to `hi`, evenly spaced in log₁₀, endpoints exact.
pub fn log_range(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>, AppError> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(AppError::usage(format!("log range needs 0 < lo <= hi, got {lo}:{hi}")));
    }
    match count {
        0 => Err(AppError::usage("grid must not be empty")),
        1 => Ok(vec![lo]),
        _ => {
            let (a, b) = (lo.log10(), hi.log10());
            Ok((0..count)
                .map(|i| match i {
                    0 => lo,
                    i if i + 1 == count => hi,
                    i => 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64),
                })
                .collect())
        }
    }
}

/// `uniform`, `triangular`, or `file:PATH` for a tabulated density.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(try_from = "String")]
pub enum NoiseSpec {
    Uniform,
    Triangular,
    File(PathBuf),
}

impl NoiseSpec {
    pub fn resolve(&self) -> Result<NoiseModel, AppError> {
        match self {
            NoiseSpec::Uniform => Ok(NoiseModel::uniform()),
            NoiseSpec::Triangular => Ok(NoiseModel::triangular()),
            NoiseSpec::File(path) => density::load(path),
        }
    }
}

impl FromStr for NoiseSpec {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(NoiseSpec::Uniform),
            "triangular" => Ok(NoiseSpec::Triangular),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(NoiseSpec::File(PathBuf::from(path))),
                _ => Err(AppError::usage(format!(
                    "unknown noise {s:?}; expected uniform, triangular or file:PATH"
                ))),
            },
        }
    }
}

impl TryFrom<String> for NoiseSpec {
    type Error = AppError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    #[default]
    Bayes,
    Adversarial,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub model: Model,
    pub k_grid: GridSpec,
    pub sigma0_grid: GridSpec,
    pub noise: NoiseSpec,
    pub n: usize,
    pub seed: u64,
    pub m: usize,
    /// `None` or `-` writes to stdout.
    pub out_path: Option<PathBuf>,
    pub format: Format,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            model: Model::Bayes,
            k_grid: GridSpec::LogRange { lo: 1e-3, hi: 10.0, count: 25 },
            sigma0_grid: GridSpec::LogRange { lo: 1e-2, hi: 1e3, count: 25 },
            noise: NoiseSpec::Uniform,
            n: witbench_core::sim::DEFAULT_SAMPLES,
            seed: 0,
            m: 1,
            out_path: None,
            format: Format::Csv,
        }
    }
}

impl SweepConfig {
    pub fn from_json_file(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| AppError::usage(format!("{}: {e}", path.display())))
    }

    /// Checks the invariants and expands both grids.
    pub fn grids(&self) -> Result<(Vec<f64>, Vec<f64>), AppError> {
        if self.n < witbench_core::sim::MIN_SAMPLES {
            return Err(AppError::usage(format!(
                "n must be >= {}, got {}",
                witbench_core::sim::MIN_SAMPLES,
                self.n
            )));
        }
        if self.m == 0 {
            return Err(AppError::usage("m must be >= 1"));
        }
        let ks = self.k_grid.values()?;
        if let Some(k) = ks.iter().find(|k| !(k.is_finite() && **k > 0.0)) {
            return Err(AppError::usage(format!("k must be > 0, got {k}")));
        }
        let sigmas = self.sigma0_grid.values()?;
        if let Some(s) = sigmas.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
            return Err(AppError::usage(format!("sigma0 must be >= 0, got {s}")));
        }
        Ok((ks, sigmas))
    }
}
