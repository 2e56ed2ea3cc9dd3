//! One-dimensional minimization: a dense grid scan followed by
//! golden-section refinement around the best grid point.
//!
//! The objectives here (lower bounds, the linear cost) are not guaranteed
//! unimodal, so the grid picks the basin and the golden-section search only
//! polishes it.

use crate::error::{Error, Result};

pub const DEFAULT_GRID_POINTS: usize = 4096;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// `1/φ`
const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub argmin: f64,
    pub value: f64,
}

fn eval<F: FnMut(f64) -> f64>(f: &mut F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { at: x })
    }
}

/// Minimizes `objective` on `[lo, hi]`.
///
/// Scans `grid_points` evenly spaced points (endpoints included), then runs
/// golden-section search on the two cells around the best grid point until
/// the bracket is narrower than `tol`. Returns whichever of the grid winner
/// and the refined point is lower; ties keep the grid point.
pub fn minimize_scalar<F>(mut objective: F, lo: f64, hi: f64, grid_points: usize, tol: f64) -> Result<Minimum>
where
    F: FnMut(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::invalid("minimization bracket must be finite with lo <= hi"));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::invalid("tolerance must be finite and > 0"));
    }
    if lo == hi {
        return Ok(Minimum {
            argmin: lo,
            value: eval(&mut objective, lo)?,
        });
    }
    if grid_points < 3 {
        return Err(Error::invalid("minimization grid needs at least 3 points"));
    }

    let step = (hi - lo) / (grid_points - 1) as f64;
    let node = |i: usize| if i + 1 == grid_points { hi } else { lo + step * i as f64 };
    let mut best_i = 0;
    let mut best = eval(&mut objective, lo)?;
    for i in 1..grid_points {
        let v = eval(&mut objective, node(i))?;
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let grid_best = Minimum {
        argmin: node(best_i),
        value: best,
    };

    let mut a = node(best_i.saturating_sub(1));
    let mut b = node((best_i + 1).min(grid_points - 1));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(&mut objective, c)?;
    let mut fd = eval(&mut objective, d)?;
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(&mut objective, c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(&mut objective, d)?;
        }
        // Floating-point stall: the bracket can no longer shrink.
        if !(c > a && d < b) {
            break;
        }
    }

    let mut refined = if fc <= fd {
        Minimum { argmin: c, value: fc }
    } else {
        Minimum { argmin: d, value: fd }
    };
    let mid = 0.5 * (a + b);
    let fmid = eval(&mut objective, mid)?;
    if fmid < refined.value {
        refined = Minimum { argmin: mid, value: fmid };
    }
    Ok(if refined.value < grid_best.value {
        refined
    } else {
        grid_best
    })
}

/// Minimizes `objective(P)` over `P ∈ [0, p_max]` on a grid uniform in
/// `√P`. The returned `argmin` is the power `P*`, not its square root.
pub fn minimize_over_power<F>(mut objective: F, p_max: f64, grid_points: usize, tol: f64) -> Result<Minimum>
where
    F: FnMut(f64) -> f64,
{
    if !(p_max.is_finite() && p_max >= 0.0) {
        return Err(Error::invalid("power bracket must be finite and >= 0"));
    }
    let min = minimize_scalar(|s| objective(s * s), 0.0, libm::sqrt(p_max), grid_points, tol)?;
    Ok(Minimum {
        argmin: min.argmin * min.argmin,
        value: min.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic() {
        let m = minimize_scalar(|p| (p - 2.0) * (p - 2.0), 0.0, 10.0, DEFAULT_GRID_POINTS, DEFAULT_TOLERANCE).unwrap();
        assert!((m.argmin - 2.0).abs() < 1e-9);
    }

    #[test]
    fn boundary_minimum() {
        let m = minimize_scalar(|p| p, 0.0, 1.0, DEFAULT_GRID_POINTS, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(m.argmin, 0.0);
        assert_eq!(m.value, 0.0);
        let m = minimize_scalar(|p| -p, 0.0, 1.0, DEFAULT_GRID_POINTS, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(m.argmin, 1.0);
    }

    #[test]
    fn picks_global_basin_of_multimodal_objective() {
        // Local minimum near 0.8 (value ≈ 0.2), global near 3.2.
        let f = |x: f64| libm::cos(x * 2.0) + 0.1 * (x - 3.0) * (x - 3.0);
        let m = minimize_scalar(f, 0.0, 5.0, 64, 1e-12).unwrap();
        let brute = (0..1_000_001)
            .map(|i| 5.0 * i as f64 / 1e6)
            .map(|x| (x, f(x)))
            .fold((0.0, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b });
        assert!((m.argmin - brute.0).abs() < 1e-5);
        assert!(m.value <= brute.1 + 1e-15);
    }

    #[test]
    fn degenerate_bracket() {
        let m = minimize_scalar(|p| p + 1.0, 3.0, 3.0, 10, 1e-10).unwrap();
        assert_eq!(m, Minimum { argmin: 3.0, value: 4.0 });
    }

    #[test]
    fn errors() {
        assert!(minimize_scalar(|p| p, 1.0, 0.0, 10, 1e-10).is_err());
        assert!(minimize_scalar(|p| p, 0.0, 1.0, 10, 0.0).is_err());
        assert!(minimize_scalar(|p| p, 0.0, 1.0, 2, 1e-10).is_err());
        let err = minimize_scalar(|p| if p > 0.5 { f64::NAN } else { p }, 0.0, 1.0, 11, 1e-10);
        match err {
            Err(Error::NonFinite { at }) => assert!(at > 0.5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn power_grid_reports_power() {
        let m = minimize_over_power(|p| (p - 0.25) * (p - 0.25), 1.0, DEFAULT_GRID_POINTS, DEFAULT_TOLERANCE).unwrap();
        assert!((m.argmin - 0.25).abs() < 1e-9);
        let m = minimize_over_power(|p| p, 0.0, DEFAULT_GRID_POINTS, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(m.argmin, 0.0);
    }
}
