//! Indicatrix volumes and comparisons.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::unit_ball_volume;
use crate::error::{Error, Result};
use crate::metrics::{Ellipsoid2C, MetricOracle};
use crate::sampling::{sharded_sum, uniform_in_ball, unit_directions};

pub const DEFAULT_SAFETY_FACTOR: f64 = 1.25;
pub const DEFAULT_DIRECTIONS: usize = 4096;
pub const DEFAULT_DIRECTION_SEED: u64 = 0x5eed_d1e5;

/// Monte Carlo estimate of an indicatrix volume.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    /// Binomial standard error scaled by the sampling-ball volume.
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub bounding_radius: f64,
}

/// Minimum of `τ(ω)` over the sampled unit directions.
pub fn min_on_directions(oracle: &MetricOracle, n_dirs: usize, seed: u64) -> Result<f64> {
    let mut min = f64::INFINITY;
    for d in unit_directions(oracle.dim(), n_dirs.max(1), seed) {
        let t = oracle.eval_raw(&d);
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::UnboundedIndicatrix);
        }
        min = min.min(t);
    }
    Ok(min)
}

/// Radius `safety / min_ω τ(ω)` of a centred ball containing the indicatrix.
pub fn bounding_radius_with(oracle: &MetricOracle, n_dirs: usize, safety: f64) -> Result<f64> {
    Ok(safety / min_on_directions(oracle, n_dirs, DEFAULT_DIRECTION_SEED)?)
}

pub fn bounding_radius(oracle: &MetricOracle, n_dirs: usize) -> Result<f64> {
    bounding_radius_with(oracle, n_dirs, DEFAULT_SAFETY_FACTOR)
}

/// Uniform sampling of the ball of radius `R` and counting `τ(v) < 1`.
pub fn mc_volume(oracle: &MetricOracle, samples: u64, seed: u64) -> Result<VolumeEstimate> {
    let radius = bounding_radius(oracle, DEFAULT_DIRECTIONS)?;
    mc_volume_in_radius(oracle, samples, seed, radius)
}

pub fn mc_volume_in_radius(oracle: &MetricOracle, samples: u64, seed: u64, radius: f64) -> Result<VolumeEstimate> {
    if samples == 0 {
        return Err(Error::InvalidParameter("sample count must be positive".into()));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!("bounding radius must be positive, got {radius}")));
    }
    let n = oracle.dim();
    let hits = sharded_sum(samples, seed, |rng, count| {
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let mut hits = 0;
        for _ in 0..count {
            uniform_in_ball(rng, radius, &mut buf);
            if oracle.inside(&buf) {
                hits += 1;
            }
        }
        hits
    });
    let box_volume = unit_ball_volume(n) * radius.powi(2 * n as i32);
    let frac = hits as f64 / samples as f64;
    Ok(VolumeEstimate {
        value: frac * box_volume,
        std_error: box_volume * (frac * (1.0 - frac) / samples as f64).sqrt(),
        samples,
        seed,
        bounding_radius: radius,
    })
}

/// Fraction of sampled points `v` in the ball of radius `radius` with
/// `|τ(v) − 1| < width`.
pub fn boundary_shell_fraction(
    oracle: &MetricOracle,
    samples: u64,
    seed: u64,
    radius: f64,
    width: f64,
) -> f64 {
    let n = oracle.dim();
    let hits = sharded_sum(samples, seed, |rng, count| {
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let mut hits = 0;
        for _ in 0..count {
            uniform_in_ball(rng, radius, &mut buf);
            if (oracle.eval_raw(&buf) - 1.0).abs() < width {
                hits += 1;
            }
        }
        hits
    });
    hits as f64 / samples as f64
}

/// Fraction of sampled points where `τ₁ < 1` and `τ₂ < 1` disagree.
pub fn membership_flip_fraction(
    first: &MetricOracle,
    second: &MetricOracle,
    samples: u64,
    seed: u64,
    radius: f64,
) -> f64 {
    let n = first.dim();
    let flips = sharded_sum(samples, seed, |rng, count| {
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let mut flips = 0;
        for _ in 0..count {
            uniform_in_ball(rng, radius, &mut buf);
            if first.inside(&buf) != second.inside(&buf) {
                flips += 1;
            }
        }
        flips
    });
    flips as f64 / samples as f64
}

pub fn ellipsoid_volume(e: &Ellipsoid2C) -> Result<f64> {
    Ellipsoid2C::new(e.a, e.b).map(|e| e.volume())
}

/// `sup_ω |1/τ₁(ω) − 1/τ₂(ω)|` over sampled unit directions: the largest gap
/// between the radial functions of two balanced indicatrices.
pub fn radial_distance(first: &MetricOracle, second: &MetricOracle, n_dirs: usize) -> Result<f64> {
    if first.dim() != second.dim() {
        return Err(Error::DimensionMismatch { expected: first.dim(), got: second.dim() });
    }
    let mut sup: f64 = 0.0;
    for d in unit_directions(first.dim(), n_dirs.max(1), DEFAULT_DIRECTION_SEED) {
        let a = first.eval_raw(&d);
        let b = second.eval_raw(&d);
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::UnboundedIndicatrix);
        }
        sup = sup.max((1.0 / a - 1.0 / b).abs());
    }
    Ok(sup)
}

/// True iff `vol(inner) ≤ mc + 3σ` and `mc − 3σ ≤ vol(outer)`, with
/// `vol(inner) ≤ vol(outer)` required of the bounds themselves.
pub fn sandwich_check(inner: &Ellipsoid2C, mc: &VolumeEstimate, outer: &Ellipsoid2C) -> bool {
    let lo = inner.volume();
    let hi = outer.volume();
    lo <= hi && lo <= mc.value + 3.0 * mc.std_error && mc.value - 3.0 * mc.std_error <= hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{kobayashi_ball_oracle, kobayashi_siegel_oracle, Provenance};
    use crate::point::CPoint;
    use std::f64::consts::PI;

    #[test]
    fn bounding_radius_examples() {
        let ball = kobayashi_ball_oracle(&CPoint::zeros(2)).unwrap();
        assert!((bounding_radius(&ball, 1000).unwrap() - 1.25).abs() < 1e-12);
        let siegel = kobayashi_siegel_oracle(&CPoint::real2(0.0, -1.0)).unwrap();
        assert!((bounding_radius(&siegel, 1000).unwrap() - 2.5).abs() < 1e-12);
        let e = Ellipsoid2C::new(4.0, 1.0).unwrap().oracle(CPoint::zeros(2), Provenance::Exact);
        assert!((bounding_radius(&e, 1000).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn zero_metric_direction_is_unbounded() {
        let flat = MetricOracle::custom(CPoint::zeros(2), std::sync::Arc::new(|v: &[Complex64]| v[0].norm()));
        assert_eq!(bounding_radius(&flat, 100), Err(Error::UnboundedIndicatrix));
    }

    #[test]
    fn zero_samples_rejected() {
        let ball = kobayashi_ball_oracle(&CPoint::zeros(2)).unwrap();
        assert!(mc_volume(&ball, 0, 1).is_err());
    }

    #[test]
    fn ellipsoid_volume_examples() {
        let unit = Ellipsoid2C { a: 1.0, b: 1.0 };
        assert!((ellipsoid_volume(&unit).unwrap() - PI * PI / 2.0).abs() < 1e-15);
        assert!(ellipsoid_volume(&Ellipsoid2C { a: 0.0, b: 1.0 }).is_err());
    }

    #[test]
    fn radial_distance_of_scaled_ball() {
        let ball = kobayashi_ball_oracle(&CPoint::zeros(2)).unwrap();
        assert_eq!(radial_distance(&ball, &ball, 500).unwrap(), 0.0);
        let eps = 0.1;
        let d = radial_distance(&ball, &ball.scaled(1.0 + eps), 500).unwrap();
        assert!((d - eps / (1.0 + eps)).abs() < 1e-14);
    }

    #[test]
    fn sandwich_examples() {
        let unit = Ellipsoid2C { a: 1.0, b: 1.0 };
        let exact = VolumeEstimate { value: PI * PI / 2.0, std_error: 0.0, samples: 1, seed: 0, bounding_radius: 1.0 };
        assert!(sandwich_check(&unit, &exact, &unit));
        let big = Ellipsoid2C { a: 2.0, b: 1.0 };
        assert!(!sandwich_check(&big, &exact, &unit));
    }
}
