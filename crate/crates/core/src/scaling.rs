//! Boundary scaling: interior points approaching a strongly pseudoconvex
//! boundary point, normalized and dilated so the domains converge to the
//! Siegel domain.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bergman::{kernel_siegel, KernelOracle};
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::indicatrix::{bounding_radius, radial_distance, DEFAULT_DIRECTIONS};
use crate::metrics::{kobayashi_ball_oracle, kobayashi_siegel, kobayashi_siegel_oracle, pullback_metric, MetricOracle, Tau};
use crate::point::CPoint;
use crate::sampling::with_pool;
use crate::suita::{indicatrix_volume, Method, SuitaResult};
use crate::transforms::{dilation, pinchuk_normalize, HoloMap};

/// `p* = ('0, −1)`, the common image of every `p_j`.
pub fn p_star() -> CPoint {
    CPoint::real2(0.0, -1.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingStep {
    pub p: CPoint,
    pub zeta: CPoint,
    pub delta: f64,
    pub phi: HoloMap,
    pub t: HoloMap,
    /// `T_j ∘ φ_j`, mapping `D` onto `D^j`.
    pub composite: HoloMap,
    /// `composite⁻¹`, mapping `D^j` back to `D`.
    pub inverse: HoloMap,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingSequence {
    pub spec: DomainSpec,
    pub p0: CPoint,
    pub rate: f64,
    pub steps: Vec<ScalingStep>,
}

impl ScalingSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Step `j`, counted from 1.
    pub fn step(&self, j: usize) -> Result<&ScalingStep> {
        j.checked_sub(1)
            .and_then(|i| self.steps.get(i))
            .ok_or_else(|| Error::InvalidParameter(format!("step {j} outside 1..={}", self.steps.len())))
    }

    /// `D^j` as a domain.
    pub fn scaled_domain(&self, j: usize) -> Result<DomainSpec> {
        Ok(DomainSpec::scaled(self.spec.clone(), self.step(j)?.inverse.clone()))
    }
}

fn supported(spec: &DomainSpec, p0: &CPoint) -> Result<()> {
    match spec {
        DomainSpec::Ball { n: 2 } => Ok(()),
        DomainSpec::Egg { .. } => {
            if p0.dist(&CPoint::real2(0.0, 1.0)) > 1e-12 {
                return Err(Error::Unsupported(format!("egg sequences start at (0,1), got {p0}")));
            }
            Ok(())
        }
        _ => Err(Error::Unsupported(format!("scaling sequences exist for Ball(2) and eggs at (0,1), not {spec}"))),
    }
}

/// `p_j = p0 − rate^j ν(p0)` for `j = 1..=count`, with the normalization and
/// dilation at each nearest boundary point.
pub fn build_sequence(spec: &DomainSpec, p0: &CPoint, count: usize, rate: f64) -> Result<ScalingSequence> {
    supported(spec, p0)?;
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidParameter(format!("rate must lie in (0,1), got {rate}")));
    }
    let rho = spec.defining_value(p0)?;
    if rho.abs() > 1e-9 {
        return Err(Error::NotOnBoundary(rho));
    }
    // Fails with DegenerateLevi at weakly pseudoconvex points.
    pinchuk_normalize(spec, p0)?;
    let normal = spec.outward_normal(p0)?;
    let steps = (1..=count)
        .map(|j| {
            let p = p0.sub(&normal.scale(Complex64::from(rate.powi(j as i32))));
            if !spec.contains(&p)? {
                return Err(Error::OutsideDomain(format!("sequence point {p} left {spec}")));
            }
            let zeta = spec.nearest_boundary_point(&p)?;
            let phi = pinchuk_normalize(spec, &zeta)?.normalization;
            let image = phi.eval(&p)?;
            let delta = -image.last().re;
            if !(delta > 0.0) {
                return Err(Error::Numerical(format!("normalized point {image} is not on the negative axis")));
            }
            let t = dilation(delta)?;
            let composite = phi.clone().then(t.clone());
            let inverse = composite.inverse()?;
            Ok(ScalingStep { p, zeta, delta, phi, t, composite, inverse })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScalingSequence { spec: spec.clone(), p0: p0.clone(), rate, steps })
}

/// `z ∈ D^j`, i.e. `composite⁻¹(z) ∈ D`.
pub fn scaled_contains(seq: &ScalingSequence, j: usize, z: &CPoint) -> Result<bool> {
    let w = match seq.step(j)?.inverse.eval(z) {
        Ok(w) => w,
        Err(Error::Pole(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    seq.spec.contains(&w)
}

/// Points `p* + (a, b)` on a `side⁴` real grid in `[−h, h]⁴`. With an odd
/// `side` some grid points sit exactly on `2 Re z₂ + |z₁|² = 0`, where
/// membership is decided by rounding; even sides avoid them.
pub fn local_grid(half_width: f64, side: usize) -> Vec<CPoint> {
    let side = side.max(2);
    let coords: Vec<f64> = (0..side).map(|i| -half_width + 2.0 * half_width * i as f64 / (side - 1) as f64).collect();
    let mut out = Vec::with_capacity(side.pow(4));
    for &x1 in &coords {
        for &y1 in &coords {
            for &x2 in &coords {
                for &y2 in &coords {
                    out.push(CPoint::c2(Complex64::new(x1, y1), Complex64::new(x2 - 1.0, y2)));
                }
            }
        }
    }
    out
}

/// Fraction of `grid` where membership in `D^j` and in the Siegel domain differ.
pub fn hausdorff_flip_fraction(seq: &ScalingSequence, j: usize, grid: &[CPoint]) -> Result<f64> {
    let siegel = DomainSpec::siegel(2)?;
    let flips = grid
        .iter()
        .map(|z| Ok((scaled_contains(seq, j, z)? != siegel.contains(z)?) as usize))
        .sum::<Result<usize>>()?;
    Ok(flips as f64 / grid.len().max(1) as f64)
}

fn ball_only(seq: &ScalingSequence) -> Result<()> {
    match seq.spec {
        DomainSpec::Ball { n: 2 } => Ok(()),
        _ => Err(Error::Unsupported(format!(
            "quantitative scaling runs need exact pullbacks and exist for Ball(2) only, not {}",
            seq.spec
        ))),
    }
}

/// `K_{D^j}` through the inverse composite and the ball kernel.
pub fn scaled_kernel(seq: &ScalingSequence, j: usize, z: &CPoint) -> Result<f64> {
    ball_only(seq)?;
    KernelOracle::pullback(seq.step(j)?.inverse.clone(), KernelOracle::closed_form(seq.spec.clone())).eval(z)
}

/// The Kobayashi metric of `D^j` at `z`, pulled back from the ball.
pub fn scaled_metric(seq: &ScalingSequence, j: usize, z: &CPoint) -> Result<MetricOracle> {
    ball_only(seq)?;
    let inverse = &seq.step(j)?.inverse;
    let base = kobayashi_ball_oracle(&inverse.eval(z)?)?;
    pullback_metric(&base, inverse, z)
}

/// `F^τ_{D^j}(p*)`.
pub fn scaled_invariants(seq: &ScalingSequence, j: usize, tau: Tau, method: Method) -> Result<SuitaResult> {
    ball_only(seq)?;
    let z = p_star();
    let kernel = scaled_kernel(seq, j, &z)?;
    let oracle = scaled_metric(seq, j, &z)?;
    let volume = indicatrix_volume(&oracle, method)?;
    let notes = vec![format!("scaled ball step {j}, delta = {:e}", seq.step(j)?.delta)];
    Ok(SuitaResult::assemble(kernel, volume, tau, notes))
}

/// `max |k_{D^j}(z,v) − k_{D_∞}(z,v)|` over a test grid.
pub fn metric_discrepancy(seq: &ScalingSequence, j: usize, points: &[CPoint], vectors: &[CPoint]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for z in points {
        let oracle = scaled_metric(seq, j, z)?;
        for v in vectors {
            worst = worst.max((oracle.eval(v)? - kobayashi_siegel(z, v)?).abs());
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub j: usize,
    pub delta: f64,
    pub kernel: f64,
    pub kernel_err_abs: f64,
    pub vol: f64,
    pub vol_sigma: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "F_sigma")]
    pub f_sigma: f64,
    pub radial_dist: f64,
    pub bounding_radius: f64,
}

pub const REPORT_HEADER: &str = "j,delta,kernel,kernel_err_abs,vol,vol_sigma,F,F_sigma,radial_dist";

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ReportRow>,
    pub kernel_limit: f64,
    pub volume_limit: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ReportCheck {
    pub f_within_3_sigma: bool,
    pub final_kernel_rel_err: f64,
    pub final_radial_dist: f64,
    pub radial_eventually_decreasing: bool,
    pub kernel_eventually_decreasing: bool,
}

impl ConvergenceReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(REPORT_HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(
                out,
                "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                r.j, r.delta, r.kernel, r.kernel_err_abs, r.vol, r.vol_sigma, r.f, r.f_sigma, r.radial_dist
            )
            .unwrap();
        }
        out
    }

    pub fn check(&self) -> ReportCheck {
        let last = self.rows.last();
        let tail = |col: fn(&ReportRow) -> f64| {
            let half = self.rows.len() / 2;
            self.rows[half..].windows(2).all(|w| col(&w[1]) <= col(&w[0]))
        };
        ReportCheck {
            f_within_3_sigma: self.rows.iter().all(|r| (r.f - 1.0).abs() <= 3.0 * r.f_sigma + 1e-12),
            final_kernel_rel_err: last.map_or(f64::NAN, |r| r.kernel_err_abs / self.kernel_limit),
            final_radial_dist: last.map_or(f64::NAN, |r| r.radial_dist),
            radial_eventually_decreasing: tail(|r| r.radial_dist),
            kernel_eventually_decreasing: tail(|r| r.kernel_err_abs),
        }
    }
}

/// One row per step; Monte Carlo steps use stream keys `seed + j`.
pub fn convergence_report(seq: &ScalingSequence, tau: Tau, method: Method) -> Result<ConvergenceReport> {
    ball_only(seq)?;
    let z = p_star();
    let kernel_limit = kernel_siegel(2, &z)?;
    let limit_oracle = kobayashi_siegel_oracle(&z)?;
    let volume_limit = limit_oracle.exact_volume().unwrap_or(4.0 * PI * PI);
    let rows = with_pool(|| {
        (1..=seq.len())
            .into_par_iter()
            .map(|j| {
                let step_method = match method {
                    Method::Exact => Method::Exact,
                    Method::MonteCarlo { samples, seed } => {
                        Method::MonteCarlo { samples, seed: seed.wrapping_add(j as u64) }
                    }
                };
                let r = scaled_invariants(seq, j, tau, step_method)?;
                let oracle = scaled_metric(seq, j, &z)?;
                Ok(ReportRow {
                    j,
                    delta: seq.step(j)?.delta,
                    kernel: r.kernel,
                    kernel_err_abs: (r.kernel - kernel_limit).abs(),
                    vol: r.indicatrix_volume.value(),
                    vol_sigma: r.indicatrix_volume.std_error(),
                    f: r.f,
                    f_sigma: r.f_error,
                    radial_dist: radial_distance(&oracle, &limit_oracle, DEFAULT_DIRECTIONS)?,
                    bounding_radius: bounding_radius(&oracle, DEFAULT_DIRECTIONS)?,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(ConvergenceReport { rows, kernel_limit, volume_limit })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball_seq(count: usize) -> ScalingSequence {
        build_sequence(&DomainSpec::ball(2).unwrap(), &CPoint::real2(0.0, 1.0), count, 0.5).unwrap()
    }

    #[test]
    fn ball_sequence_geometry() {
        let seq = ball_seq(10);
        for (i, s) in seq.steps.iter().enumerate() {
            let j = i + 1;
            assert!(s.p.dist(&CPoint::real2(0.0, 1.0 - 0.5f64.powi(j as i32))) < 1e-15);
            assert!(s.zeta.dist(&seq.p0) < 1e-12);
            assert!((s.delta - 0.5f64.powi(j as i32)).abs() < 1e-12);
            assert!(s.composite.eval(&s.p).unwrap().dist(&p_star()) < 1e-10);
            assert!(scaled_contains(&seq, j, &p_star()).unwrap());
        }
    }

    #[test]
    fn ball_kernel_at_p_star() {
        let seq = ball_seq(8);
        for j in 1..=8 {
            let d = seq.step(j).unwrap().delta;
            let expected = 2.0 / (PI * PI * (2.0 - d).powi(3));
            assert!((scaled_kernel(&seq, j, &p_star()).unwrap() - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn exact_invariant_is_one() {
        let seq = ball_seq(6);
        for j in 1..=6 {
            let r = scaled_invariants(&seq, j, Tau::Kobayashi, Method::Exact).unwrap();
            assert!((r.f - 1.0).abs() < 1e-10, "j={j}: {}", r.f);
        }
    }

    #[test]
    fn egg_sequence_is_valid() {
        let mu = 0.25;
        let seq = build_sequence(&DomainSpec::egg(mu).unwrap(), &CPoint::real2(0.0, 1.0), 8, 0.5).unwrap();
        for (i, s) in seq.steps.iter().enumerate() {
            assert!(s.composite.eval(&s.p).unwrap().dist(&p_star()) < 1e-10);
            assert!((s.delta - mu * 0.5f64.powi(i as i32 + 1)).abs() < 1e-10);
        }
        assert!(scaled_invariants(&seq, 1, Tau::Kobayashi, Method::Exact).unwrap_err().is_capability());
    }

    #[test]
    fn weak_points_are_rejected() {
        let egg = DomainSpec::egg(0.25).unwrap();
        assert!(build_sequence(&egg, &CPoint::real2(1.0, 0.0), 3, 0.5).is_err());
        assert!(build_sequence(&DomainSpec::ball(2).unwrap(), &CPoint::real2(0.0, 1.0), 3, 1.5).is_err());
    }

    #[test]
    fn index_out_of_range() {
        let seq = ball_seq(3);
        assert!(scaled_contains(&seq, 0, &p_star()).is_err());
        assert!(scaled_contains(&seq, 4, &p_star()).is_err());
    }
}
