//! The invariant `F^τ_D(z) = K_D(z) · λ(I^τ_D(z))` and the bounds around it.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bergman::{kernel_egg_axis, KernelOracle};
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::indicatrix::{mc_volume, VolumeEstimate};
use crate::metrics::{inscribed_ellipsoid, metric_oracle, one_minus_pow, wu_outer_ellipsoid, Ellipsoid2C, MetricOracle, Provenance, Tau};
use crate::point::CPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    Exact,
    #[serde(rename = "mc")]
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndicatrixVolume {
    Exact(f64),
    Estimate(VolumeEstimate),
}

impl IndicatrixVolume {
    pub fn value(&self) -> f64 {
        match self {
            IndicatrixVolume::Exact(v) => *v,
            IndicatrixVolume::Estimate(e) => e.value,
        }
    }

    pub fn std_error(&self) -> f64 {
        match self {
            IndicatrixVolume::Exact(_) => 0.0,
            IndicatrixVolume::Estimate(e) => e.std_error,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuitaResult {
    pub kernel: f64,
    pub indicatrix_volume: IndicatrixVolume,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "F_error")]
    pub f_error: f64,
    pub tau: Tau,
    pub notes: Vec<String>,
}

impl SuitaResult {
    /// Product of an exact kernel value and a volume; the error is the volume
    /// error scaled by the kernel.
    pub fn assemble(kernel: f64, volume: IndicatrixVolume, tau: Tau, notes: Vec<String>) -> Self {
        SuitaResult {
            kernel,
            f: kernel * volume.value(),
            f_error: kernel * volume.std_error(),
            indicatrix_volume: volume,
            tau,
            notes,
        }
    }
}

/// Indicatrix volume of `oracle` by the requested method.
pub fn indicatrix_volume(oracle: &MetricOracle, method: Method) -> Result<IndicatrixVolume> {
    match method {
        Method::Exact => oracle.exact_volume().map(IndicatrixVolume::Exact).ok_or_else(|| {
            Error::Unsupported("no closed-form indicatrix volume for this oracle; use the mc method".into())
        }),
        Method::MonteCarlo { samples, seed } => mc_volume(oracle, samples, seed).map(IndicatrixVolume::Estimate),
    }
}

/// `F^τ_D(z)` where both a kernel oracle and a metric oracle exist.
pub fn suita_invariant(spec: &DomainSpec, z: &CPoint, tau: Tau, method: Method) -> Result<SuitaResult> {
    if !spec.contains(z)? {
        return Err(Error::OutsideDomain(format!("{z} is not in {spec}")));
    }
    let oracle = metric_oracle(spec, z, tau)?;
    let kernel = KernelOracle::closed_form(spec.clone()).eval(z)?;
    let volume = indicatrix_volume(&oracle, method)?;
    let mut notes = vec![format!("domain {spec}, point {z}")];
    if tau == Tau::Azukawa {
        notes.push("Azukawa indicatrix equals the Kobayashi one here since c = k".into());
    }
    Ok(SuitaResult::assemble(kernel, volume, tau, notes))
}

/// A point value, or an ellipsoid bracket where only bounds exist.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evaluation {
    Point(SuitaResult),
    Bracket(SegmentRow),
}

/// Like [`suita_invariant`], but eggs with `μ < 1/2` on the segment `(0, p)`,
/// `p ≠ 0`, give the bracket `[K × inscribed volume, K × Wu volume]`.
pub fn evaluate(spec: &DomainSpec, z: &CPoint, tau: Tau, method: Method) -> Result<Evaluation> {
    if let DomainSpec::Egg { mu } = spec {
        z.check_dim(2)?;
        let on_segment = z[0] == Complex64::new(0.0, 0.0) && z[1] != Complex64::new(0.0, 0.0);
        if *mu < 0.5 && on_segment && tau == Tau::Kobayashi {
            if !spec.contains(z)? {
                return Err(Error::OutsideDomain(format!("{z} is not in {spec}")));
            }
            return segment_row(*mu, z[1].norm()).map(Evaluation::Bracket);
        }
    }
    suita_invariant(spec, z, tau, method).map(Evaluation::Point)
}

/// Bounds on `F_{E_{2μ}}(0, p)` for `μ < 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
    pub mu: f64,
    pub p: f64,
}

fn check_bound_hypotheses(mu: f64, p: f64) -> Result<()> {
    if !(mu > 0.0) {
        return Err(Error::InvalidParameter(format!("egg exponent must be positive, got {mu}")));
    }
    if mu >= 0.5 {
        return Err(Error::Hypothesis(format!("bounds need 0 < mu < 1/2, got {mu}")));
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::OutsideDomain(format!("axis parameter p = {p} not in [0, 1)")));
    }
    Ok(())
}

/// Upper bound `(1/μ)(1−p^{2μ})/(1−p²) − ((1−μ)/(2μ))(1−p^{2μ})` and lower
/// bound `(p^{2−2μ}/(2μ³)) ((1−p^{2μ})/(1−p²))³ (1 + μ + p² − μp²)`.
/// At `p = 0` the lower bound is the trivial `0`.
pub fn egg_axis_bounds(mu: f64, p: f64) -> Result<BoundPair> {
    check_bound_hypotheses(mu, p)?;
    let (s, ratio) = if p == 0.0 {
        (1.0, 1.0)
    } else {
        let s = one_minus_pow(p, 2.0 * mu);
        (s, s / one_minus_pow(p, 2.0))
    };
    let upper = ratio / mu - (1.0 - mu) / (2.0 * mu) * s;
    let lower = if p == 0.0 {
        0.0
    } else {
        p.powf(2.0 - 2.0 * mu) / (2.0 * mu.powi(3)) * ratio.powi(3) * (1.0 + mu + p * p - mu * p * p)
    };
    Ok(BoundPair { lower, upper, mu, p })
}

/// `K(0,p) × vol(Wu ellipsoid)`.
pub fn upper_by_factorization(mu: f64, p: f64) -> Result<f64> {
    Ok(kernel_egg_axis(mu, p)? * wu_outer_ellipsoid(mu, p)?.volume())
}

/// `K(0,p) × vol(inscribed ellipsoid)`.
pub fn lower_by_factorization(mu: f64, p: f64) -> Result<f64> {
    Ok(kernel_egg_axis(mu, p)? * inscribed_ellipsoid(mu, p)?.volume())
}

/// Ellipsoid metric at `(0, p)` whose `B` axis interpolates geometrically
/// between the inscribed (`t = 0`) and Wu (`t = 1`) ellipsoids.
pub fn synthetic_egg_oracle(mu: f64, p: f64, t: f64) -> Result<MetricOracle> {
    let inner = inscribed_ellipsoid(mu, p)?;
    let outer = wu_outer_ellipsoid(mu, p)?;
    let t = t.clamp(0.0, 1.0);
    let a = inner.a.powf(1.0 - t) * outer.a.powf(t);
    let b = inner.b.powf(1.0 - t) * outer.b.powf(t);
    let mut oracle = Ellipsoid2C::new(a, b)?.oracle(CPoint::real2(0.0, p), Provenance::Exact);
    oracle.kind = crate::metrics::MetricKind::Synthetic;
    Ok(oracle)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub bounds: BoundPair,
    #[serde(rename = "F")]
    pub f: f64,
    pub sigma: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

/// Checks `lower ≤ F + 3σ` and `F − 3σ ≤ upper` for an estimate of `F` at `(0, p)`.
pub fn bound_consistency(mu: f64, p: f64, result: &SuitaResult) -> Result<BoundReport> {
    let bounds = egg_axis_bounds(mu, p)?;
    let (f, sigma) = (result.f, result.f_error);
    Ok(BoundReport {
        bounds,
        f,
        sigma,
        lower_ok: bounds.lower <= f + 3.0 * sigma,
        upper_ok: f - 3.0 * sigma <= bounds.upper,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BzReport {
    pub applicable: bool,
    /// `C = 4` on convex domains.
    pub constant: Option<f64>,
    #[serde(rename = "F")]
    pub f: f64,
    pub sigma: f64,
    pub passed: bool,
    pub note: String,
}

/// `1 ≤ F ≤ Cⁿ` on convex domains, with 3σ slack for estimates.
pub fn bz_sandwich(spec: &DomainSpec, result: &SuitaResult) -> BzReport {
    let (f, sigma) = (result.f, result.f_error);
    if !spec.is_convex() {
        return BzReport {
            applicable: false,
            constant: None,
            f,
            sigma,
            passed: false,
            note: format!("{spec} is not convex; the sandwich does not apply"),
        };
    }
    let c: f64 = 4.0;
    let upper = c.powi(spec.dim() as i32);
    let passed = 1.0 - 3.0 * sigma - 1e-12 <= f && f <= upper + 3.0 * sigma;
    BzReport {
        applicable: true,
        constant: Some(c),
        f,
        sigma,
        passed,
        note: format!("checked 1 <= F <= {upper}"),
    }
}

/// Egg bracket at one point of the representative segment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SegmentRow {
    pub mu: f64,
    pub p: f64,
    pub kernel: f64,
    pub vol_lower: Option<f64>,
    pub vol_upper: Option<f64>,
    pub f_lower: Option<f64>,
    pub f_upper: Option<f64>,
    pub applicable: bool,
}

pub const SEGMENT_HEADER: &str = "mu,p,kernel,vol_lower,vol_upper,F_lower,F_upper";

pub fn segment_row(mu: f64, p: f64) -> Result<SegmentRow> {
    let kernel = kernel_egg_axis(mu, p)?;
    if mu >= 0.5 {
        return Ok(SegmentRow { mu, p, kernel, vol_lower: None, vol_upper: None, f_lower: None, f_upper: None, applicable: false });
    }
    let bounds = egg_axis_bounds(mu, p)?;
    let vol_upper = wu_outer_ellipsoid(mu, p)?.volume();
    let vol_lower = if p > 0.0 { Some(inscribed_ellipsoid(mu, p)?.volume()) } else { None };
    Ok(SegmentRow {
        mu,
        p,
        kernel,
        vol_lower,
        vol_upper: Some(vol_upper),
        f_lower: vol_lower.map(|_| bounds.lower),
        f_upper: Some(bounds.upper),
        applicable: true,
    })
}

pub fn segment_scan(mus: &[f64], ps: &[f64]) -> Result<Vec<SegmentRow>> {
    let mut rows = Vec::with_capacity(mus.len() * ps.len());
    for &mu in mus {
        for &p in ps {
            rows.push(segment_row(mu, p)?);
        }
    }
    Ok(rows)
}

fn cell(v: Option<f64>, applicable: bool) -> String {
    match (v, applicable) {
        (Some(x), _) => format!("{x:e}"),
        (None, true) => String::new(),
        (None, false) => "inapplicable".into(),
    }
}

pub fn segment_csv(rows: &[SegmentRow]) -> String {
    let mut out = String::from(SEGMENT_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{:e},{},{},{},{}",
            r.mu,
            r.p,
            r.kernel,
            cell(r.vol_lower, r.applicable),
            cell(r.vol_upper, r.applicable),
            cell(r.f_lower, r.applicable),
            cell(r.f_upper, r.applicable),
        )
        .unwrap();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ScanRow {
    Point {
        dist: f64,
        #[serde(rename = "F")]
        f: f64,
        #[serde(rename = "F_err")]
        f_err: f64,
    },
    Bracket {
        dist: f64,
        #[serde(rename = "F_lower")]
        lower: f64,
        #[serde(rename = "F_upper")]
        upper: f64,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryScan {
    pub target: CPoint,
    pub rows: Vec<ScanRow>,
}

impl BoundaryScan {
    pub fn to_csv(&self) -> String {
        let brackets = self.rows.iter().any(|r| matches!(r, ScanRow::Bracket { .. }));
        let mut out =
            String::from(if brackets { "dist,F_lower,F_upper\n" } else { "dist,F,F_err\n" });
        for r in &self.rows {
            match *r {
                ScanRow::Point { dist, f, f_err } if brackets => {
                    writeln!(out, "{dist:e},{:e},{:e}", f - 3.0 * f_err, f + 3.0 * f_err).unwrap()
                }
                ScanRow::Point { dist, f, f_err } => writeln!(out, "{dist:e},{f:e},{f_err:e}").unwrap(),
                ScanRow::Bracket { dist, lower, upper } => writeln!(out, "{dist:e},{lower:e},{upper:e}").unwrap(),
            }
        }
        out
    }
}

/// `F` (or a bracket for it) at interior points approaching `target`; the
/// `dist` column is the Euclidean distance to `target`.
pub fn boundary_limit_scan(
    spec: &DomainSpec,
    target: &CPoint,
    points: &[CPoint],
    tau: Tau,
    method: Method,
) -> Result<BoundaryScan> {
    let rows = points
        .iter()
        .map(|z| {
            let dist = z.dist(target);
            match spec {
                DomainSpec::Egg { mu } if *mu != 1.0 && z.norm_sqr() != 0.0 => {
                    if z[0] != Complex64::new(0.0, 0.0) {
                        return Err(Error::Unsupported(format!(
                            "egg brackets are only available on the segment (0, p); got {z}"
                        )));
                    }
                    if tau != Tau::Kobayashi {
                        return Err(Error::Unsupported("egg brackets bound the Kobayashi indicatrix only".into()));
                    }
                    let b = egg_axis_bounds(*mu, z[1].norm())?;
                    Ok(ScanRow::Bracket { dist, lower: b.lower, upper: b.upper })
                }
                _ => {
                    let r = suita_invariant(spec, z, tau, method)?;
                    Ok(ScanRow::Point { dist, f: r.f, f_err: r.f_error })
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryScan { target: target.clone(), rows })
}

/// Egg points `(0, 1 − 2^{−j})`, `j = 1..=count`.
pub fn dyadic_axis_points(count: usize) -> Vec<CPoint> {
    (1..=count).map(|j| CPoint::real2(0.0, 1.0 - 0.5f64.powi(j as i32))).collect()
}

/// What the segment scan says about the range `F(S)` on an egg.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitNote {
    pub mu: f64,
    pub rows: Vec<SegmentRow>,
    /// `F = 1` at the origin, so `1 ∈ F(S)`.
    pub contains_one: bool,
    pub upper_at_origin_limit: Option<f64>,
    pub max_lower: Option<f64>,
    pub min_upper: Option<f64>,
    /// Some bracket excludes 1, which with `F(0) = 1` proves `F` is not
    /// constant on the segment.
    pub proven_nonconstant: bool,
    pub statement: String,
}

/// Scan of the representative segment and the conclusion it supports about
/// boundary limits at the weakly pseudoconvex points.
pub fn orbit_value_note(mu: f64, ps: &[f64]) -> Result<OrbitNote> {
    if !(mu > 0.0) {
        return Err(Error::InvalidParameter(format!("egg exponent must be positive, got {mu}")));
    }
    if mu >= 0.5 {
        return Ok(OrbitNote {
            mu,
            rows: Vec::new(),
            contains_one: true,
            upper_at_origin_limit: None,
            max_lower: None,
            min_upper: None,
            proven_nonconstant: false,
            statement: format!(
                "mu = {mu} gives a convex egg; closed forms for F there are not computed by this tool. F = 1 at the origin."
            ),
        });
    }
    let rows = segment_scan(&[mu], ps)?;
    let max_lower = rows.iter().filter_map(|r| r.f_lower).fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
    let min_upper = rows
        .iter()
        .filter(|r| r.p > 0.0)
        .filter_map(|r| r.f_upper)
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v))));
    let margin = 1e-12;
    let proven = max_lower.is_some_and(|v| v > 1.0 + margin) || min_upper.is_some_and(|v| v < 1.0 - margin);
    let upper0 = (1.0 + mu) / (2.0 * mu);
    let statement = if proven {
        format!(
            "proven: some bracket on the segment excludes 1 while F(0,0) = 1, so F is not constant on E_{{2mu}} (mu = {mu}); \
             every neighbourhood of a weakly pseudoconvex boundary point attains all of F(S), so F has no limit there"
        )
    } else {
        format!(
            "not proven: every bracket on the scanned segment contains 1 (max lower bound {:.12}, min upper bound {:.12}); \
             the upper bound near p = 0 is {upper0} and both bounds tend to 1 as p -> 1, which only suggests a non-constant range",
            max_lower.unwrap_or(f64::NAN),
            min_upper.unwrap_or(f64::NAN)
        )
    };
    Ok(OrbitNote {
        mu,
        rows,
        contains_one: true,
        upper_at_origin_limit: Some(upper0),
        max_lower,
        min_upper,
        proven_nonconstant: proven,
        statement,
    })
}
