//! Infinitesimal invariant metrics `v ↦ τ(z, v)` at a fixed base point.
//!
//! On the ball and the Siegel domain the Kobayashi and Carathéodory metrics
//! coincide and are Hermitian norms, so their oracles carry the matrix and
//! expose exact indicatrix volumes. At the origin of a complete Reinhardt
//! domain the Kobayashi metric is the Minkowski gauge. On eggs away from the
//! origin only the two ellipsoid bounds are available.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{unit_ball_volume, DomainSpec};
use crate::error::{Error, Result};
use crate::point::CPoint;
use crate::transforms::HoloMap;

type CMat = DMatrix<Complex64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Kobayashi,
    Caratheodory,
    Gauge,
    EllipsoidBound,
    Synthetic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Exact,
    /// The oracle's indicatrix contains the true one.
    OuterBound,
    /// The oracle's indicatrix is contained in the true one.
    InnerBound,
}

/// Which invariant metric an indicatrix is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Tau {
    #[value(name = "k")]
    Kobayashi,
    #[value(name = "c")]
    Caratheodory,
    #[value(name = "a")]
    Azukawa,
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tau::Kobayashi => "k",
            Tau::Caratheodory => "c",
            Tau::Azukawa => "a",
        })
    }
}

pub type MetricFn = Arc<dyn Fn(&[Complex64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Evaluator {
    /// `τ(v) = (v* G v)^{1/2}` with `G` positive definite.
    Hermitian(CMat),
    /// Minkowski gauge of a bounded complete Reinhardt domain.
    Gauge(DomainSpec),
    /// `τ(v) = base(J v)`.
    Linear { base: Box<MetricOracle>, jacobian: CMat },
    /// `τ(v) = factor · base(v)`.
    Scaled { base: Box<MetricOracle>, factor: f64 },
    Custom(MetricFn),
}

impl fmt::Debug for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluator::Hermitian(g) => f.debug_tuple("Hermitian").field(g).finish(),
            Evaluator::Gauge(s) => f.debug_tuple("Gauge").field(s).finish(),
            Evaluator::Linear { base, jacobian } => {
                f.debug_struct("Linear").field("base", base).field("jacobian", jacobian).finish()
            }
            Evaluator::Scaled { base, factor } => {
                f.debug_struct("Scaled").field("base", base).field("factor", factor).finish()
            }
            Evaluator::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A positively homogeneous metric at a fixed base point. Oracles are
/// immutable and safe to evaluate from many threads.
#[derive(Clone, Debug)]
pub struct MetricOracle {
    pub base_point: CPoint,
    pub kind: MetricKind,
    pub provenance: Provenance,
    pub evaluator: Evaluator,
}

impl MetricOracle {
    pub fn hermitian(base_point: CPoint, kind: MetricKind, provenance: Provenance, g: CMat) -> Self {
        MetricOracle { base_point, kind, provenance, evaluator: Evaluator::Hermitian(g) }
    }

    pub fn custom(base_point: CPoint, f: MetricFn) -> Self {
        MetricOracle {
            base_point,
            kind: MetricKind::Synthetic,
            provenance: Provenance::Exact,
            evaluator: Evaluator::Custom(f),
        }
    }

    /// `factor · τ`, whose indicatrix is the original one shrunk by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        MetricOracle {
            evaluator: Evaluator::Scaled { base: Box::new(self.clone()), factor },
            ..self.clone()
        }
    }

    pub fn dim(&self) -> usize {
        self.base_point.dim()
    }

    pub fn eval(&self, v: &CPoint) -> Result<f64> {
        v.check_dim(self.dim())?;
        Ok(self.eval_raw(v.as_slice()))
    }

    /// Unchecked evaluation on a coordinate slice of the right length.
    pub fn eval_raw(&self, v: &[Complex64]) -> f64 {
        match &self.evaluator {
            Evaluator::Hermitian(g) => hermitian_norm(g, v),
            Evaluator::Gauge(spec) => {
                spec.minkowski_gauge(&CPoint::new(v.to_vec())).expect("gauge oracle on Reinhardt domain")
            }
            Evaluator::Linear { base, jacobian } => {
                let w: Vec<Complex64> = (0..jacobian.nrows())
                    .map(|i| (0..v.len()).map(|k| jacobian[(i, k)] * v[k]).sum())
                    .collect();
                base.eval_raw(&w)
            }
            Evaluator::Scaled { base, factor } => factor * base.eval_raw(v),
            Evaluator::Custom(f) => f(v),
        }
    }

    /// `τ(v) < 1`, short-circuiting the gauge bisection through the defining function.
    pub fn inside(&self, v: &[Complex64]) -> bool {
        match &self.evaluator {
            Evaluator::Gauge(spec @ DomainSpec::Egg { mu }) => {
                debug_assert_eq!(spec.dim(), v.len());
                v[0].norm_sqr() + v[1].norm_sqr().powf(*mu) < 1.0
            }
            _ => self.eval_raw(v) < 1.0,
        }
    }

    /// Exact Lebesgue volume of the indicatrix `{v : τ(v) < 1}` when known in closed form.
    pub fn exact_volume(&self) -> Option<f64> {
        let n = self.dim();
        match &self.evaluator {
            Evaluator::Hermitian(g) => {
                let det = g.determinant().re;
                (det > 0.0).then(|| unit_ball_volume(n) / det)
            }
            Evaluator::Gauge(spec) => spec.volume().ok(),
            Evaluator::Linear { base, jacobian } => {
                let det = jacobian.determinant().norm_sqr();
                (det > 0.0).then(|| base.exact_volume().map(|v| v / det)).flatten()
            }
            Evaluator::Scaled { base, factor } => {
                base.exact_volume().map(|v| v / factor.powi(2 * n as i32))
            }
            Evaluator::Custom(_) => None,
        }
    }
}

fn hermitian_norm(g: &CMat, v: &[Complex64]) -> f64 {
    let n = v.len();
    let mut acc = 0.0;
    for i in 0..n {
        let mut row = Complex64::new(0.0, 0.0);
        for k in 0..n {
            row += g[(i, k)] * v[k];
        }
        acc += (v[i].conj() * row).re;
    }
    acc.max(0.0).sqrt()
}

/// Kobayashi (= Carathéodory) metric of the unit ball,
/// `(|v|²/(1−|z|²) + |⟨z,v⟩|²/(1−|z|²)²)^{1/2}`.
pub fn kobayashi_ball(z: &CPoint, v: &CPoint) -> Result<f64> {
    v.check_dim(z.dim())?;
    let gap = ball_gap(z)?;
    let inner: Complex64 = z.as_slice().iter().zip(v.as_slice()).map(|(a, b)| a.conj() * b).sum();
    Ok((v.norm_sqr() / gap + inner.norm_sqr() / (gap * gap)).sqrt())
}

fn ball_gap(z: &CPoint) -> Result<f64> {
    let gap = 1.0 - z.norm_sqr();
    if gap > 0.0 {
        Ok(gap)
    } else {
        Err(Error::OutsideDomain(format!("{z} is not in the unit ball")))
    }
}

/// The ball metric at `z` as a Hermitian oracle, `G = I/g + z z*/g²` with `g = 1 − |z|²`.
pub fn kobayashi_ball_oracle(z: &CPoint) -> Result<MetricOracle> {
    let gap = ball_gap(z)?;
    let n = z.dim();
    let zv = z.as_vector();
    let g = CMat::identity(n, n) / Complex64::from(gap) + zv * zv.adjoint() / Complex64::from(gap * gap);
    Ok(MetricOracle::hermitian(z.clone(), MetricKind::Kobayashi, Provenance::Exact, g))
}

/// `k_{D∞}(z, v) = k_B(Ψ(z), dΨ(z) v)`.
pub fn kobayashi_siegel(z: &CPoint, v: &CPoint) -> Result<f64> {
    kobayashi_siegel_oracle(z)?.eval(v)
}

pub fn kobayashi_siegel_oracle(z: &CPoint) -> Result<MetricOracle> {
    let spec = DomainSpec::siegel(z.dim())?;
    if !spec.contains(z)? {
        return Err(Error::OutsideDomain(format!("{z} is not in the Siegel domain")));
    }
    let w = HoloMap::Cayley.eval(z)?;
    pullback_metric(&kobayashi_ball_oracle(&w)?, &HoloMap::Cayley, z)
}

/// Carathéodory metric on the ball or the Siegel domain, where it equals
/// the Kobayashi metric.
pub fn caratheodory_model(spec: &DomainSpec, z: &CPoint, v: &CPoint) -> Result<f64> {
    let mut oracle = match spec {
        DomainSpec::Ball { .. } => kobayashi_ball_oracle(z)?,
        DomainSpec::Siegel { .. } => kobayashi_siegel_oracle(z)?,
        other => {
            return Err(Error::Unsupported(format!(
                "no Carathéodory metric oracle for {other}; available on ball and siegel"
            )))
        }
    };
    oracle.kind = MetricKind::Caratheodory;
    oracle.eval(v)
}

/// Kobayashi metric at the origin of a bounded complete Reinhardt domain,
/// i.e. its Minkowski gauge.
pub fn gauge_metric(spec: &DomainSpec, v: &CPoint) -> Result<f64> {
    gauge_oracle(spec)?.eval(v)
}

pub fn gauge_oracle(spec: &DomainSpec) -> Result<MetricOracle> {
    if !spec.is_bounded() {
        return Err(Error::Unsupported(format!("gauge metric needs a bounded Reinhardt domain, got {spec}")));
    }
    Ok(MetricOracle {
        base_point: CPoint::zeros(spec.dim()),
        kind: MetricKind::Gauge,
        provenance: Provenance::Exact,
        evaluator: Evaluator::Gauge(spec.clone()),
    })
}

/// Gauge metric with an explicit base point; only the origin is supported.
pub fn gauge_metric_at(spec: &DomainSpec, z: &CPoint, v: &CPoint) -> Result<f64> {
    z.check_dim(spec.dim())?;
    if z.norm_sqr() != 0.0 {
        return Err(Error::Unsupported("gauge metric is the Kobayashi metric only at the origin".into()));
    }
    gauge_metric(spec, v)
}

/// `{|v₁|²/A + |v₂|²/B < 1}` in C².
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ellipsoid2C {
    pub a: f64,
    pub b: f64,
}

impl Ellipsoid2C {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!("ellipsoid axes must be positive, got A={a}, B={b}")));
        }
        Ok(Ellipsoid2C { a, b })
    }

    pub fn volume(&self) -> f64 {
        PI * PI / 2.0 * self.a * self.b
    }

    /// Axis-wise containment `self ⊆ other`.
    pub fn is_inside(&self, other: &Ellipsoid2C) -> bool {
        self.a <= other.a && self.b <= other.b
    }

    /// The metric whose indicatrix is this ellipsoid.
    pub fn oracle(&self, base_point: CPoint, provenance: Provenance) -> MetricOracle {
        let g = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::from(1.0 / self.a),
            Complex64::from(1.0 / self.b),
        ]));
        MetricOracle::hermitian(base_point, MetricKind::EllipsoidBound, provenance, g)
    }
}

/// `1 − p^{2μ}` without cancellation near `p = 1`.
pub(crate) fn one_minus_pow(p: f64, e: f64) -> f64 {
    -(e * p.ln()).exp_m1()
}

fn check_axis(mu: f64, p: f64) -> Result<()> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidParameter(format!("egg exponent must be positive, got {mu}")));
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::OutsideDomain(format!("axis parameter p = {p} not in [0, 1)")));
    }
    Ok(())
}

/// Ellipsoid containing the Kobayashi indicatrix of `E_{2μ}` at `(0, p)`:
/// `A = 1 − p^{2μ}`, `B = (1 − p²)²`.
pub fn wu_outer_ellipsoid(mu: f64, p: f64) -> Result<Ellipsoid2C> {
    check_axis(mu, p)?;
    let a = if p == 0.0 { 1.0 } else { one_minus_pow(p, 2.0 * mu) };
    let b = one_minus_pow(p, 2.0).powi(2);
    Ellipsoid2C::new(a, b)
}

/// Ellipsoid contained in the Kobayashi indicatrix of `E_{2μ}` at `(0, p)`
/// for `μ < 1/2`: `A = 1 − p^{2μ}`, `B = (1 − p^{2μ})² / (μ² p^{2μ−2})`.
pub fn inscribed_ellipsoid(mu: f64, p: f64) -> Result<Ellipsoid2C> {
    check_axis(mu, p)?;
    if mu >= 0.5 {
        return Err(Error::Hypothesis(format!("inscribed ellipsoid needs mu < 1/2, got {mu}")));
    }
    if p == 0.0 {
        return Err(Error::InvalidParameter("inscribed ellipsoid degenerates at p = 0".into()));
    }
    let a = one_minus_pow(p, 2.0 * mu);
    let b = a * a / (mu * mu * p.powf(2.0 * mu - 2.0));
    Ellipsoid2C::new(a, b)
}

/// `v ↦ base(map(z), d map(z) v)`; `base` must sit at `map(z)`.
pub fn pullback_metric(base: &MetricOracle, map: &HoloMap, z: &CPoint) -> Result<MetricOracle> {
    let image = map.eval(z)?;
    let tol = 1e-9 * (1.0 + image.norm());
    if image.dist(&base.base_point) > tol {
        return Err(Error::InvalidParameter(format!(
            "base oracle sits at {} but the map sends {z} to {image}",
            base.base_point
        )));
    }
    let jac = map.jacobian(z)?;
    let evaluator = match &base.evaluator {
        Evaluator::Hermitian(g) => Evaluator::Hermitian(jac.adjoint() * g * &jac),
        _ => Evaluator::Linear { base: Box::new(base.clone()), jacobian: jac },
    };
    Ok(MetricOracle { base_point: z.clone(), kind: base.kind, provenance: base.provenance, evaluator })
}

/// The metric oracle for `(spec, z, τ)`, or a capability error listing what exists.
pub fn metric_oracle(spec: &DomainSpec, z: &CPoint, tau: Tau) -> Result<MetricOracle> {
    z.check_dim(spec.dim())?;
    let kind = match tau {
        Tau::Kobayashi => MetricKind::Kobayashi,
        Tau::Caratheodory | Tau::Azukawa => MetricKind::Caratheodory,
    };
    let mut oracle = match spec {
        DomainSpec::Ball { .. } => kobayashi_ball_oracle(z)?,
        DomainSpec::Siegel { .. } => kobayashi_siegel_oracle(z)?,
        DomainSpec::Egg { mu } if *mu == 1.0 => kobayashi_ball_oracle(z)?,
        DomainSpec::Egg { mu } => {
            if z.norm_sqr() != 0.0 {
                return Err(Error::Unsupported(format!(
                    "no exact metric on {spec} away from the origin; use the ellipsoid bracket (egg-bounds)"
                )));
            }
            if tau != Tau::Kobayashi && *mu < 0.5 {
                return Err(Error::Unsupported(format!(
                    "{tau} indicatrix of the non-convex {spec} is not available; only k at the origin"
                )));
            }
            gauge_oracle(spec)?
        }
        DomainSpec::Scaled { .. } => {
            return Err(Error::Unsupported(
                "metrics on scaled domains come from the scaling pipeline".into(),
            ))
        }
    };
    if oracle.kind != MetricKind::Gauge {
        oracle.kind = kind;
    }
    Ok(oracle)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ball_metric_examples() {
        let v = CPoint::c2(c(0.3, -0.4), c(1.2, 0.5));
        assert!((kobayashi_ball(&CPoint::zeros(2), &v).unwrap() - v.norm()).abs() < 1e-15);
        for p in [0.1, 0.5, 0.9] {
            let z = CPoint::real2(0.0, p);
            let normal = kobayashi_ball(&z, &CPoint::real2(0.0, 1.0)).unwrap();
            assert!((normal - 1.0 / (1.0 - p * p)).abs() < 1e-12);
            let tangent = kobayashi_ball(&z, &CPoint::real2(1.0, 0.0)).unwrap();
            assert!((tangent - (1.0 - p * p).powf(-0.5)).abs() < 1e-12);
        }
        assert!(kobayashi_ball(&CPoint::real2(1.0, 0.0), &v).is_err());
    }

    #[test]
    fn hermitian_oracle_matches_formula() {
        let z = CPoint::c2(c(0.2, 0.1), c(-0.3, 0.5));
        let oracle = kobayashi_ball_oracle(&z).unwrap();
        for v in [CPoint::real2(1.0, 0.0), CPoint::c2(c(0.5, -0.7), c(0.1, 2.0))] {
            let a = oracle.eval(&v).unwrap();
            let b = kobayashi_ball(&z, &v).unwrap();
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn siegel_metric_at_anchor() {
        let p = CPoint::real2(0.0, -1.0);
        let a = kobayashi_siegel(&p, &CPoint::real2(1.0, 0.0)).unwrap();
        assert!((a - 0.5f64.sqrt()).abs() < 1e-15);
        let b = kobayashi_siegel(&p, &CPoint::real2(0.0, 1.0)).unwrap();
        assert!((b - 0.5).abs() < 1e-15);
        let vol = kobayashi_siegel_oracle(&p).unwrap().exact_volume().unwrap();
        assert!((vol - 4.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn caratheodory_equals_kobayashi_on_models() {
        let v = CPoint::c2(c(0.3, 0.2), c(-0.1, 0.9));
        let z = CPoint::c2(c(0.1, 0.0), c(0.2, -0.3));
        let ball = DomainSpec::ball(2).unwrap();
        assert_eq!(caratheodory_model(&ball, &z, &v).unwrap(), kobayashi_ball(&z, &v).unwrap());
        let s = CPoint::c2(c(0.4, 0.1), c(-0.5, 2.0));
        let siegel = DomainSpec::siegel(2).unwrap();
        assert_eq!(caratheodory_model(&siegel, &s, &v).unwrap(), kobayashi_siegel(&s, &v).unwrap());
        let egg = DomainSpec::egg(0.3).unwrap();
        assert!(matches!(caratheodory_model(&egg, &CPoint::zeros(2), &v), Err(Error::Unsupported(_))));
    }

    #[test]
    fn gauge_metric_examples() {
        let ball = DomainSpec::ball(2).unwrap();
        let v = CPoint::c2(c(0.3, 0.4), c(-1.0, 0.0));
        assert_eq!(gauge_metric(&ball, &v).unwrap(), v.norm());
        let egg = DomainSpec::egg(0.25).unwrap();
        let g = gauge_metric(&egg, &CPoint::c2(c(0.0, -0.7), c(0.0, 0.0))).unwrap();
        assert!((g - 0.7).abs() < 1e-12);
        let d = gauge_metric(&egg, &CPoint::real2(1.0, 1.0)).unwrap();
        assert_eq!(d, egg.minkowski_gauge(&CPoint::real2(1.0, 1.0)).unwrap());
        assert!(gauge_metric_at(&egg, &CPoint::real2(0.0, 0.1), &v).is_err());
    }

    #[test]
    fn ellipsoid_formulas() {
        let wu = wu_outer_ellipsoid(0.25, 0.0).unwrap();
        assert_eq!((wu.a, wu.b), (1.0, 1.0));
        assert!((wu.volume() - PI * PI / 2.0).abs() < 1e-15);
        let wu = wu_outer_ellipsoid(0.25, 0.5).unwrap();
        assert!((wu.a - (1.0 - 0.5f64.sqrt())).abs() < 1e-15);
        assert!((wu.b - 0.5625).abs() < 1e-15);
        for p in [0.1, 0.4, 0.8] {
            let mu = 0.3;
            let wu = wu_outer_ellipsoid(mu, p).unwrap();
            let expected = PI * PI / 2.0 * (1.0 - p * p).powi(2) * (1.0 - p.powf(2.0 * mu));
            assert!((wu.volume() - expected).abs() < 1e-14);
            let inner = inscribed_ellipsoid(mu, p).unwrap();
            let expected = PI * PI / 2.0 * (1.0 - p.powf(2.0 * mu)).powi(3) / (mu * mu * p.powf(2.0 * mu - 2.0));
            assert!((inner.volume() - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn inscribed_ellipsoid_inside_wu() {
        for p in [0.3, 0.6, 0.9] {
            let inner = inscribed_ellipsoid(0.25, p).unwrap();
            let outer = wu_outer_ellipsoid(0.25, p).unwrap();
            assert!(inner.is_inside(&outer), "p={p}: {inner:?} vs {outer:?}");
        }
    }

    #[test]
    fn inscribed_volume_vanishes_at_zero() {
        let v = inscribed_ellipsoid(0.25, 1e-8).unwrap().volume();
        assert!(v < 1e-10);
        assert!(inscribed_ellipsoid(0.25, 0.0).is_err());
        assert!(matches!(inscribed_ellipsoid(0.5, 0.3), Err(Error::Hypothesis(_))));
        assert!(wu_outer_ellipsoid(0.25, 1.0).is_err());
    }

    #[test]
    fn pullback_by_identity_and_cayley() {
        let z = CPoint::c2(c(0.1, 0.2), c(0.3, -0.1));
        let base = kobayashi_ball_oracle(&z).unwrap();
        let same = pullback_metric(&base, &HoloMap::identity(2), &z).unwrap();
        let v = CPoint::c2(c(1.0, 0.5), c(-0.3, 0.2));
        assert!((same.eval(&v).unwrap() - base.eval(&v).unwrap()).abs() < 1e-15);

        let p = CPoint::real2(0.0, -1.0);
        let ball0 = kobayashi_ball_oracle(&CPoint::zeros(2)).unwrap();
        let pulled = pullback_metric(&ball0, &HoloMap::Cayley, &p).unwrap();
        assert!((pulled.eval(&v).unwrap() - kobayashi_siegel(&p, &v).unwrap()).abs() < 1e-15);
        // wrong base point
        assert!(pullback_metric(&base, &HoloMap::Cayley, &p).is_err());
    }

    #[test]
    fn capability_dispatch() {
        let egg = DomainSpec::egg(0.25).unwrap();
        assert!(metric_oracle(&egg, &CPoint::zeros(2), Tau::Kobayashi).is_ok());
        let err = metric_oracle(&egg, &CPoint::real2(0.0, 0.5), Tau::Kobayashi).unwrap_err();
        assert!(err.is_capability());
        assert!(metric_oracle(&egg, &CPoint::zeros(2), Tau::Caratheodory).unwrap_err().is_capability());
        let convex = DomainSpec::egg(0.75).unwrap();
        assert!(metric_oracle(&convex, &CPoint::zeros(2), Tau::Caratheodory).is_ok());
    }
}
