//! Model domains: the unit ball, the egg domains `E_{2μ}`, the Siegel
//! domain, and biholomorphic images of these.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::CPoint;
use crate::transforms::HoloMap;

/// A model domain in C^n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DomainRepr", into = "DomainRepr")]
pub enum DomainSpec {
    /// `{|z|² < 1}`.
    Ball { n: usize },
    /// `{|z₁|² + |z₂|^{2μ} < 1}` in C².
    Egg { mu: f64 },
    /// `{2 Re z_n + |'z|² < 0}`.
    Siegel { n: usize },
    /// `{z : map(z) ∈ base}`, where `map` is a biholomorphism onto `base`.
    Scaled { base: Box<DomainSpec>, map: HoloMap },
}

#[derive(Serialize, Deserialize)]
struct DomainRepr {
    variant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<Box<DomainSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    map: Option<HoloMap>,
}

impl From<DomainSpec> for DomainRepr {
    fn from(d: DomainSpec) -> Self {
        let blank = DomainRepr { variant: String::new(), n: None, mu: None, base: None, map: None };
        match d {
            DomainSpec::Ball { n } => DomainRepr { variant: "ball".into(), n: Some(n), ..blank },
            DomainSpec::Egg { mu } => DomainRepr { variant: "egg".into(), n: Some(2), mu: Some(mu), ..blank },
            DomainSpec::Siegel { n } => DomainRepr { variant: "siegel".into(), n: Some(n), ..blank },
            DomainSpec::Scaled { base, map } => {
                let n = Some(base.dim());
                DomainRepr { variant: "scaled".into(), n, base: Some(base), map: Some(map), ..blank }
            }
        }
    }
}

impl TryFrom<DomainRepr> for DomainSpec {
    type Error = Error;

    fn try_from(r: DomainRepr) -> Result<Self> {
        match r.variant.as_str() {
            "ball" => DomainSpec::ball(r.n.unwrap_or(2)),
            "siegel" => DomainSpec::siegel(r.n.unwrap_or(2)),
            "egg" => {
                if let Some(n) = r.n {
                    if n != 2 {
                        return Err(Error::DimensionMismatch { expected: 2, got: n });
                    }
                }
                let mu = r.mu.ok_or_else(|| Error::InvalidParameter("egg needs `mu`".into()))?;
                DomainSpec::egg(mu)
            }
            "scaled" => match (r.base, r.map) {
                (Some(base), Some(map)) => Ok(DomainSpec::Scaled { base, map }),
                _ => Err(Error::InvalidParameter("scaled domain needs `base` and `map`".into())),
            },
            other => Err(Error::InvalidParameter(format!("unknown domain variant `{other}`"))),
        }
    }
}

impl std::fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DomainSpec::Ball { n } => write!(f, "Ball({n})"),
            DomainSpec::Egg { mu } => write!(f, "Egg(mu={mu})"),
            DomainSpec::Siegel { n } => write!(f, "Siegel({n})"),
            DomainSpec::Scaled { base, .. } => write!(f, "Scaled({base})"),
        }
    }
}

impl DomainSpec {
    pub fn ball(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        Ok(DomainSpec::Ball { n })
    }

    pub fn egg(mu: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!("egg exponent must be positive, got {mu}")));
        }
        Ok(DomainSpec::Egg { mu })
    }

    pub fn siegel(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        Ok(DomainSpec::Siegel { n })
    }

    /// The image of `base` under the inverse of `to_base`.
    pub fn scaled(base: DomainSpec, to_base: HoloMap) -> Self {
        DomainSpec::Scaled { base: Box::new(base), map: to_base }
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Ball { n } | DomainSpec::Siegel { n } => *n,
            DomainSpec::Egg { .. } => 2,
            DomainSpec::Scaled { base, .. } => base.dim(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, DomainSpec::Ball { .. } | DomainSpec::Egg { .. })
    }

    pub fn is_convex(&self) -> bool {
        match self {
            DomainSpec::Ball { .. } | DomainSpec::Siegel { .. } => true,
            DomainSpec::Egg { mu } => *mu >= 0.5,
            DomainSpec::Scaled { .. } => false,
        }
    }

    /// Negative inside, zero on the boundary, positive outside.
    pub fn defining_value(&self, z: &CPoint) -> Result<f64> {
        z.check_dim(self.dim())?;
        Ok(match self {
            DomainSpec::Ball { .. } => z.norm_sqr() - 1.0,
            DomainSpec::Egg { mu } => z[0].norm_sqr() + z[1].norm_sqr().powf(*mu) - 1.0,
            DomainSpec::Siegel { .. } => {
                2.0 * z.last().re + z.head().iter().map(|c| c.norm_sqr()).sum::<f64>()
            }
            DomainSpec::Scaled { base, map } => base.defining_value(&map.eval(z)?)?,
        })
    }

    /// Membership by the strict defining inequality; boundary points are outside.
    pub fn contains(&self, z: &CPoint) -> Result<bool> {
        match self.defining_value(z) {
            Ok(v) => Ok(v < 0.0),
            // The Cayley pole lies outside the domains it is used on.
            Err(Error::Pole(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Lebesgue volume in R^{2n}.
    pub fn volume(&self) -> Result<f64> {
        match self {
            DomainSpec::Ball { n } => Ok(unit_ball_volume(*n)),
            DomainSpec::Egg { mu } => Ok(PI * PI * mu / (mu + 1.0)),
            DomainSpec::Siegel { .. } => Err(Error::Unbounded("the Siegel domain has infinite volume".into())),
            DomainSpec::Scaled { .. } => Err(Error::Unsupported("volume of a scaled domain".into())),
        }
    }

    /// Radii `(r_in, r_out)` of the largest centred ball inside and the
    /// smallest centred ball containing a bounded Reinhardt domain.
    pub fn radial_bounds(&self) -> Result<(f64, f64)> {
        match self {
            DomainSpec::Ball { .. } => Ok((1.0, 1.0)),
            DomainSpec::Egg { mu } => {
                // Extremes of |z|² = 1 − r^{2μ} + r² over r ∈ [0, 1].
                let interior = if (*mu - 1.0).abs() < 1e-12 {
                    1.0
                } else {
                    1.0 - mu.powf(mu / (1.0 - mu)) + mu.powf(1.0 / (1.0 - mu))
                };
                let lo = interior.min(1.0).sqrt();
                let hi = interior.max(1.0).sqrt();
                Ok((lo, hi))
            }
            _ => Err(Error::Unsupported(format!("radial bounds of {self}"))),
        }
    }

    /// Minkowski gauge of a bounded complete Reinhardt domain: the `t ≥ 0`
    /// with `v / t` on the boundary.
    pub fn minkowski_gauge(&self, v: &CPoint) -> Result<f64> {
        v.check_dim(self.dim())?;
        let norm = v.norm();
        match self {
            DomainSpec::Ball { .. } => Ok(norm),
            DomainSpec::Egg { mu } => {
                if norm == 0.0 {
                    return Ok(0.0);
                }
                let a = v[0].norm_sqr() / (norm * norm);
                let b = v[1].norm_sqr() / (norm * norm);
                Ok(norm * egg_unit_gauge(*mu, a, b))
            }
            _ => Err(Error::Unsupported(format!(
                "Minkowski gauge needs a bounded complete Reinhardt domain, got {self}"
            ))),
        }
    }

    /// Holomorphic gradient `(∂ρ/∂z_k)`. The real gradient of `ρ` is
    /// `2 conj(∂ρ)`.
    pub fn wirtinger_gradient(&self, z: &CPoint) -> Result<DVector<Complex64>> {
        z.check_dim(self.dim())?;
        let n = self.dim();
        match self {
            DomainSpec::Ball { .. } => Ok(z.as_vector().map(|c| c.conj())),
            DomainSpec::Siegel { .. } => {
                let mut g = z.as_vector().map(|c| c.conj());
                g[n - 1] = Complex64::new(1.0, 0.0);
                Ok(g)
            }
            DomainSpec::Egg { mu } => {
                let s = z[1].norm_sqr();
                let g2 = if s == 0.0 {
                    if *mu > 0.5 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        return Err(Error::DegenerateLevi("egg defining function not differentiable on z2 = 0".into()));
                    }
                } else {
                    z[1].conj() * mu * s.powf(mu - 1.0)
                };
                Ok(DVector::from_vec(vec![z[0].conj(), g2]))
            }
            DomainSpec::Scaled { base, map } => {
                let inner = map.eval(z)?;
                let g = base.wirtinger_gradient(&inner)?;
                Ok(map.jacobian(z)?.transpose() * g)
            }
        }
    }

    /// The pair `(∂²ρ/∂z_k∂z_l, ∂²ρ/∂z_k∂z̄_l)`.
    pub fn complex_hessian(&self, z: &CPoint) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
        z.check_dim(self.dim())?;
        let n = self.dim();
        let zero = DMatrix::<Complex64>::zeros(n, n);
        match self {
            DomainSpec::Ball { .. } => Ok((zero, DMatrix::identity(n, n))),
            DomainSpec::Siegel { .. } => {
                let mut levi = DMatrix::identity(n, n);
                levi[(n - 1, n - 1)] = Complex64::new(0.0, 0.0);
                Ok((zero, levi))
            }
            DomainSpec::Egg { mu } => {
                let s = z[1].norm_sqr();
                let mut hol = zero.clone();
                let mut levi = zero;
                levi[(0, 0)] = Complex64::new(1.0, 0.0);
                if s == 0.0 {
                    if (*mu - 1.0).abs() > 0.0 {
                        return Err(Error::DegenerateLevi(
                            "egg defining function not twice differentiable on z2 = 0".into(),
                        ));
                    }
                    levi[(1, 1)] = Complex64::new(1.0, 0.0);
                } else {
                    let zb = z[1].conj();
                    hol[(1, 1)] = zb * zb * (mu * (mu - 1.0) * s.powf(mu - 2.0));
                    levi[(1, 1)] = Complex64::new(mu * mu * s.powf(mu - 1.0), 0.0);
                }
                Ok((hol, levi))
            }
            DomainSpec::Scaled { .. } => {
                Err(Error::Unsupported("second derivatives of a scaled defining function".into()))
            }
        }
    }

    /// Unit outward normal `conj(∂ρ) / |∂ρ|` as a vector of C^n.
    pub fn outward_normal(&self, z: &CPoint) -> Result<CPoint> {
        let g = self.wirtinger_gradient(z)?;
        let norm = g.norm();
        if !(norm > 0.0) {
            return Err(Error::Numerical(format!("vanishing gradient at {z}")));
        }
        Ok(CPoint::from_vector(g.map(|c| c.conj()) / Complex64::from(norm)))
    }

    /// Nearest boundary point to an interior point `p`, found by iterating
    /// `ζ ← p + s·ν(ζ)` with `s` solving `ρ(p + s ν) = 0`.
    pub fn nearest_boundary_point(&self, p: &CPoint) -> Result<CPoint> {
        let rho_p = self.defining_value(p)?;
        if !(rho_p < 0.0) {
            return Err(Error::OutsideDomain(format!("{p} is not an interior point of {self}")));
        }
        let mut normal = self.outward_normal(p)?;
        let mut zeta = p.clone();
        for _ in 0..200 {
            let s = self.boundary_hit(p, &normal)?;
            let next = p.add(&normal.scale(Complex64::from(s)));
            let step = next.dist(&zeta);
            zeta = next;
            if step <= 1e-15 * (1.0 + zeta.norm()) {
                break;
            }
            normal = self.outward_normal(&zeta)?;
        }
        Ok(zeta)
    }

    /// Residual of the first-order optimality condition for the nearest
    /// point: the part of `ζ − p` orthogonal to the normal at `ζ`.
    pub fn nearest_point_residual(&self, p: &CPoint, zeta: &CPoint) -> Result<f64> {
        let normal = self.outward_normal(zeta)?;
        let d = zeta.sub(p);
        let along = d.real_dot(&normal);
        Ok(d.sub(&normal.scale(Complex64::from(along))).norm())
    }

    /// Smallest `s > 0` with `p + s·dir` on the boundary.
    fn boundary_hit(&self, p: &CPoint, dir: &CPoint) -> Result<f64> {
        let f = |s: f64| self.defining_value(&p.add(&dir.scale(Complex64::from(s))));
        let mut lo = 0.0;
        let mut hi = (-f(0.0)?).max(1e-12);
        let mut grow = 0;
        while f(hi)? < 0.0 {
            lo = hi;
            hi *= 2.0;
            grow += 1;
            if grow > 200 {
                return Err(Error::Numerical("no boundary crossing along the normal ray".into()));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// `π^n / n!`.
pub fn unit_ball_volume(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * PI / k as f64)
}

/// Gauge of the egg at a unit vector with `|v₁|² = a`, `|v₂|² = b`, by
/// bisection on `t ↦ ρ(v/t)`, which is nonincreasing.
fn egg_unit_gauge(mu: f64, a: f64, b: f64) -> f64 {
    let (r_in, r_out) = DomainSpec::Egg { mu }.radial_bounds().expect("egg radii");
    let rho = |t: f64| a / (t * t) + (b / (t * t)).powf(mu) - 1.0;
    let mut lo = (1.0 - 1e-9) / r_out;
    let mut hi = (1.0 + 1e-9) / r_in;
    while rho(lo) < 0.0 {
        lo *= 0.5;
    }
    while rho(hi) > 0.0 {
        hi *= 2.0;
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if rho(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
