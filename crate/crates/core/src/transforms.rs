//! Holomorphic maps between model domains.
//!
//! Every [`HoloMap`] can be evaluated, differentiated (complex Jacobian) and
//! inverted in closed form. The normalization at a boundary point
//! ([`pinchuk_normalize`]) is assembled from these pieces: a translation, a
//! unitary-plus-scaling linear map, a quadric shear in the last coordinate and
//! a linear change of the tangential coordinates.

use std::f64::consts::SQRT_2;

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::point::CPoint;

type CMat = DMatrix<Complex64>;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Pole guard for the Cayley transform and its inverse.
const POLE_EPS: f64 = 1e-300;

/// Matrices travel row-major as nested arrays of `[re, im]` pairs.
pub(crate) mod cmatrix {
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &DMatrix<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<Complex64>, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(D::Error::custom("ragged matrix"));
        }
        Ok(DMatrix::from_fn(nrows, ncols, |i, j| {
            let [re, im] = rows[i][j];
            Complex64::new(re, im)
        }))
    }
}

/// A holomorphic map of C^n (or of an open subset, for the Cayley pair).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum HoloMap {
    /// `z ↦ A z + b`.
    Affine {
        #[serde(with = "cmatrix")]
        linear: CMat,
        offset: CPoint,
    },
    /// `('z, z_n) ↦ (√2 'z / (1 − z_n), (1 + z_n) / (1 − z_n))`, Siegel domain onto the ball.
    Cayley,
    /// `('w, w_n) ↦ (√2 'w / (1 + w_n), (w_n − 1) / (w_n + 1))`.
    CayleyInverse,
    /// `z_n ↦ z_n + 'z^T q 'z` with `q` symmetric of size `(n−1)×(n−1)`; other coordinates fixed.
    QuadricNormalization {
        #[serde(with = "cmatrix")]
        q: CMat,
    },
    /// `('z, z_n) ↦ ('z / √δ, z_n / δ)`.
    Dilation { delta: f64 },
    /// Applies `maps[0]` first, then `maps[1]`, and so on.
    Composition { maps: Vec<HoloMap> },
}

impl HoloMap {
    pub fn affine(linear: CMat, offset: CPoint) -> Result<Self> {
        if !linear.is_square() || linear.nrows() != offset.dim() {
            return Err(Error::DimensionMismatch { expected: linear.nrows(), got: offset.dim() });
        }
        let det = linear.determinant();
        if !(det.norm() > 0.0) || !det.norm().is_finite() {
            return Err(Error::Singular);
        }
        Ok(HoloMap::Affine { linear, offset })
    }

    pub fn translation(offset: CPoint) -> Self {
        let n = offset.dim();
        HoloMap::Affine { linear: CMat::identity(n, n), offset }
    }

    pub fn identity(n: usize) -> Self {
        HoloMap::translation(CPoint::zeros(n))
    }

    pub fn quadric(q: CMat) -> Result<Self> {
        if !q.is_square() {
            return Err(Error::InvalidParameter("quadric coefficient table must be square".into()));
        }
        Ok(HoloMap::QuadricNormalization { q })
    }

    pub fn compose(maps: Vec<HoloMap>) -> Self {
        HoloMap::Composition { maps }
    }

    /// `self` followed by `next`.
    pub fn then(self, next: HoloMap) -> HoloMap {
        match self {
            HoloMap::Composition { mut maps } => {
                maps.push(next);
                HoloMap::Composition { maps }
            }
            first => HoloMap::Composition { maps: vec![first, next] },
        }
    }

    pub fn eval(&self, z: &CPoint) -> Result<CPoint> {
        match self {
            HoloMap::Affine { linear, offset } => {
                z.check_dim(offset.dim())?;
                Ok(CPoint::from_vector(linear * z.as_vector() + offset.as_vector()))
            }
            HoloMap::Cayley => {
                let zn = z.last();
                let d = ONE - zn;
                if d.norm() <= POLE_EPS {
                    return Err(Error::Pole("Cayley transform at z_n = 1".into()));
                }
                let mut out: Vec<Complex64> = z.head().iter().map(|c| c * SQRT_2 / d).collect();
                out.push((ONE + zn) / d);
                Ok(CPoint::new(out))
            }
            HoloMap::CayleyInverse => {
                let wn = z.last();
                let d = ONE + wn;
                if d.norm() <= POLE_EPS {
                    return Err(Error::Pole("inverse Cayley transform at w_n = -1".into()));
                }
                let mut out: Vec<Complex64> = z.head().iter().map(|c| c * SQRT_2 / d).collect();
                out.push((wn - ONE) / d);
                Ok(CPoint::new(out))
            }
            HoloMap::QuadricNormalization { q } => {
                z.check_dim(q.nrows() + 1)?;
                let head = DVector::from_column_slice(z.head());
                let shift = (head.transpose() * q * &head)[(0, 0)];
                let mut out = z.clone().into_vector();
                let n = out.len();
                out[n - 1] += shift;
                Ok(CPoint::from_vector(out))
            }
            HoloMap::Dilation { delta } => {
                let s = delta.sqrt();
                let n = z.dim();
                let out = z
                    .as_slice()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| if i + 1 == n { c / *delta } else { c / s })
                    .collect();
                Ok(CPoint::new(out))
            }
            HoloMap::Composition { maps } => {
                let mut p = z.clone();
                for m in maps {
                    p = m.eval(&p)?;
                }
                Ok(p)
            }
        }
    }

    /// Complex Jacobian matrix `∂f_i/∂z_j` at `z`.
    pub fn jacobian(&self, z: &CPoint) -> Result<CMat> {
        let n = z.dim();
        match self {
            HoloMap::Affine { linear, offset } => {
                z.check_dim(offset.dim())?;
                Ok(linear.clone())
            }
            HoloMap::Cayley => {
                let zn = z.last();
                let d = ONE - zn;
                if d.norm() <= POLE_EPS {
                    return Err(Error::Pole("Cayley transform at z_n = 1".into()));
                }
                let mut j = CMat::zeros(n, n);
                for k in 0..n - 1 {
                    j[(k, k)] = Complex64::from(SQRT_2) / d;
                    j[(k, n - 1)] = z[k] * SQRT_2 / (d * d);
                }
                j[(n - 1, n - 1)] = Complex64::from(2.0) / (d * d);
                Ok(j)
            }
            HoloMap::CayleyInverse => {
                let wn = z.last();
                let d = ONE + wn;
                if d.norm() <= POLE_EPS {
                    return Err(Error::Pole("inverse Cayley transform at w_n = -1".into()));
                }
                let mut j = CMat::zeros(n, n);
                for k in 0..n - 1 {
                    j[(k, k)] = Complex64::from(SQRT_2) / d;
                    j[(k, n - 1)] = -z[k] * SQRT_2 / (d * d);
                }
                j[(n - 1, n - 1)] = Complex64::from(2.0) / (d * d);
                Ok(j)
            }
            HoloMap::QuadricNormalization { q } => {
                z.check_dim(q.nrows() + 1)?;
                let head = DVector::from_column_slice(z.head());
                let grad = (q + q.transpose()) * head;
                let mut j = CMat::identity(n, n);
                for k in 0..n - 1 {
                    j[(n - 1, k)] = grad[k];
                }
                Ok(j)
            }
            HoloMap::Dilation { delta } => {
                let mut j = CMat::identity(n, n) / Complex64::from(delta.sqrt());
                j[(n - 1, n - 1)] = Complex64::from(1.0 / delta);
                Ok(j)
            }
            HoloMap::Composition { maps } => {
                let mut p = z.clone();
                let mut acc = CMat::identity(n, n);
                for m in maps {
                    acc = m.jacobian(&p)? * acc;
                    p = m.eval(&p)?;
                }
                Ok(acc)
            }
        }
    }

    pub fn jacobian_det(&self, z: &CPoint) -> Result<Complex64> {
        match self {
            HoloMap::Dilation { delta } => {
                let n = z.dim() as i32;
                Ok(Complex64::from(delta.powf(-(n + 1) as f64 / 2.0)))
            }
            HoloMap::Cayley => {
                let d = ONE - z.last();
                if d.norm() <= POLE_EPS {
                    return Err(Error::Pole("Cayley transform at z_n = 1".into()));
                }
                let n = z.dim() as i32;
                Ok(Complex64::from(SQRT_2).powi(n - 1) * 2.0 / d.powi(n + 1))
            }
            HoloMap::QuadricNormalization { .. } => Ok(ONE),
            HoloMap::Composition { maps } => {
                let mut p = z.clone();
                let mut det = ONE;
                for m in maps {
                    det *= m.jacobian_det(&p)?;
                    p = m.eval(&p)?;
                }
                Ok(det)
            }
            _ => Ok(self.jacobian(z)?.determinant()),
        }
    }

    /// Closed-form two-sided inverse.
    pub fn inverse(&self) -> Result<HoloMap> {
        Ok(match self {
            HoloMap::Affine { linear, offset } => {
                let inv = linear.clone().try_inverse().ok_or(Error::Singular)?;
                let off = -(&inv * offset.as_vector());
                HoloMap::Affine { linear: inv, offset: CPoint::from_vector(off) }
            }
            HoloMap::Cayley => HoloMap::CayleyInverse,
            HoloMap::CayleyInverse => HoloMap::Cayley,
            HoloMap::QuadricNormalization { q } => HoloMap::QuadricNormalization { q: -q },
            HoloMap::Dilation { delta } => HoloMap::Dilation { delta: 1.0 / delta },
            HoloMap::Composition { maps } => HoloMap::Composition {
                maps: maps.iter().rev().map(HoloMap::inverse).collect::<Result<_>>()?,
            },
        })
    }
}

/// The Cayley transform of the Siegel domain onto the unit ball.
pub fn cayley(z: &CPoint) -> Result<CPoint> {
    HoloMap::Cayley.eval(z)
}

pub fn cayley_inverse(w: &CPoint) -> Result<CPoint> {
    HoloMap::CayleyInverse.eval(w)
}

pub fn jacobian_det(map: &HoloMap, z: &CPoint) -> Result<Complex64> {
    map.jacobian_det(z)
}

/// The homothety `v ↦ r (v − q) + q`.
pub fn homothety(q: &CPoint, r: f64) -> Result<HoloMap> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("homothety ratio must be positive, got {r}")));
    }
    let n = q.dim();
    let linear = CMat::identity(n, n) * Complex64::from(r);
    Ok(HoloMap::Affine { linear, offset: q.scale(Complex64::from(1.0 - r)) })
}

/// The anisotropic dilation `('z, z_n) ↦ ('z / √δ, z_n / δ)`.
pub fn dilation(delta: f64) -> Result<HoloMap> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("dilation parameter must be positive, got {delta}")));
    }
    Ok(HoloMap::Dilation { delta })
}

/// Second-order normalization of a domain at a strongly pseudoconvex
/// boundary point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PinchukData {
    pub boundary_point: CPoint,
    /// Maps the boundary point to the origin; the image domain is
    /// `{2 Re(w_n + Q(w)) + H(w) + o(|w|²) < 0}`.
    pub normalization: HoloMap,
    /// Hermitian coefficients `h_{kl}` of `H(w) = Σ h_{kl} w_k w̄_l`.
    #[serde(with = "cmatrix")]
    pub hermitian_form: CMat,
    /// Symmetric coefficients `q_{kl}` of `Q(w) = Σ q_{kl} w_k w_l`.
    #[serde(with = "cmatrix")]
    pub quadratic_form: CMat,
}

impl PinchukData {
    /// Defining function of the normalized domain, `ρ ∘ φ^{-1}`.
    pub fn normalized_defining_value(&self, spec: &DomainSpec, w: &CPoint) -> Result<f64> {
        let z = self.normalization.inverse()?.eval(w)?;
        spec.defining_value(&z)
    }
}

/// Relative tolerance for accepting a point as lying on the boundary.
const BOUNDARY_TOL: f64 = 1e-9;

/// Normalizes `spec` at the boundary point `zeta`.
///
/// The map is translation to the origin, then a linear map whose last row is
/// the holomorphic gradient `∂ρ(ζ)` (so the linear term becomes `2 Re w_n`)
/// and whose other rows form a unitary frame of the complex tangent space,
/// then the shear removing the tangential pure terms of `Q`, then a linear
/// change of `'w` making the Levi form the identity.
pub fn pinchuk_normalize(spec: &DomainSpec, zeta: &CPoint) -> Result<PinchukData> {
    let n = spec.dim();
    zeta.check_dim(n)?;
    if n < 2 {
        return Err(Error::Unsupported("normalization needs n >= 2".into()));
    }
    let rho = spec.defining_value(zeta)?;
    if rho.abs() > BOUNDARY_TOL {
        return Err(Error::NotOnBoundary(rho));
    }
    let g = spec.wirtinger_gradient(zeta)?;
    let (hol_hess, levi) = spec.complex_hessian(zeta)?;
    let gnorm = g.norm();
    if !(gnorm > 0.0) || !gnorm.is_finite() {
        return Err(Error::DegenerateLevi(format!("vanishing gradient at {zeta}")));
    }

    // Unit outward normal u = conj(g)/|g| and a unitary frame of {h : g·h = 0}.
    let u: DVector<Complex64> = g.map(|c| c.conj()) / Complex64::from(gnorm);
    let tangent = tangent_frame(&u);
    let mut linear = CMat::zeros(n, n);
    for (k, t) in tangent.iter().enumerate() {
        for i in 0..n {
            linear[(k, i)] = t[i].conj();
        }
    }
    for i in 0..n {
        linear[(n - 1, i)] = g[i];
    }
    let linv = linear.clone().try_inverse().ok_or(Error::Singular)?;

    // Second-order forms in the rotated coordinates w = L h.
    let q_w = linv.transpose() * &hol_hess * &linv * Complex64::from(0.5);
    let r_w = linv.adjoint() * &levi * &linv;

    let m = n - 1;
    let shear = q_w.view((0, 0), (m, m)).into_owned();
    let tangential_levi = r_w.view((0, 0), (m, m)).into_owned();
    let tangential_levi = (&tangential_levi + tangential_levi.adjoint()) * Complex64::from(0.5);
    let chol = Cholesky::new(tangential_levi.clone())
        .ok_or_else(|| Error::DegenerateLevi(format!("Levi form not positive definite at {zeta}")))?;
    let lower = chol.l();
    let scale = tangential_levi.norm().max(1.0);
    let min_pivot = (0..m).map(|i| lower[(i, i)].re).fold(f64::INFINITY, f64::min);
    if min_pivot * min_pivot < 1e-12 * scale {
        return Err(Error::DegenerateLevi(format!("Levi form nearly degenerate at {zeta}")));
    }
    // C with C^* C = M, applied to 'w.
    let c = lower.adjoint();
    let cinv = c.clone().try_inverse().ok_or(Error::Singular)?;

    let mut tangential = CMat::identity(n, n);
    tangential.view_mut((0, 0), (m, m)).copy_from(&c);
    let mut back = CMat::identity(n, n);
    back.view_mut((0, 0), (m, m)).copy_from(&cinv);

    let mut q_rest = q_w.clone();
    q_rest.view_mut((0, 0), (m, m)).fill(ZERO);
    let quadratic_form = back.transpose() * q_rest * &back;
    let hermitian_form = back.adjoint() * r_w * &back;

    let normalization = HoloMap::compose(vec![
        HoloMap::translation(zeta.scale(-ONE)),
        HoloMap::Affine { linear, offset: CPoint::zeros(n) },
        HoloMap::QuadricNormalization { q: shear },
        HoloMap::Affine { linear: tangential, offset: CPoint::zeros(n) },
    ]);

    Ok(PinchukData { boundary_point: zeta.clone(), normalization, hermitian_form, quadratic_form })
}

/// Orthonormal basis of the Hermitian complement of the unit vector `u`.
fn tangent_frame(u: &DVector<Complex64>) -> Vec<DVector<Complex64>> {
    let n = u.len();
    let mut basis: Vec<DVector<Complex64>> = vec![u.clone()];
    let mut frame = Vec::with_capacity(n - 1);
    for e in 0..n {
        if frame.len() == n - 1 {
            break;
        }
        let mut v = DVector::<Complex64>::zeros(n);
        v[e] = ONE;
        for b in &basis {
            let proj = b.dotc(&v);
            v -= b * proj;
        }
        let norm = v.norm();
        if norm > 1e-8 {
            v /= Complex64::from(norm);
            basis.push(v.clone());
            frame.push(v);
        }
    }
    frame
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cayley_anchor_points() {
        let w = cayley(&CPoint::real2(0.0, -1.0)).unwrap();
        assert!(w.dist(&CPoint::real2(0.0, 0.0)) < 1e-15);
        let w = cayley(&CPoint::real2(0.0, 0.0)).unwrap();
        assert!(w.dist(&CPoint::real2(0.0, 1.0)) < 1e-15);
        let z = cayley_inverse(&CPoint::real2(0.0, 0.0)).unwrap();
        assert!(z.dist(&CPoint::real2(0.0, -1.0)) < 1e-15);
        // (1 + z)/(1 − z) = 1/2 gives z = −1/3.
        let z = cayley_inverse(&CPoint::real2(0.0, 0.5)).unwrap();
        assert!(z.dist(&CPoint::real2(0.0, -1.0 / 3.0)) < 1e-15);
    }

    #[test]
    fn cayley_poles_are_errors() {
        assert!(matches!(cayley(&CPoint::real2(0.3, 1.0)), Err(Error::Pole(_))));
        assert!(matches!(cayley_inverse(&CPoint::real2(0.3, -1.0)), Err(Error::Pole(_))));
        assert!(HoloMap::Cayley.jacobian_det(&CPoint::real2(0.0, 1.0)).is_err());
    }

    #[test]
    fn determinants_of_model_maps() {
        let p_star = CPoint::real2(0.0, -1.0);
        let det = jacobian_det(&HoloMap::Cayley, &p_star).unwrap();
        assert!((det - c(2f64.powf(-1.5), 0.0)).norm() < 1e-15);
        // T_δ(z) = ('z/√δ, z_2/δ) has determinant δ^{-3/2} in C².
        let t = dilation(0.25).unwrap();
        assert!((t.jacobian_det(&p_star).unwrap() - c(8.0, 0.0)).norm() < 1e-12);
        let image = t.eval(&CPoint::real2(1.0, 1.0)).unwrap();
        assert!(image.dist(&CPoint::real2(2.0, 4.0)) < 1e-15);
        let shift = HoloMap::translation(CPoint::c2(c(0.3, 1.0), c(-2.0, 0.5)));
        assert_eq!(shift.jacobian_det(&p_star).unwrap(), ONE);
    }

    #[test]
    fn dilation_by_one_is_identity() {
        let z = CPoint::c2(c(0.3, -0.2), c(1.5, 0.7));
        assert_eq!(dilation(1.0).unwrap().eval(&z).unwrap(), z);
        assert!(dilation(0.0).is_err());
        assert!(dilation(-1.0).is_err());
    }

    #[test]
    fn homothety_basics() {
        let h = homothety(&CPoint::zeros(2), 2.0).unwrap();
        assert_eq!(h.eval(&CPoint::real2(1.0, 0.0)).unwrap(), CPoint::real2(2.0, 0.0));
        let q = CPoint::c2(c(0.4, -0.1), c(2.0, 3.0));
        let unit = homothety(&q, 1.0).unwrap();
        let z = CPoint::c2(c(-1.0, 0.5), c(0.25, 0.0));
        assert!(unit.eval(&z).unwrap().dist(&z) < 1e-15);
        let h = homothety(&q, 0.3).unwrap();
        assert!(h.eval(&q).unwrap().dist(&q) < 1e-15);
        assert!(homothety(&q, 0.0).is_err());
    }

    #[test]
    fn singular_affine_rejected() {
        let m = CMat::zeros(2, 2);
        assert_eq!(HoloMap::affine(m, CPoint::zeros(2)), Err(Error::Singular));
    }

    #[test]
    fn inverse_of_composition() {
        let map = HoloMap::compose(vec![
            HoloMap::translation(CPoint::c2(c(0.1, 0.2), c(-0.3, 0.0))),
            HoloMap::quadric(CMat::from_element(1, 1, c(0.5, -0.25))).unwrap(),
            dilation(0.3).unwrap(),
            HoloMap::Cayley,
        ]);
        let inv = map.inverse().unwrap();
        let z = CPoint::c2(c(0.05, 0.1), c(-0.4, 0.2));
        let back = inv.eval(&map.eval(&z).unwrap()).unwrap();
        assert!(back.dist(&z) < 1e-12);
    }

    #[test]
    fn holomap_json_is_tagged() {
        let m = HoloMap::compose(vec![HoloMap::Cayley, HoloMap::Dilation { delta: 0.5 }]);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"variant\":\"composition\""));
        let back: HoloMap = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let a = HoloMap::Affine {
            linear: CMat::from_row_slice(2, 2, &[ONE, c(0.0, 2.0), ZERO, ONE]),
            offset: CPoint::zeros(2),
        };
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"linear\":[[[1.0,0.0],[0.0,2.0]],[[0.0,0.0],[1.0,0.0]]]"));
    }

    #[test]
    fn ball_normalization_is_a_translation() {
        let spec = DomainSpec::ball(2).unwrap();
        let data = pinchuk_normalize(&spec, &CPoint::real2(0.0, 1.0)).unwrap();
        let phi = &data.normalization;
        let w = phi.eval(&CPoint::real2(0.0, 0.5)).unwrap();
        assert!(w.dist(&CPoint::real2(0.0, -0.5)) < 1e-15);
        assert!((data.hermitian_form[(0, 0)] - ONE).norm() < 1e-14);
        assert!(data.quadratic_form.norm() < 1e-14);
    }

    #[test]
    fn normalization_rejects_interior_and_degenerate_points() {
        let ball = DomainSpec::ball(2).unwrap();
        assert!(matches!(
            pinchuk_normalize(&ball, &CPoint::real2(0.0, 0.5)),
            Err(Error::NotOnBoundary(_))
        ));
        let egg = DomainSpec::egg(0.25).unwrap();
        assert!(matches!(
            pinchuk_normalize(&egg, &CPoint::real2(1.0, 0.0)),
            Err(Error::DegenerateLevi(_))
        ));
    }
}
