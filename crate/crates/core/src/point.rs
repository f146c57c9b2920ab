//! Points and tangent vectors in C^n.

use std::fmt;
use std::ops::Index;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A point (or tangent vector) of C^n, written `('z, z_n)` with the last
/// coordinate distinguished.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoint(DVector<Complex64>);

impl CPoint {
    pub fn new(coords: Vec<Complex64>) -> Self {
        CPoint(DVector::from_vec(coords))
    }

    pub fn from_vector(v: DVector<Complex64>) -> Self {
        CPoint(v)
    }

    pub fn zeros(n: usize) -> Self {
        CPoint(DVector::zeros(n))
    }

    /// Point of C^2 from two complex coordinates.
    pub fn c2(z1: Complex64, z2: Complex64) -> Self {
        CPoint::new(vec![z1, z2])
    }

    /// Point of C^2 with real coordinates.
    pub fn real2(x1: f64, x2: f64) -> Self {
        CPoint::c2(Complex64::new(x1, 0.0), Complex64::new(x2, 0.0))
    }

    /// `('0, t)` in C^n.
    pub fn on_last_axis(n: usize, t: Complex64) -> Self {
        let mut p = CPoint::zeros(n);
        p.0[n - 1] = t;
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_vector(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn into_vector(self) -> DVector<Complex64> {
        self.0
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    pub fn last(&self) -> Complex64 {
        self.0[self.0.len() - 1]
    }

    /// The leading coordinates `'z`.
    pub fn head(&self) -> &[Complex64] {
        &self.0.as_slice()[..self.0.len() - 1]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn scale(&self, c: Complex64) -> CPoint {
        CPoint(self.0.map(|x| x * c))
    }

    pub fn add(&self, other: &CPoint) -> CPoint {
        CPoint(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &CPoint) -> CPoint {
        CPoint(&self.0 - &other.0)
    }

    /// Euclidean distance in C^n = R^{2n}.
    pub fn dist(&self, other: &CPoint) -> f64 {
        self.sub(other).norm()
    }

    /// Real inner product `Re <self, other>` on R^{2n}.
    pub fn real_dot(&self, other: &CPoint) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a * b.conj()).re).sum()
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: n, got: self.dim() })
        }
    }
}

impl Index<usize> for CPoint {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl From<Vec<Complex64>> for CPoint {
    fn from(v: Vec<Complex64>) -> Self {
        CPoint::new(v)
    }
}

impl fmt::Display for CPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl std::str::FromStr for CPoint {
    type Err = Error;

    /// Comma-separated complex coordinates, e.g. `0,-1` or `0.1+0.2i,0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<Complex64>()
                    .map_err(|_| Error::InvalidParameter(format!("bad complex coordinate `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coords.is_empty() {
            return Err(Error::InvalidParameter("empty point".into()));
        }
        Ok(CPoint::new(coords))
    }
}

impl Serialize for CPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.0.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(CPoint::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()))
    }
}
