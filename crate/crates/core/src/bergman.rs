//! Bergman kernels on the diagonal.
//!
//! Closed forms cover the ball, the Siegel domain (pulled back through the
//! Cayley transform) and the eggs along the `z₂`-axis. Complete Reinhardt
//! domains in C² also get a truncated monomial series, since monomials are
//! orthogonal there and `K(z) = Σ |z^α|² / ‖z^α‖²`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{unit_ball_volume, DomainSpec};
use crate::error::{Error, Result};
use crate::point::CPoint;
use crate::transforms::{homothety, HoloMap};

pub const DEFAULT_MAX_DEGREE: usize = 60;

/// Relative size of the last-degree increment above which a truncated series
/// is reported as not converged.
pub const SERIES_GUARD: f64 = 1e-3;

/// `n!/πⁿ · (1 − |z|²)^{−(n+1)}`.
pub fn kernel_ball(n: usize, z: &CPoint) -> Result<f64> {
    z.check_dim(n)?;
    let gap = 1.0 - z.norm_sqr();
    if !(gap > 0.0) {
        return Err(Error::OutsideDomain(format!("{z} is not in the unit ball")));
    }
    Ok(gap.powi(-(n as i32 + 1)) / unit_ball_volume(n))
}

/// Kernel of `E_{2μ}` at `(0, p)`.
pub fn kernel_egg_axis(mu: f64, p: f64) -> Result<f64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidParameter(format!("egg exponent must be positive, got {mu}")));
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::OutsideDomain(format!("axis parameter p = {p} not in [0, 1)")));
    }
    let gap = 1.0 - p * p;
    Ok((mu - 1.0) / (PI * PI * mu) / (gap * gap) + 2.0 / (PI * PI * mu) / (gap * gap * gap))
}

/// Kernel of the Siegel domain, `K_B(Ψ(z)) · |det Ψ'(z)|²`.
pub fn kernel_siegel(n: usize, z: &CPoint) -> Result<f64> {
    let spec = DomainSpec::siegel(n)?;
    if !spec.contains(z)? {
        return Err(Error::OutsideDomain(format!("{z} is not in the Siegel domain")));
    }
    let w = HoloMap::Cayley.eval(z)?;
    let det = HoloMap::Cayley.jacobian_det(z)?;
    Ok(kernel_ball(n, &w)? * det.norm_sqr())
}

/// Table of monomial norms `m_{ab} = ∫ |z₁|^{2a} |z₂|^{2b} dλ`, `a + b ≤ max_degree`.
#[derive(Clone, Debug)]
pub struct MomentTable {
    max_degree: usize,
    // Row-major by total degree: entries for degree d start at d(d+1)/2.
    moments: Vec<f64>,
}

impl MomentTable {
    pub fn new(spec: &DomainSpec, max_degree: usize) -> Result<Self> {
        let mu = match spec {
            DomainSpec::Ball { n: 2 } => 1.0,
            DomainSpec::Egg { mu } => *mu,
            other => {
                return Err(Error::Unsupported(format!(
                    "monomial series needs a bounded complete Reinhardt domain in C^2, got {other}"
                )))
            }
        };
        let mut moments = Vec::with_capacity((max_degree + 1) * (max_degree + 2) / 2);
        for d in 0..=max_degree {
            for a in 0..=d {
                moments.push(egg_moment(mu, a, d - a));
            }
        }
        Ok(MomentTable { max_degree, moments })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        let d = a + b;
        self.moments[d * (d + 1) / 2 + a]
    }
}

/// `∫_{E_{2μ}} |z₁|^{2a} |z₂|^{2b} dλ = π² / (μ (a+1)) · B(a + 2, (b + 1)/μ)`.
///
/// Integrating `z₁` over the disc of radius `(1 − r^{2μ})^{1/2}` and then
/// substituting `u = r^{2μ}` in the `|z₂| = r` integral gives the Beta form.
pub fn egg_moment(mu: f64, a: usize, b: usize) -> f64 {
    PI * PI / (mu * (a + 1) as f64) * beta_int_first(a + 2, (b as f64 + 1.0) / mu)
}

/// `B(k, s) = (k−1)! / (s (s+1) ⋯ (s+k−1))` for integer `k ≥ 1`.
fn beta_int_first(k: usize, s: f64) -> f64 {
    (1..k).fold(1.0 / s, |acc, i| acc * i as f64 / (s + i as f64))
}

/// A diagonal Bergman kernel evaluator for one domain.
#[derive(Clone, Debug)]
pub enum KernelOracle {
    ClosedForm(DomainSpec),
    ReinhardtSeries { spec: DomainSpec, table: MomentTable },
    /// `K_{D'}(z) = K_D(ψ(z)) |det ψ'(z)|²` for `ψ : D' → D`.
    Pullback { map: HoloMap, base: Box<KernelOracle> },
}

impl KernelOracle {
    pub fn closed_form(spec: DomainSpec) -> Self {
        KernelOracle::ClosedForm(spec)
    }

    pub fn series(spec: DomainSpec, max_degree: usize) -> Result<Self> {
        let table = MomentTable::new(&spec, max_degree)?;
        Ok(KernelOracle::ReinhardtSeries { spec, table })
    }

    pub fn pullback(map: HoloMap, base: KernelOracle) -> Self {
        KernelOracle::Pullback { map, base: Box::new(base) }
    }

    /// The domain this oracle computes the kernel of.
    pub fn spec(&self) -> DomainSpec {
        match self {
            KernelOracle::ClosedForm(s) | KernelOracle::ReinhardtSeries { spec: s, .. } => s.clone(),
            KernelOracle::Pullback { map, base } => DomainSpec::scaled(base.spec(), map.clone()),
        }
    }

    pub fn eval(&self, z: &CPoint) -> Result<f64> {
        match self {
            KernelOracle::ClosedForm(spec) => closed_form_kernel(spec, z),
            KernelOracle::ReinhardtSeries { spec, table } => series_kernel(spec, table, z),
            KernelOracle::Pullback { map, base } => {
                let w = map.eval(z)?;
                Ok(base.eval(&w)? * map.jacobian_det(z)?.norm_sqr())
            }
        }
    }
}

fn closed_form_kernel(spec: &DomainSpec, z: &CPoint) -> Result<f64> {
    match spec {
        DomainSpec::Ball { n } => kernel_ball(*n, z),
        DomainSpec::Siegel { n } => kernel_siegel(*n, z),
        DomainSpec::Egg { mu } => {
            z.check_dim(2)?;
            if *mu == 1.0 {
                kernel_ball(2, z)
            } else if z[0] == Complex64::new(0.0, 0.0) {
                // Rotation in z₂ is an automorphism.
                kernel_egg_axis(*mu, z[1].norm())
            } else {
                Err(Error::Unsupported(format!(
                    "closed-form egg kernel only on the z2-axis; use the monomial series at {z}"
                )))
            }
        }
        DomainSpec::Scaled { base, map } => {
            KernelOracle::pullback(map.clone(), KernelOracle::ClosedForm((**base).clone())).eval(z)
        }
    }
}

fn series_kernel(spec: &DomainSpec, table: &MomentTable, z: &CPoint) -> Result<f64> {
    if !spec.contains(z)? {
        return Err(Error::OutsideDomain(format!("{z} is not in {spec}")));
    }
    let x = z[0].norm_sqr();
    let y = z[1].norm_sqr();
    let mut sum = 0.0;
    let mut last = 0.0;
    for d in 0..=table.max_degree() {
        let mut level = 0.0;
        for a in 0..=d {
            let b = d - a;
            level += x.powi(a as i32) * y.powi(b as i32) / table.get(a, b);
        }
        sum += level;
        last = level;
    }
    if table.max_degree() > 0 && last > SERIES_GUARD * sum {
        return Err(Error::NotConverged { partial: sum, increment: last });
    }
    Ok(sum)
}

/// Truncated monomial-series kernel of a bounded complete Reinhardt domain in C².
pub fn reinhardt_kernel(spec: &DomainSpec, z: &CPoint, max_degree: usize) -> Result<f64> {
    KernelOracle::series(spec.clone(), max_degree)?.eval(z)
}

/// Partial sums of the monomial series up to each degree in `0..=max_degree`.
pub fn reinhardt_partial_sums(spec: &DomainSpec, z: &CPoint, max_degree: usize) -> Result<Vec<f64>> {
    let table = MomentTable::new(spec, max_degree)?;
    if !spec.contains(z)? {
        return Err(Error::OutsideDomain(format!("{z} is not in {spec}")));
    }
    let x = z[0].norm_sqr();
    let y = z[1].norm_sqr();
    let mut sum = 0.0;
    Ok((0..=max_degree)
        .map(|d| {
            for a in 0..=d {
                sum += x.powi(a as i32) * y.powi((d - a) as i32) / table.get(a, d - a);
            }
            sum
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub j: usize,
    pub kernel: f64,
    pub limit: f64,
    pub abs_err: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// `K_{Ω^j}(w) ≤ K_{Ω₀}(w)` held for every checked index.
    pub bounded_by_reference: bool,
    pub final_abs_err: f64,
    pub tolerance: f64,
}

impl ConvergenceTable {
    pub fn converged(&self) -> bool {
        self.final_abs_err < self.tolerance
    }

    /// Fails unless both the reference bound and the final tolerance hold.
    pub fn check(&self) -> Result<()> {
        if !self.bounded_by_reference {
            return Err(Error::Numerical("kernel exceeded the reference-domain bound".into()));
        }
        if !self.converged() {
            return Err(Error::Numerical(format!(
                "final discrepancy {:e} not below tolerance {:e}",
                self.final_abs_err, self.tolerance
            )));
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,kernel,limit,abs_err\n");
        for r in &self.rows {
            writeln!(out, "{},{:e},{:e},{:e}", r.j, r.kernel, r.limit, r.abs_err).unwrap();
        }
        out
    }
}

/// A relatively compact subdomain `Ω₀` of the limit whose kernel bounds the
/// sequence from index `from` on.
#[derive(Clone, Debug)]
pub struct ReferenceDomain {
    pub oracle: KernelOracle,
    pub from: usize,
}

/// Evaluates a kernel sequence `K_{Ω^j}(w)` against the limit `K_Ω(w)`.
pub fn ramadanov_run(
    sequence: &[(usize, KernelOracle)],
    limit: &KernelOracle,
    w: &CPoint,
    reference: Option<&ReferenceDomain>,
    tolerance: f64,
) -> Result<ConvergenceTable> {
    let target = limit.eval(w)?;
    let bound = reference.map(|r| r.oracle.eval(w).map(|v| (v, r.from))).transpose()?;
    let mut rows = Vec::with_capacity(sequence.len());
    let mut bounded = true;
    for (j, oracle) in sequence {
        if !oracle.spec().contains(w)? {
            return Err(Error::OutsideDomain(format!("{w} is not in the domain at index {j}")));
        }
        let kernel = oracle.eval(w)?;
        if let Some((b, from)) = bound {
            if *j >= from && kernel > b * (1.0 + 1e-12) {
                bounded = false;
            }
        }
        rows.push(ConvergenceRow { j: *j, kernel, limit: target, abs_err: (kernel - target).abs() });
    }
    let final_abs_err = rows.last().map_or(f64::INFINITY, |r| r.abs_err);
    Ok(ConvergenceTable { rows, bounded_by_reference: bounded, final_abs_err, tolerance })
}

/// `Ω^j = (1 + 1/j)·B²` for `j = 1..=j_max`.
pub fn inflate_ball_family(j_max: usize) -> Result<Vec<(usize, KernelOracle)>> {
    let origin = CPoint::zeros(2);
    (1..=j_max)
        .map(|j| {
            let r = 1.0 + 1.0 / j as f64;
            let to_ball = homothety(&origin, 1.0 / r)?;
            Ok((j, KernelOracle::pullback(to_ball, KernelOracle::closed_form(DomainSpec::ball(2)?))))
        })
        .collect()
}

/// `Ω^j = B² + v/j` for `j = 1..=j_max`.
pub fn translate_ball_family(v: &CPoint, j_max: usize) -> Result<Vec<(usize, KernelOracle)>> {
    v.check_dim(2)?;
    (1..=j_max)
        .map(|j| {
            let shift = v.scale(Complex64::from(-1.0 / j as f64));
            Ok((
                j,
                KernelOracle::pullback(
                    HoloMap::translation(shift),
                    KernelOracle::closed_form(DomainSpec::ball(2)?),
                ),
            ))
        })
        .collect()
}

/// `r·B²` as a pullback of the unit ball.
pub fn scaled_ball(r: f64) -> Result<KernelOracle> {
    let to_ball = homothety(&CPoint::zeros(2), 1.0 / r)?;
    Ok(KernelOracle::pullback(to_ball, KernelOracle::closed_form(DomainSpec::ball(2)?)))
}
