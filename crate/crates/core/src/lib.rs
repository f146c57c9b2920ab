//! Numerical experiments with the Suita invariant `F^τ_D(z) = K_D(z)·λ(I^τ_D(z))`
//! on the unit ball, the Siegel domain and the egg domains
//! `E_{2μ} = {|z₁|² + |z₂|^{2μ} < 1}`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bergman;
pub mod cli;
pub mod domain;
pub mod error;
pub mod indicatrix;
pub mod metrics;
pub mod point;
pub mod sampling;
pub mod scaling;
pub mod suita;
pub mod transforms;

pub use domain::DomainSpec;
pub use error::{Error, Result};
pub use metrics::{MetricOracle, Tau};
pub use point::CPoint;
pub use suita::{suita_invariant, Method, SuitaResult};
pub use transforms::HoloMap;
