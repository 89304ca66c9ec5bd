//! Coupled fixed points of `F: X x X -> X`.
//!
//! The iteration `x_{n+1} = F(x_n, y_n)`, `y_{n+1} = F(y_n, x_n)` is run
//! until the step element `δ_n = d(x_n, x_{n+1}) + d(y_n, y_{n+1})` is small
//! in norm. Contraction conditions of three kinds can be certified by
//! sampling before iterating:
//!
//! * [`ContractionKind::Banach`]: `d(F(x,y), F(u,v)) ⪯ a* d(x,u) a + a* d(y,v) a`, `||a|| < 1/√2`
//! * [`ContractionKind::Kannan`]: `d(F(x,y), F(u,v)) ⪯ a d(F(x,y),x) + b d(F(u,v),u)`, `||a|| + ||b|| < 1`
//! * [`ContractionKind::Chatterjea`]: `d(F(x,y), F(u,v)) ⪯ a d(F(x,y),u) + b d(F(u,v),x)`, `||a|| + ||b|| < 1`
//!
//! For the last two, `a` and `b` must lie in the positive part of the
//! center of the algebra, which for a full matrix algebra means nonnegative
//! multiples of the identity.

mod certify;
mod iterate;
mod remark;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::metric::MetricError;

pub use certify::{certify, CertifyOptions, Coefficients, ContractionCertificate, ContractionKind};
pub use iterate::{
    apriori_bound, solve_coupled, verify_fixed_point, IterationStep, IterationTrace, Residuals,
    SolveConfig,
};
pub use remark::{demo_remark_22, RemarkReport, RemarkRun, REMARK_VERDICT};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("coefficient shape mismatch: {0}")]
    CoeffShapeMismatch(String),
    #[error("coefficient {name} is not a nonnegative multiple of the identity")]
    NotInCenter { name: &'static str },
    #[error("contraction ratio q = {0} is outside [0, 1)")]
    QOutOfRange(f64),
    #[error("invalid solver setting: {0}")]
    InvalidConfig(String),
    #[error("no convergence after {iterations} iterations (last |δ| = {last_delta:e})")]
    MaxItersExceeded { iterations: usize, last_delta: f64 },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A coupled map `F: X x X -> X`.
pub trait CoupledMap<P> {
    fn apply(&self, x: &P, y: &P) -> P;
}

impl<P, F> CoupledMap<P> for F
where
    F: Fn(&P, &P) -> P,
{
    fn apply(&self, x: &P, y: &P) -> P {
        self(x, y)
    }
}
