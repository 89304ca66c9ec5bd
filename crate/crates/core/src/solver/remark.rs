//! The midpoint map `F(x, y) = (x + y) / 2` on `d(x, y) = diag(|x-y|, k|x-y|)`
//! with `a = diag(λ, λ)`, `|λ| = 1/√2`.
//!
//! The pointwise Banach inequality holds with equality-level slack, yet
//! every `(x, x)` is a coupled fixed point, so the strict bound `||a|| < 1/√2`
//! cannot be relaxed.

use std::f64::consts::FRAC_1_SQRT_2;

use super::{certify, solve_coupled, CertifyOptions, Coefficients, ContractionCertificate};
use super::{ContractionKind, SolveConfig, SolverError};
use crate::algebra::Element;
use crate::metric::DiagMetric;

/// Verdict line printed when the demo shows the split outcome.
pub const REMARK_VERDICT: &str = "non-unique at ‖a‖ = 1/√2";

/// Limits closer than this are treated as the same fixed point.
const DISTINCT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct RemarkRun {
    pub start: (f64, f64),
    pub limit: Option<(f64, f64)>,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RemarkReport {
    pub k: f64,
    pub runs: Vec<RemarkRun>,
    /// Sorted distinct limits.
    pub distinct_limits: Vec<f64>,
    pub certificate: ContractionCertificate,
    pub tol: f64,
}

impl RemarkReport {
    pub fn non_unique(&self) -> bool {
        self.distinct_limits.len() >= 2
    }

    /// Sampled inequality holds, the strict norm condition fails, and the
    /// runs found more than one coupled fixed point.
    pub fn split_verdict(&self) -> bool {
        self.non_unique()
            && self.certificate.pointwise_ok(self.tol)
            && !self.certificate.norm_condition_ok
    }
}

pub fn demo_remark_22(
    starts: &[(f64, f64)],
    k: f64,
    options: &CertifyOptions,
) -> Result<RemarkReport, SolverError> {
    let space = DiagMetric::new(k)?;
    let midpoint = |x: &f64, y: &f64| (x + y) / 2.0;
    let a = Element::scalar(FRAC_1_SQRT_2, 2);
    let certificate = certify(
        ContractionKind::Banach,
        &midpoint,
        &space,
        &Coefficients::banach(a),
        options,
    )?;

    let mut runs = Vec::with_capacity(starts.len());
    let mut limits: Vec<f64> = Vec::new();
    for &(x0, y0) in starts {
        let trace = solve_coupled(&midpoint, &space, x0, y0, &SolveConfig::default())?;
        let limit = trace.result;
        if let Some((x, _)) = limit {
            if !limits.iter().any(|l| (l - x).abs() <= DISTINCT_TOL) {
                limits.push(x);
            }
        }
        runs.push(RemarkRun {
            start: (x0, y0),
            limit,
            iterations: trace.steps.len(),
        });
    }
    limits.sort_by(f64::total_cmp);

    Ok(RemarkReport {
        k,
        runs,
        distinct_limits: limits,
        certificate,
        tol: options.tol,
    })
}
