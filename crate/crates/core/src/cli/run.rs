use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::config::{CoeffSpec, Job, MapSpec, MetricSpec, PointSpec, RunConfig, SolverSettings};
use crate::fredholm::{self, FredholmConfig, FredholmError, FredholmSpec};
use crate::metric::{
    check_axioms, DiagMetric, GridFunctionMetric, MetricError, MetricSpace, ScalarMetric, SupNorm,
};
use crate::solver::{
    certify, demo_remark_22, solve_coupled, CertifyOptions, Coefficients, ContractionKind,
    CoupledMap, IterationTrace, SolveConfig, SolverError, REMARK_VERDICT,
};

pub const TRACE_FILE: &str = "trace.csv";
pub const SUMMARY_FILE: &str = "summary.txt";
pub const TRACE_HEADER: &str = "n,delta_norm,apriori_bound,x_norm";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    Usage,
    Refuted,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::Usage => 1,
            ExitStatus::Refuted => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub status: ExitStatus,
    pub trace_csv: String,
    pub summary: String,
}

/// Failures that make a run meaningless; these map to exit status 1.
#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl RunError {
    pub fn status(&self) -> ExitStatus {
        ExitStatus::Usage
    }
}

fn usage(e: impl ToString) -> RunError {
    RunError::Usage(e.to_string())
}

/// Applies a [`MapSpec`] to scalars, or node by node to grid functions.
struct Componentwise(MapSpec);

impl CoupledMap<f64> for Componentwise {
    fn apply(&self, x: &f64, y: &f64) -> f64 {
        self.0.eval(*x, *y)
    }
}

impl CoupledMap<Vec<f64>> for Componentwise {
    fn apply(&self, x: &Vec<f64>, y: &Vec<f64>) -> Vec<f64> {
        x.iter().zip(y).map(|(a, b)| self.0.eval(*a, *b)).collect()
    }
}

trait CliPoint: Sized + SupNorm {
    fn from_spec(p: &PointSpec) -> Option<Self>;
}

impl CliPoint for f64 {
    fn from_spec(p: &PointSpec) -> Option<Self> {
        match p {
            PointSpec::Scalar(v) => Some(*v),
            PointSpec::Vector(_) => None,
        }
    }
}

impl CliPoint for Vec<f64> {
    fn from_spec(p: &PointSpec) -> Option<Self> {
        match p {
            PointSpec::Vector(v) => Some(v.clone()),
            PointSpec::Scalar(_) => None,
        }
    }
}

macro_rules! with_space {
    ($spec:expr, |$space:ident| $body:expr) => {
        match *$spec {
            MetricSpec::Scalar { .. } => {
                let $space = ScalarMetric::new()
                    .with_range($spec.range())
                    .map_err(usage)?;
                $body
            }
            MetricSpec::Diag { k, .. } => {
                let $space = DiagMetric::new(k)
                    .and_then(|m| m.with_range($spec.range()))
                    .map_err(usage)?;
                $body
            }
            MetricSpec::Grid { n, .. } => {
                let $space = GridFunctionMetric::new(n)
                    .and_then(|m| m.with_range($spec.range()))
                    .map_err(usage)?;
                $body
            }
        }
    };
}

fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

/// Renders a trace as CSV, one row per iteration.
pub fn trace_to_csv<P: SupNorm>(trace: &IterationTrace<P>) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for step in &trace.steps {
        let bound = step.apriori_bound.map(fmt_f).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            step.n,
            fmt_f(step.delta_norm),
            bound,
            fmt_f(step.x.sup_norm())
        );
    }
    out
}

fn empty_trace() -> String {
    format!("{TRACE_HEADER}\n")
}

fn metric_label(m: &MetricSpec) -> String {
    match *m {
        MetricSpec::Scalar { .. } => "scalar".into(),
        MetricSpec::Diag { k, .. } => format!("diag (k = {k})"),
        MetricSpec::Grid { n, .. } => format!("grid (n = {n})"),
    }
}

/// Executes `config` and returns the files' contents without touching disk.
pub fn run(config: &RunConfig) -> Result<RunOutcome, RunError> {
    let mut summary = String::new();
    let _ = writeln!(summary, "command: {}", config.command);
    let _ = writeln!(summary, "seed: {}", config.seed);
    let (status, trace_csv) = match &config.job {
        Job::VerifyMetric { metric, samples } => {
            verify_metric(config, metric, *samples, &mut summary)?
        }
        Job::Certify {
            metric,
            map,
            contraction,
            samples,
        } => {
            let kind = ContractionKind::from(contraction.kind);
            let dim = metric.algebra_dim();
            let a = contraction.a.to_element(dim).map_err(usage)?;
            let b = contraction
                .b
                .as_ref()
                .map(|b| b.to_element(dim))
                .transpose()
                .map_err(usage)?;
            let coefficients = Coefficients { a, b };
            let options = CertifyOptions {
                num_samples: *samples,
                seed: config.seed,
                tol: config.tol,
            };
            let map = Componentwise(*map);
            let _ = writeln!(summary, "metric: {}", metric_label(metric));
            with_space!(metric, |space| certify_run(
                kind,
                &map,
                &space,
                &coefficients,
                &options,
                &mut summary
            )?)
        }
        Job::SolveCoupled {
            metric,
            map,
            x0,
            y0,
            solver,
        } => {
            let map = Componentwise(*map);
            let _ = writeln!(summary, "metric: {}", metric_label(metric));
            let solve = solve_config(solver, metric.algebra_dim())?;
            with_space!(metric, |space| solve_run(
                &map,
                &space,
                x0,
                y0,
                &solve,
                &mut summary
            )?)
        }
        Job::SolveFredholm {
            problem,
            sample_range,
            samples,
            solver,
        } => fredholm_run(
            config,
            problem,
            *sample_range,
            *samples,
            solver,
            &mut summary,
        )?,
        Job::DemoRemark22 { k, starts, samples } => {
            let options = CertifyOptions {
                num_samples: *samples,
                seed: config.seed,
                tol: config.tol,
            };
            demo_run(*k, starts, &options, &mut summary)?
        }
    };
    let _ = writeln!(summary, "exit: {}", status.code());
    Ok(RunOutcome {
        status,
        trace_csv,
        summary,
    })
}

/// Runs `config` and writes `trace.csv` and `summary.txt` into `dir`.
pub fn run_to_dir(config: &RunConfig, dir: &Path) -> Result<RunOutcome, RunError> {
    let outcome = run(config)?;
    fs::create_dir_all(dir).map_err(|source| RunError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    for (name, contents) in [
        (TRACE_FILE, &outcome.trace_csv),
        (SUMMARY_FILE, &outcome.summary),
    ] {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|source| RunError::Io { path, source })?;
    }
    Ok(outcome)
}

fn solve_config(s: &SolverSettings, dim: usize) -> Result<SolveConfig, RunError> {
    let bound_tracking = s
        .bound_a
        .as_ref()
        .map(|a: &CoeffSpec| a.to_element(dim))
        .transpose()
        .map_err(usage)?;
    Ok(SolveConfig {
        max_iters: s.max_iters,
        eps_abs: s.eps_abs,
        bound_tracking,
    })
}

fn verify_metric(
    config: &RunConfig,
    metric: &MetricSpec,
    samples: usize,
    summary: &mut String,
) -> Result<(ExitStatus, String), RunError> {
    let report = with_space!(metric, |space| check_axioms(
        &space,
        samples,
        config.seed,
        config.tol
    ));
    let _ = writeln!(summary, "metric: {}", metric_label(metric));
    let _ = writeln!(summary, "samples: {}", report.samples_checked);
    let _ = writeln!(
        summary,
        "identity of indiscernibles: {}",
        ok(report.identity_ok)
    );
    let _ = writeln!(
        summary,
        "worst positivity defect: {}",
        fmt_f(report.worst_positivity_defect)
    );
    let _ = writeln!(
        summary,
        "worst symmetry defect: {}",
        fmt_f(report.worst_symmetry_defect)
    );
    let _ = writeln!(
        summary,
        "worst triangle defect: {}",
        fmt_f(report.worst_triangle_defect)
    );
    let _ = writeln!(summary, "evaluation errors: {}", report.evaluation_errors);
    let _ = writeln!(
        summary,
        "verdict: {}",
        if report.passed {
            "axioms hold on all samples"
        } else {
            "axioms refuted"
        }
    );
    let status = if report.passed {
        ExitStatus::Success
    } else {
        ExitStatus::Refuted
    };
    Ok((status, empty_trace()))
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "violated"
    }
}

fn certify_run<M>(
    kind: ContractionKind,
    map: &Componentwise,
    space: &M,
    coefficients: &Coefficients,
    options: &CertifyOptions,
    summary: &mut String,
) -> Result<(ExitStatus, String), RunError>
where
    M: MetricSpace,
    Componentwise: CoupledMap<M::Point>,
{
    let cert = match certify(kind, map, space, coefficients, options) {
        Ok(c) => c,
        Err(e) => return Err(usage(e)),
    };
    let _ = writeln!(summary, "kind: {}", cert.kind);
    let _ = writeln!(summary, "||a||: {}", fmt_f(cert.a_norm));
    if let Some(b) = cert.b_norm {
        let _ = writeln!(summary, "||b||: {}", fmt_f(b));
    }
    let _ = writeln!(summary, "ratio: {}", fmt_f(cert.ratio));
    let _ = writeln!(summary, "norm condition: {}", ok(cert.norm_condition_ok));
    let _ = writeln!(summary, "samples: {}", cert.samples_checked);
    let _ = writeln!(summary, "evaluation errors: {}", cert.evaluation_errors);
    let _ = writeln!(summary, "worst defect: {}", fmt_f(cert.worst_defect));
    let _ = writeln!(
        summary,
        "pointwise inequality: {}",
        ok(cert.pointwise_ok(options.tol))
    );
    let verdict = if cert.passed {
        "certified on all samples".to_string()
    } else if !cert.norm_condition_ok {
        "refuted: norm condition violated".to_string()
    } else {
        "refuted: pointwise inequality violated".to_string()
    };
    let _ = writeln!(summary, "verdict: {verdict}");
    let status = if cert.passed {
        ExitStatus::Success
    } else {
        ExitStatus::Refuted
    };
    Ok((status, empty_trace()))
}

fn write_residuals<P: Clone>(trace: &IterationTrace<P>, summary: &mut String) {
    if let Some(r) = trace.residuals {
        let _ = writeln!(summary, "residual d(F(x,y),x): {}", fmt_f(r.x_residual));
        let _ = writeln!(summary, "residual d(F(y,x),y): {}", fmt_f(r.y_residual));
        let _ = writeln!(summary, "gap d(x,y): {}", fmt_f(r.diagonal_gap));
    }
}

fn solve_run<M>(
    map: &Componentwise,
    space: &M,
    x0: &PointSpec,
    y0: &PointSpec,
    config: &SolveConfig,
    summary: &mut String,
) -> Result<(ExitStatus, String), RunError>
where
    M: MetricSpace,
    M::Point: CliPoint,
    Componentwise: CoupledMap<M::Point>,
{
    let mismatch = || usage("starting point does not match the metric's point type");
    let x0 = M::Point::from_spec(x0).ok_or_else(mismatch)?;
    let y0 = M::Point::from_spec(y0).ok_or_else(mismatch)?;
    let trace = match solve_coupled(map, space, x0, y0, config) {
        Ok(t) => t,
        Err(SolverError::Metric(e)) => {
            let _ = writeln!(summary, "verdict: iteration failed: {e}");
            return Ok((ExitStatus::Refuted, empty_trace()));
        }
        Err(e) => return Err(usage(e)),
    };
    if let Some(q) = trace.contraction_q {
        let _ = writeln!(summary, "contraction q: {}", fmt_f(q));
    }
    let _ = writeln!(summary, "iterations: {}", trace.iterations());
    if let Some(last) = trace.steps.last() {
        let _ = writeln!(summary, "last delta: {}", fmt_f(last.delta_norm));
    }
    let status = match &trace.result {
        Some((x, y)) if trace.converged => {
            let _ = writeln!(summary, "limit x sup-norm: {}", fmt_f(x.sup_norm()));
            let _ = writeln!(summary, "limit y sup-norm: {}", fmt_f(y.sup_norm()));
            write_residuals(&trace, summary);
            let _ = writeln!(summary, "verdict: converged");
            ExitStatus::Success
        }
        _ => {
            let _ = writeln!(summary, "verdict: did not converge");
            ExitStatus::Refuted
        }
    };
    Ok((status, trace_to_csv(&trace)))
}

fn fredholm_run(
    config: &RunConfig,
    spec: &FredholmSpec,
    sample_range: f64,
    samples: usize,
    solver: &SolverSettings,
    summary: &mut String,
) -> Result<(ExitStatus, String), RunError> {
    let problem = spec
        .to_problem()
        .and_then(|p| p.with_sample_range(sample_range))
        .map_err(usage)?;
    let fconfig = FredholmConfig {
        solver: SolveConfig {
            max_iters: solver.max_iters,
            eps_abs: solver.eps_abs,
            bound_tracking: None,
        },
        assumption_samples: samples,
        seed: config.seed,
    };
    let _ = writeln!(summary, "domain: [{}, {}]", spec.lo, spec.hi);
    let _ = writeln!(summary, "grid nodes: {}", spec.n);
    let _ = writeln!(summary, "k: {}", spec.k);
    let solution = match fredholm::solve(&problem, &fconfig) {
        Ok(s) => s,
        Err(FredholmError::AssumptionsViolated(report)) => {
            let _ = writeln!(summary, "assumptions: {report}");
            let _ = writeln!(summary, "verdict: assumptions violated");
            return Ok((ExitStatus::Refuted, empty_trace()));
        }
        Err(FredholmError::NotConverged(trace)) => {
            let _ = writeln!(summary, "iterations: {}", trace.iterations());
            let _ = writeln!(summary, "verdict: did not converge");
            return Ok((ExitStatus::Refuted, trace_to_csv(&trace)));
        }
        Err(FredholmError::Solver(SolverError::Metric(e))) => {
            let _ = writeln!(summary, "verdict: iteration failed: {e}");
            return Ok((ExitStatus::Refuted, empty_trace()));
        }
        Err(e) => return Err(usage(e)),
    };
    let _ = writeln!(summary, "assumptions: {}", solution.assumptions);
    let _ = writeln!(
        summary,
        "kernel bound: {}",
        fmt_f(solution.assumptions.kernel_bound)
    );
    if let Some(q) = solution.trace.contraction_q {
        let _ = writeln!(summary, "contraction q: {}", fmt_f(q));
    }
    let _ = writeln!(summary, "iterations: {}", solution.trace.iterations());
    let _ = writeln!(summary, "residual: {}", fmt_f(solution.residual));
    if let Some(exact) = spec.closed_form() {
        let err = solution
            .grid
            .iter()
            .zip(&solution.solution)
            .map(|(t, x)| (x - exact.eval(*t)).abs())
            .fold(0.0, f64::max);
        let _ = writeln!(summary, "closed form: {exact:?}");
        let _ = writeln!(summary, "sup error vs closed form: {}", fmt_f(err));
    } else {
        let _ = writeln!(summary, "closed form: none known");
    }
    let _ = writeln!(summary, "verdict: converged");
    Ok((ExitStatus::Success, trace_to_csv(&solution.trace)))
}

fn demo_run(
    k: f64,
    starts: &[(f64, f64)],
    options: &CertifyOptions,
    summary: &mut String,
) -> Result<(ExitStatus, String), RunError> {
    let report = demo_remark_22(starts, k, options).map_err(usage)?;
    // The first start's iteration is the one recorded in the trace.
    let first = starts[0];
    let space = DiagMetric::new(k).map_err(|e: MetricError| usage(e))?;
    let midpoint = |x: &f64, y: &f64| (x + y) / 2.0;
    let trace = solve_coupled(&midpoint, &space, first.0, first.1, &SolveConfig::default())
        .map_err(usage)?;

    let cert = &report.certificate;
    let _ = writeln!(summary, "k: {}", report.k);
    let _ = writeln!(summary, "||a||: {}", fmt_f(cert.a_norm));
    let _ = writeln!(summary, "norm condition: {}", ok(cert.norm_condition_ok));
    let _ = writeln!(summary, "worst defect: {}", fmt_f(cert.worst_defect));
    let _ = writeln!(
        summary,
        "pointwise inequality: {}",
        ok(cert.pointwise_ok(report.tol))
    );
    let mut all_converged = true;
    for run in &report.runs {
        match run.limit {
            Some((x, y)) => {
                let _ = writeln!(
                    summary,
                    "start ({}, {}) -> limit ({}, {}) after {} iterations",
                    run.start.0, run.start.1, x, y, run.iterations
                );
            }
            None => {
                all_converged = false;
                let _ = writeln!(
                    summary,
                    "start ({}, {}) -> no limit after {} iterations",
                    run.start.0, run.start.1, run.iterations
                );
            }
        }
    }
    let limits: Vec<String> = report
        .distinct_limits
        .iter()
        .map(|l| l.to_string())
        .collect();
    let _ = writeln!(summary, "limits: {}", limits.join(", "));
    let verdict = if report.split_verdict() {
        REMARK_VERDICT
    } else {
        "no split observed"
    };
    let _ = writeln!(summary, "verdict: {verdict}");
    let status = if all_converged {
        ExitStatus::Success
    } else {
        ExitStatus::Refuted
    };
    Ok((status, trace_to_csv(&trace)))
}
