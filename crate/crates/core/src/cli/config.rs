//! Run configuration documents.
//!
//! A configuration is a TOML document. Every command accepts the common
//! top-level keys `command`, `seed` (default 42), `tol` (default 1e-10) and
//! `output_dir`; the remaining keys depend on the command and are listed in
//! the repository README. Unknown keys are rejected.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

use crate::algebra::{Element, DEFAULT_POSITIVITY_TOL};
use crate::fredholm::{ForcingForm, FredholmSpec, KernelForm, NonlinearityForm};
use crate::metric::DEFAULT_SAMPLE_RANGE;
use crate::solver::ContractionKind;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_MAX_ITERS: usize = 10_000;
pub const DEFAULT_EPS_ABS: f64 = 1e-12;
const DEFAULT_AXIOM_SAMPLES: usize = 1000;
const DEFAULT_CERTIFY_SAMPLES: usize = 2000;
/// Largest grid accepted from a configuration.
pub const MAX_GRID_NODES: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },
    #[error("missing required field `{field}`")]
    MissingRequired { field: String },
    #[error("invalid value for `{field}`: {message}")]
    InvalidValue { field: String, message: String },
    #[error("document declares command `{declared}` but `{requested}` was requested")]
    CommandMismatch {
        declared: Command,
        requested: Command,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    VerifyMetric,
    Certify,
    SolveCoupled,
    SolveFredholm,
    DemoRemark22,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::VerifyMetric,
        Command::Certify,
        Command::SolveCoupled,
        Command::SolveFredholm,
        Command::DemoRemark22,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyMetric => "verify-metric",
            Command::Certify => "certify",
            Command::SolveCoupled => "solve-coupled",
            Command::SolveFredholm => "solve-fredholm",
            Command::DemoRemark22 => "demo-remark22",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ConfigError::InvalidValue {
                field: "command".into(),
                message: format!("unknown command `{s}`"),
            })
    }
}

/// Which metric space to build.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MetricSpec {
    Scalar { range: Option<f64> },
    Diag { k: f64, range: Option<f64> },
    Grid { n: usize, range: Option<f64> },
}

impl MetricSpec {
    pub fn range(&self) -> f64 {
        match *self {
            MetricSpec::Scalar { range }
            | MetricSpec::Diag { range, .. }
            | MetricSpec::Grid { range, .. } => range.unwrap_or(DEFAULT_SAMPLE_RANGE),
        }
    }

    pub fn algebra_dim(&self) -> usize {
        match *self {
            MetricSpec::Scalar { .. } => 1,
            MetricSpec::Diag { .. } => 2,
            MetricSpec::Grid { n, .. } => n,
        }
    }
}

/// Built-in coupled maps, applied componentwise to grid functions.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MapSpec {
    /// `(x + y) / 2`
    Midpoint,
    /// `x_coeff * x + y_coeff * y + offset`
    Affine {
        x_coeff: f64,
        y_coeff: f64,
        offset: f64,
    },
    /// `value`
    Constant { value: f64 },
    /// `center + rate * (x - center)`
    Contract { center: f64, rate: f64 },
}

impl MapSpec {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match *self {
            MapSpec::Midpoint => (x + y) / 2.0,
            MapSpec::Affine {
                x_coeff,
                y_coeff,
                offset,
            } => x_coeff * x + y_coeff * y + offset,
            MapSpec::Constant { value } => value,
            MapSpec::Contract { center, rate } => center + rate * (x - center),
        }
    }

    fn params(&self) -> Vec<f64> {
        match *self {
            MapSpec::Midpoint => vec![],
            MapSpec::Affine {
                x_coeff,
                y_coeff,
                offset,
            } => vec![x_coeff, y_coeff, offset],
            MapSpec::Constant { value } => vec![value],
            MapSpec::Contract { center, rate } => vec![center, rate],
        }
    }
}

/// A coefficient: a real scalar (times the identity) or a real matrix.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum CoeffSpec {
    Scalar(f64),
    Matrix(Vec<Vec<f64>>),
}

impl CoeffSpec {
    pub fn to_element(&self, dim: usize) -> Result<Element, ConfigError> {
        let invalid = |message: String| ConfigError::InvalidValue {
            field: "contraction".into(),
            message,
        };
        match self {
            CoeffSpec::Scalar(c) => Ok(Element::scalar(*c, dim)),
            CoeffSpec::Matrix(rows) => {
                Element::from_real_rows(rows).map_err(|e| invalid(e.to_string()))
            }
        }
    }

    fn values(&self) -> Vec<f64> {
        match self {
            CoeffSpec::Scalar(c) => vec![*c],
            CoeffSpec::Matrix(rows) => rows.iter().flatten().copied().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractionSpec {
    pub kind: KindName,
    pub a: CoeffSpec,
    pub b: Option<CoeffSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindName {
    Banach,
    Kannan,
    Chatterjea,
}

impl From<KindName> for ContractionKind {
    fn from(k: KindName) -> Self {
        match k {
            KindName::Banach => ContractionKind::Banach,
            KindName::Kannan => ContractionKind::Kannan,
            KindName::Chatterjea => ContractionKind::Chatterjea,
        }
    }
}

/// A starting point: a real number, or a vector for grid metrics.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl PointSpec {
    fn values(&self) -> Vec<f64> {
        match self {
            PointSpec::Scalar(v) => vec![*v],
            PointSpec::Vector(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSettings {
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_eps_abs")]
    pub eps_abs: f64,
    /// Banach coefficient used for a-priori bound tracking.
    pub bound_a: Option<CoeffSpec>,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            max_iters: DEFAULT_MAX_ITERS,
            eps_abs: DEFAULT_EPS_ABS,
            bound_a: None,
        }
    }
}

fn default_max_iters() -> usize {
    DEFAULT_MAX_ITERS
}

fn default_eps_abs() -> f64 {
    DEFAULT_EPS_ABS
}

#[derive(Clone, Debug, PartialEq)]
pub enum Job {
    VerifyMetric {
        metric: MetricSpec,
        samples: usize,
    },
    Certify {
        metric: MetricSpec,
        map: MapSpec,
        contraction: ContractionSpec,
        samples: usize,
    },
    SolveCoupled {
        metric: MetricSpec,
        map: MapSpec,
        x0: PointSpec,
        y0: PointSpec,
        solver: SolverSettings,
    },
    SolveFredholm {
        problem: FredholmSpec,
        sample_range: f64,
        samples: usize,
        solver: SolverSettings,
    },
    DemoRemark22 {
        k: f64,
        starts: Vec<(f64, f64)>,
        samples: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub tol: f64,
    pub output_dir: Option<PathBuf>,
    pub job: Job,
}

// Per-command document layouts. Common keys are repeated in each so that
// `deny_unknown_fields` stays effective.

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyMetricDoc {
    #[allow(dead_code)]
    command: Option<String>,
    seed: Option<u64>,
    tol: Option<f64>,
    output_dir: Option<PathBuf>,
    samples: Option<usize>,
    metric: MetricSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CertifyDoc {
    #[allow(dead_code)]
    command: Option<String>,
    seed: Option<u64>,
    tol: Option<f64>,
    output_dir: Option<PathBuf>,
    samples: Option<usize>,
    metric: MetricSpec,
    map: MapSpec,
    contraction: ContractionSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveCoupledDoc {
    #[allow(dead_code)]
    command: Option<String>,
    seed: Option<u64>,
    tol: Option<f64>,
    output_dir: Option<PathBuf>,
    metric: MetricSpec,
    map: MapSpec,
    x0: PointSpec,
    y0: PointSpec,
    solver: Option<SolverSettings>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainDoc {
    lo: f64,
    hi: f64,
    n: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveFredholmDoc {
    #[allow(dead_code)]
    command: Option<String>,
    seed: Option<u64>,
    tol: Option<f64>,
    output_dir: Option<PathBuf>,
    samples: Option<usize>,
    /// Half-width of the sampling box for the monotonicity check.
    range: Option<f64>,
    k: f64,
    domain: DomainDoc,
    kernel1: KernelForm,
    kernel2: KernelForm,
    f: NonlinearityForm,
    g: NonlinearityForm,
    h: ForcingForm,
    solver: Option<SolverSettings>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DemoRemarkDoc {
    #[allow(dead_code)]
    command: Option<String>,
    seed: Option<u64>,
    tol: Option<f64>,
    output_dir: Option<PathBuf>,
    samples: Option<usize>,
    k: Option<f64>,
    starts: Vec<[f64; 2]>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

fn backticked(message: &str) -> Option<String> {
    let start = message.find('`')? + 1;
    let len = message[start..].find('`')?;
    Some(message[start..start + len].to_string())
}

fn classify(err: toml::de::Error, text: &str) -> ConfigError {
    let message = err.message().trim().to_string();
    let (line, column) = err.span().map_or((0, 0), |span| line_col(text, span.start));
    if message.starts_with("unknown field") {
        if let Some(key) = backticked(&message) {
            return ConfigError::UnknownKey { key, line };
        }
    }
    if message.starts_with("missing field") {
        if let Some(field) = backticked(&message) {
            return ConfigError::MissingRequired { field };
        }
    }
    ConfigError::Parse {
        line,
        column,
        message,
    }
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        field: field.into(),
        message: message.into(),
    }
}

fn finite(field: &str, values: impl IntoIterator<Item = f64>) -> Result<(), ConfigError> {
    for v in values {
        if !v.is_finite() {
            return Err(invalid(field, format!("{v} is not finite")));
        }
    }
    Ok(())
}

fn positive_count(field: &str, n: usize) -> Result<usize, ConfigError> {
    if n == 0 {
        Err(invalid(field, "must be at least 1"))
    } else {
        Ok(n)
    }
}

fn check_tol(tol: Option<f64>) -> Result<f64, ConfigError> {
    let tol = tol.unwrap_or(DEFAULT_POSITIVITY_TOL);
    if tol.is_finite() && tol >= 0.0 {
        Ok(tol)
    } else {
        Err(invalid(
            "tol",
            format!("{tol} must be finite and nonnegative"),
        ))
    }
}

fn check_metric(metric: &MetricSpec) -> Result<(), ConfigError> {
    let range = metric.range();
    if !(range.is_finite() && range > 0.0) {
        return Err(invalid(
            "metric.range",
            format!("{range} must be finite and positive"),
        ));
    }
    match *metric {
        MetricSpec::Scalar { .. } => Ok(()),
        MetricSpec::Diag { k, .. } => {
            if k.is_finite() && k > 0.0 {
                Ok(())
            } else {
                Err(invalid(
                    "metric.k",
                    format!("{k} must be finite and positive"),
                ))
            }
        }
        MetricSpec::Grid { n, .. } => {
            if (2..=MAX_GRID_NODES).contains(&n) {
                Ok(())
            } else {
                Err(invalid(
                    "metric.n",
                    format!("grid size must lie in 2..={MAX_GRID_NODES}"),
                ))
            }
        }
    }
}

fn check_point(field: &str, p: &PointSpec, metric: &MetricSpec) -> Result<(), ConfigError> {
    finite(field, p.values())?;
    match (p, metric) {
        (PointSpec::Scalar(_), MetricSpec::Grid { .. }) => {
            Err(invalid(field, "grid metric needs a vector of grid values"))
        }
        (PointSpec::Vector(_), MetricSpec::Scalar { .. } | MetricSpec::Diag { .. }) => Err(
            invalid(field, "this metric takes real numbers, not vectors"),
        ),
        (PointSpec::Vector(v), MetricSpec::Grid { n, .. }) if v.len() != *n => Err(invalid(
            field,
            format!("expected {n} grid values, got {}", v.len()),
        )),
        _ => Ok(()),
    }
}

fn check_solver(s: &SolverSettings) -> Result<(), ConfigError> {
    if s.max_iters == 0 {
        return Err(invalid("solver.max_iters", "must be at least 1"));
    }
    if !(s.eps_abs.is_finite() && s.eps_abs > 0.0) {
        return Err(invalid(
            "solver.eps_abs",
            format!("{} must be positive", s.eps_abs),
        ));
    }
    if let Some(a) = &s.bound_a {
        finite("solver.bound_a", a.values())?;
    }
    Ok(())
}

/// Parses a document that names its own `command`.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_with(None, text)
}

/// Parses a document for `command`; a `command` key in the document, if
/// present, must agree.
pub fn parse_config_for(command: Command, text: &str) -> Result<RunConfig, ConfigError> {
    parse_with(Some(command), text)
}

fn parse_with(requested: Option<Command>, text: &str) -> Result<RunConfig, ConfigError> {
    let table: toml::Table = toml::from_str(text).map_err(|e| classify(e, text))?;
    let declared = match table.get("command") {
        None => None,
        Some(toml::Value::String(s)) => Some(s.parse::<Command>()?),
        Some(_) => return Err(invalid("command", "must be a string")),
    };
    let command = match (requested, declared) {
        (Some(r), Some(d)) if r != d => {
            return Err(ConfigError::CommandMismatch {
                declared: d,
                requested: r,
            })
        }
        (Some(c), _) | (None, Some(c)) => c,
        (None, None) => {
            return Err(ConfigError::MissingRequired {
                field: "command".into(),
            })
        }
    };
    macro_rules! doc {
        ($ty:ty) => {
            toml::from_str::<$ty>(text).map_err(|e| classify(e, text))?
        };
    }

    let (seed, tol, output_dir, job) = match command {
        Command::VerifyMetric => {
            let d = doc!(VerifyMetricDoc);
            check_metric(&d.metric)?;
            let samples = positive_count("samples", d.samples.unwrap_or(DEFAULT_AXIOM_SAMPLES))?;
            (
                d.seed,
                d.tol,
                d.output_dir,
                Job::VerifyMetric {
                    metric: d.metric,
                    samples,
                },
            )
        }
        Command::Certify => {
            let d = doc!(CertifyDoc);
            check_metric(&d.metric)?;
            finite("map", d.map.params())?;
            finite("contraction.a", d.contraction.a.values())?;
            if let Some(b) = &d.contraction.b {
                finite("contraction.b", b.values())?;
            }
            let samples = positive_count("samples", d.samples.unwrap_or(DEFAULT_CERTIFY_SAMPLES))?;
            (
                d.seed,
                d.tol,
                d.output_dir,
                Job::Certify {
                    metric: d.metric,
                    map: d.map,
                    contraction: d.contraction,
                    samples,
                },
            )
        }
        Command::SolveCoupled => {
            let d = doc!(SolveCoupledDoc);
            check_metric(&d.metric)?;
            finite("map", d.map.params())?;
            check_point("x0", &d.x0, &d.metric)?;
            check_point("y0", &d.y0, &d.metric)?;
            let solver = d.solver.unwrap_or_default();
            check_solver(&solver)?;
            (
                d.seed,
                d.tol,
                d.output_dir,
                Job::SolveCoupled {
                    metric: d.metric,
                    map: d.map,
                    x0: d.x0,
                    y0: d.y0,
                    solver,
                },
            )
        }
        Command::SolveFredholm => {
            let d = doc!(SolveFredholmDoc);
            let solver = d.solver.unwrap_or_default();
            check_solver(&solver)?;
            if solver.bound_a.is_some() {
                return Err(invalid(
                    "solver.bound_a",
                    "fredholm runs derive the bound coefficient from k",
                ));
            }
            finite("domain", [d.domain.lo, d.domain.hi])?;
            if d.domain.lo >= d.domain.hi {
                return Err(invalid("domain", "lo must be less than hi"));
            }
            if !(2..=MAX_GRID_NODES).contains(&d.domain.n) {
                return Err(invalid(
                    "domain.n",
                    format!("grid size must lie in 2..={MAX_GRID_NODES}"),
                ));
            }
            if !(d.k > 0.0 && d.k < 0.5) {
                return Err(invalid("k", format!("{} must lie in (0, 1/2)", d.k)));
            }
            let sample_range = d.range.unwrap_or(DEFAULT_SAMPLE_RANGE);
            if !(sample_range.is_finite() && sample_range > 0.0) {
                return Err(invalid("range", "must be finite and positive"));
            }
            let problem = FredholmSpec {
                lo: d.domain.lo,
                hi: d.domain.hi,
                n: d.domain.n,
                k: d.k,
                k1: d.kernel1,
                k2: d.kernel2,
                f: d.f,
                g: d.g,
                h: d.h,
            };
            problem
                .to_problem()
                .map_err(|e| invalid("fredholm", e.to_string()))?;
            let samples = positive_count("samples", d.samples.unwrap_or(DEFAULT_CERTIFY_SAMPLES))?;
            (
                d.seed,
                d.tol,
                d.output_dir,
                Job::SolveFredholm {
                    problem,
                    sample_range,
                    samples,
                    solver,
                },
            )
        }
        Command::DemoRemark22 => {
            let d = doc!(DemoRemarkDoc);
            let k = d.k.unwrap_or(1.0);
            if !(k.is_finite() && k > 0.0) {
                return Err(invalid("k", format!("{k} must be finite and positive")));
            }
            if d.starts.is_empty() {
                return Err(invalid("starts", "need at least one start"));
            }
            finite("starts", d.starts.iter().flatten().copied())?;
            let samples = positive_count("samples", d.samples.unwrap_or(DEFAULT_CERTIFY_SAMPLES))?;
            (
                d.seed,
                d.tol,
                d.output_dir,
                Job::DemoRemark22 {
                    k,
                    starts: d.starts.iter().map(|s| (s[0], s[1])).collect(),
                    samples,
                },
            )
        }
    };

    Ok(RunConfig {
        command,
        seed: seed.unwrap_or(DEFAULT_SEED),
        tol: check_tol(tol)?,
        output_dir,
        job,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_solve_coupled_gets_defaults() {
        let cfg = parse_config(
            r#"
command = "solve-coupled"
x0 = 0
y0 = 4.0
[metric]
kind = "scalar"
[map]
kind = "midpoint"
"#,
        )
        .unwrap();
        assert_eq!(cfg.command, Command::SolveCoupled);
        assert_eq!(cfg.seed, 42);
        match cfg.job {
            Job::SolveCoupled { solver, x0, .. } => {
                assert_eq!(solver.eps_abs, 1e-12);
                assert_eq!(solver.max_iters, 10_000);
                assert_eq!(x0, PointSpec::Scalar(0.0));
            }
            other => panic!("unexpected job {other:?}"),
        }
    }

    #[test]
    fn negative_eps_is_rejected() {
        let err = parse_config(
            r#"
command = "solve-coupled"
x0 = 0.0
y0 = 4.0
[metric]
kind = "scalar"
[map]
kind = "midpoint"
[solver]
eps_abs = -1.0
"#,
        )
        .unwrap_err();
        assert!(
            matches!(err, ConfigError::InvalidValue { ref field, .. } if field == "solver.eps_abs")
        );
    }

    #[test]
    fn product_kernel_from_registry() {
        let cfg = parse_config_for(
            Command::SolveFredholm,
            r#"
k = 0.25
[domain]
lo = 0.0
hi = 1.0
n = 101
[kernel1]
kind = "product"
c = 0.25
[kernel2]
kind = "zero"
[f]
kind = "linear"
c = 0.25
[g]
kind = "zero"
[h]
kind = "linear"
c = 1.0
"#,
        )
        .unwrap();
        match cfg.job {
            Job::SolveFredholm { problem, .. } => {
                assert_eq!(problem.k1, KernelForm::Product { c: 0.25 });
                assert_eq!(problem.k2, KernelForm::Zero);
            }
            other => panic!("unexpected job {other:?}"),
        }
    }

    #[test]
    fn unknown_key_reports_line() {
        let err = parse_config(
            "command = \"verify-metric\"\nsamples = 10\nbogus = 1\n[metric]\nkind = \"scalar\"\n",
        )
        .unwrap_err();
        assert_eq!(
            err,
            ConfigError::UnknownKey {
                key: "bogus".into(),
                line: 3
            }
        );
        let err = parse_config(
            "command = \"verify-metric\"\n[metric]\nkind = \"diag\"\nk = 1.0\nwidth = 2\n",
        )
        .unwrap_err();
        assert!(
            matches!(err, ConfigError::UnknownKey { ref key, .. } if key == "width"),
            "{err:?}"
        );
    }

    #[test]
    fn missing_fields_and_commands() {
        let err = parse_config("command = \"verify-metric\"\n").unwrap_err();
        assert_eq!(
            err,
            ConfigError::MissingRequired {
                field: "metric".into()
            }
        );
        let err = parse_config("seed = 1\n").unwrap_err();
        assert_eq!(
            err,
            ConfigError::MissingRequired {
                field: "command".into()
            }
        );
        let err = parse_config("command = \"frobnicate\"\n").unwrap_err();
        assert!(matches!(err, ConfigError::InvalidValue { .. }));
        let err = parse_config_for(Command::Certify, "command = \"verify-metric\"\n").unwrap_err();
        assert!(matches!(err, ConfigError::CommandMismatch { .. }));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_config("command = \"certify\"\nseed = = 3\n").unwrap_err();
        match err {
            ConfigError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_finite_values_are_rejected() {
        let err = parse_config("command = \"demo-remark22\"\nstarts = [[0.0, nan]]\n").unwrap_err();
        assert!(matches!(err, ConfigError::InvalidValue { ref field, .. } if field == "starts"));
        let err = parse_config("command = \"verify-metric\"\n[metric]\nkind = \"diag\"\nk = inf\n")
            .unwrap_err();
        assert!(matches!(err, ConfigError::InvalidValue { .. }));
    }

    #[test]
    fn grid_points_must_match_grid() {
        let err = parse_config(
            r#"
command = "solve-coupled"
x0 = [0.0, 1.0]
y0 = [0.0, 1.0, 2.0]
[metric]
kind = "grid"
n = 3
[map]
kind = "midpoint"
"#,
        )
        .unwrap_err();
        assert!(matches!(err, ConfigError::InvalidValue { ref field, .. } if field == "x0"));
    }

    #[test]
    fn matrix_coefficients_parse() {
        let cfg = parse_config(
            r#"
command = "certify"
[metric]
kind = "diag"
k = 2.0
[map]
kind = "midpoint"
[contraction]
kind = "banach"
a = [[0.5, 0.0], [0.0, 0.5]]
"#,
        )
        .unwrap();
        match cfg.job {
            Job::Certify { contraction, .. } => {
                let a = contraction.a.to_element(2).unwrap();
                assert_eq!(a, Element::scalar(0.5, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
