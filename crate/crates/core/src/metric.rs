//! C*-algebra-valued metric spaces `(X, A, d)` and a sampled axiom checker.
//!
//! A metric here maps pairs of points to positive elements of the matrix
//! algebra. The shipped instances are:
//!
//! * [`ScalarMetric`]: `d(x, y) = [[|x - y|]]` on the reals (1x1 algebra),
//! * [`DiagMetric`]: `d(x, y) = diag(|x - y|, k |x - y|)` on the reals,
//! * [`GridFunctionMetric`]: the multiplication operator `M_{|f - g|}` on a
//!   grid, i.e. `diag(|f_1 - g_1|, ..., |f_n - g_n|)`.

use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{AlgebraError, Element};

/// Default half-width of the sampling box for points.
pub const DEFAULT_SAMPLE_RANGE: f64 = 10.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("diag metric needs k > 0, got {0}")]
    NonPositiveK(f64),
    #[error("grid metric needs at least 2 nodes, got {0}")]
    BadGridSize(usize),
    #[error("sample range must be finite and positive, got {0}")]
    BadRange(f64),
    #[error("grid function has {got} values, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    RealScalar,
    RealVector { len: usize },
}

/// Sup-norm of a point, used for trace snapshots.
pub trait SupNorm {
    fn sup_norm(&self) -> f64;
}

impl SupNorm for f64 {
    fn sup_norm(&self) -> f64 {
        self.abs()
    }
}

impl SupNorm for Vec<f64> {
    fn sup_norm(&self) -> f64 {
        self.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// A point set `X` with a metric `d: X x X -> A`.
pub trait MetricSpace {
    type Point: Clone + PartialEq + fmt::Debug;

    fn point_kind(&self) -> PointKind;

    /// Dimension of the matrix algebra the metric takes values in.
    fn algebra_dim(&self) -> usize;

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> Result<Element, MetricError>;

    /// Draws a point for sampled checks.
    fn sample_point(&self, rng: &mut dyn RngCore) -> Self::Point;
}

fn check_range(range: f64) -> Result<f64, MetricError> {
    if range.is_finite() && range > 0.0 {
        Ok(range)
    } else {
        Err(MetricError::BadRange(range))
    }
}

/// The ordinary metric `|x - y|` viewed in the 1x1 algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarMetric {
    range: f64,
}

impl ScalarMetric {
    pub fn new() -> Self {
        ScalarMetric {
            range: DEFAULT_SAMPLE_RANGE,
        }
    }

    pub fn with_range(self, range: f64) -> Result<Self, MetricError> {
        Ok(ScalarMetric {
            range: check_range(range)?,
        })
    }
}

impl Default for ScalarMetric {
    fn default() -> Self {
        Self::new()
    }
}

impl MetricSpace for ScalarMetric {
    type Point = f64;

    fn point_kind(&self) -> PointKind {
        PointKind::RealScalar
    }

    fn algebra_dim(&self) -> usize {
        1
    }

    fn distance(&self, x: &f64, y: &f64) -> Result<Element, MetricError> {
        Ok(Element::from_diagonal(&[(x - y).abs()])?)
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> f64 {
        rng.random_range(-self.range..=self.range)
    }
}

/// `d(x, y) = diag(|x - y|, k |x - y|)` on the reals.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagMetric {
    k: f64,
    range: f64,
}

impl DiagMetric {
    pub fn new(k: f64) -> Result<Self, MetricError> {
        if !(k.is_finite() && k > 0.0) {
            return Err(MetricError::NonPositiveK(k));
        }
        Ok(DiagMetric {
            k,
            range: DEFAULT_SAMPLE_RANGE,
        })
    }

    pub fn with_range(self, range: f64) -> Result<Self, MetricError> {
        Ok(DiagMetric {
            range: check_range(range)?,
            ..self
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }
}

impl MetricSpace for DiagMetric {
    type Point = f64;

    fn point_kind(&self) -> PointKind {
        PointKind::RealScalar
    }

    fn algebra_dim(&self) -> usize {
        2
    }

    fn distance(&self, x: &f64, y: &f64) -> Result<Element, MetricError> {
        let gap = (x - y).abs();
        Ok(Element::from_diagonal(&[gap, self.k * gap])?)
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> f64 {
        rng.random_range(-self.range..=self.range)
    }
}

/// Grid samples of a bounded function with `d(f, g) = M_{|f - g|}`.
///
/// The operator norm of `d(f, g)` is the discrete sup-norm `max_i |f_i - g_i|`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunctionMetric {
    n: usize,
    range: f64,
}

impl GridFunctionMetric {
    pub fn new(n: usize) -> Result<Self, MetricError> {
        if n < 2 {
            return Err(MetricError::BadGridSize(n));
        }
        Ok(GridFunctionMetric {
            n,
            range: DEFAULT_SAMPLE_RANGE,
        })
    }

    pub fn with_range(self, range: f64) -> Result<Self, MetricError> {
        Ok(GridFunctionMetric {
            range: check_range(range)?,
            ..self
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn check_len(&self, f: &[f64]) -> Result<(), MetricError> {
        if f.len() == self.n {
            Ok(())
        } else {
            Err(MetricError::LengthMismatch {
                expected: self.n,
                got: f.len(),
            })
        }
    }
}

impl MetricSpace for GridFunctionMetric {
    type Point = Vec<f64>;

    fn point_kind(&self) -> PointKind {
        PointKind::RealVector { len: self.n }
    }

    fn algebra_dim(&self) -> usize {
        self.n
    }

    fn distance(&self, f: &Vec<f64>, g: &Vec<f64>) -> Result<Element, MetricError> {
        self.check_len(f)?;
        self.check_len(g)?;
        let gaps: Vec<f64> = f.iter().zip(g).map(|(a, b)| (a - b).abs()).collect();
        Ok(Element::from_diagonal(&gaps)?)
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        (0..self.n)
            .map(|_| rng.random_range(-self.range..=self.range))
            .collect()
    }
}

/// A metric assembled from closures; used for ad-hoc and adversarial instances.
pub struct CustomMetric<P, D, S> {
    kind: PointKind,
    dim: usize,
    metric: D,
    sampler: S,
    _point: std::marker::PhantomData<fn() -> P>,
}

impl<P, D, S> CustomMetric<P, D, S>
where
    D: Fn(&P, &P) -> Result<Element, MetricError>,
    S: Fn(&mut dyn RngCore) -> P,
{
    pub fn new(kind: PointKind, dim: usize, metric: D, sampler: S) -> Self {
        CustomMetric {
            kind,
            dim,
            metric,
            sampler,
            _point: std::marker::PhantomData,
        }
    }
}

impl<P, D, S> MetricSpace for CustomMetric<P, D, S>
where
    P: Clone + PartialEq + fmt::Debug,
    D: Fn(&P, &P) -> Result<Element, MetricError>,
    S: Fn(&mut dyn RngCore) -> P,
{
    type Point = P;

    fn point_kind(&self) -> PointKind {
        self.kind
    }

    fn algebra_dim(&self) -> usize {
        self.dim
    }

    fn distance(&self, x: &P, y: &P) -> Result<Element, MetricError> {
        (self.metric)(x, y)
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> P {
        (self.sampler)(rng)
    }
}

/// Result of a sampled check of the four metric axioms.
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub samples_checked: usize,
    /// Smallest eigenvalue seen on any `d(x, y)`.
    pub worst_positivity_defect: f64,
    /// Largest `||d(x, y) - d(y, x)||`.
    pub worst_symmetry_defect: f64,
    /// Smallest eigenvalue of `d(x, z) + d(z, y) - d(x, y)`.
    pub worst_triangle_defect: f64,
    pub identity_ok: bool,
    /// Distance evaluations that failed outright (non-finite values, shape errors).
    pub evaluation_errors: usize,
    pub passed: bool,
}

/// Smallest eigenvalue of the hermitian part, so a defect is reported
/// even for elements that fail hermiticity.
fn min_eigenvalue(a: &Element) -> f64 {
    let h = (a + &a.adjoint()).scale(0.5);
    h.hermitian_eigenvalues()
        .map(|v| v[0])
        .unwrap_or(f64::NEG_INFINITY)
}

struct AxiomAccumulator {
    tol: f64,
    report: AxiomReport,
    ok: bool,
}

impl AxiomAccumulator {
    fn new(tol: f64) -> Self {
        AxiomAccumulator {
            tol,
            report: AxiomReport {
                samples_checked: 0,
                worst_positivity_defect: f64::INFINITY,
                worst_symmetry_defect: 0.0,
                worst_triangle_defect: f64::INFINITY,
                identity_ok: true,
                evaluation_errors: 0,
                passed: false,
            },
            ok: true,
        }
    }

    fn check_triple<M: MetricSpace>(
        &mut self,
        space: &M,
        x: &M::Point,
        y: &M::Point,
        z: &M::Point,
    ) -> Result<(), MetricError> {
        let tol = self.tol;
        let r = &mut self.report;

        for (p, q) in [(x, y), (y, z), (x, z)] {
            let d = space.distance(p, q)?;
            r.worst_positivity_defect = r.worst_positivity_defect.min(min_eigenvalue(&d));
            if !d.check_positive(tol).is_positive {
                self.ok = false;
            }
            let sym = (&d - &space.distance(q, p)?).operator_norm();
            r.worst_symmetry_defect = r.worst_symmetry_defect.max(sym);
            if sym > tol * d.operator_norm().max(1.0) {
                self.ok = false;
            }
            if p != q && d.operator_norm() == 0.0 {
                r.identity_ok = false;
            }
        }
        for p in [x, y, z] {
            if space.distance(p, p)?.operator_norm() > tol {
                r.identity_ok = false;
            }
        }

        let slack = &(&space.distance(x, z)? + &space.distance(z, y)?) - &space.distance(x, y)?;
        r.worst_triangle_defect = r.worst_triangle_defect.min(min_eigenvalue(&slack));
        if !slack.check_positive(tol).is_positive {
            self.ok = false;
        }
        Ok(())
    }

    fn finish(mut self) -> AxiomReport {
        let r = &mut self.report;
        r.passed = self.ok && r.identity_ok && r.evaluation_errors == 0 && r.samples_checked > 0;
        self.report
    }
}

/// Checks the axioms on explicitly supplied triples `(x, y, z)`.
pub fn check_axioms_on<M, I>(space: &M, triples: I, tol: f64) -> AxiomReport
where
    M: MetricSpace,
    I: IntoIterator<Item = (M::Point, M::Point, M::Point)>,
{
    let mut acc = AxiomAccumulator::new(tol);
    for (x, y, z) in triples {
        acc.report.samples_checked += 1;
        if acc.check_triple(space, &x, &y, &z).is_err() {
            acc.report.evaluation_errors += 1;
        }
    }
    acc.finish()
}

/// Draws `num_samples` triples from the space's sampler (deterministic in
/// `seed`) and checks positivity, identity of indiscernibles, symmetry and
/// the triangle inequality in the order `⪯`.
pub fn check_axioms<M: MetricSpace>(
    space: &M,
    num_samples: usize,
    seed: u64,
    tol: f64,
) -> AxiomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples: Vec<_> = (0..num_samples)
        .map(|_| {
            let x = space.sample_point(&mut rng);
            let y = space.sample_point(&mut rng);
            let z = space.sample_point(&mut rng);
            (x, y, z)
        })
        .collect();
    check_axioms_on(space, triples, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DEFAULT_POSITIVITY_TOL;

    #[test]
    fn diag_metric_examples() {
        let m = DiagMetric::new(2.0).unwrap();
        assert_eq!(
            m.distance(&1.0, &3.0).unwrap(),
            Element::from_diagonal(&[2.0, 4.0]).unwrap()
        );
        assert_eq!(m.distance(&0.7, &0.7).unwrap(), Element::zero(2));
        let m1 = DiagMetric::new(1.0).unwrap();
        assert_eq!(m1.distance(&0.0, &1.0).unwrap(), Element::identity(2));
        assert_eq!(DiagMetric::new(0.0), Err(MetricError::NonPositiveK(0.0)));
        assert_eq!(DiagMetric::new(-1.0), Err(MetricError::NonPositiveK(-1.0)));
    }

    #[test]
    fn scalar_metric_examples() {
        let m = ScalarMetric::new();
        let one = |v: f64| Element::from_diagonal(&[v]).unwrap();
        assert_eq!(m.distance(&2.0, &5.0).unwrap(), one(3.0));
        assert_eq!(m.distance(&4.0, &4.0).unwrap(), one(0.0));
        assert_eq!(m.distance(&-1.0, &1.0).unwrap(), one(2.0));
        assert_eq!(m.algebra_dim(), 1);
    }

    #[test]
    fn grid_metric_examples() {
        let m = GridFunctionMetric::new(2).unwrap();
        let d = m.distance(&vec![1.0, 2.0], &vec![0.0, 4.0]).unwrap();
        assert_eq!(d, Element::from_diagonal(&[1.0, 2.0]).unwrap());
        assert_eq!(d.operator_norm(), 2.0);
        assert_eq!(
            m.distance(&vec![3.0, 1.0], &vec![3.0, 1.0]).unwrap(),
            Element::zero(2)
        );

        let m3 = GridFunctionMetric::new(3).unwrap();
        assert_eq!(
            m3.distance(&vec![0.0; 3], &vec![1.0; 3]).unwrap(),
            Element::identity(3)
        );
        assert_eq!(GridFunctionMetric::new(1), Err(MetricError::BadGridSize(1)));
        assert_eq!(
            m3.distance(&vec![0.0; 2], &vec![1.0; 3]),
            Err(MetricError::LengthMismatch {
                expected: 3,
                got: 2
            })
        );
    }

    #[test]
    fn shipped_instances_pass() {
        let tol = DEFAULT_POSITIVITY_TOL;
        assert!(check_axioms(&DiagMetric::new(2.0).unwrap(), 1000, 1, tol).passed);
        assert!(check_axioms(&GridFunctionMetric::new(8).unwrap(), 1000, 1, tol).passed);
        assert!(check_axioms(&ScalarMetric::new(), 1000, 1, tol).passed);
    }

    #[test]
    fn signed_metric_fails_positivity() {
        let signed = CustomMetric::new(
            PointKind::RealScalar,
            2,
            |x: &f64, y: &f64| Ok(Element::from_diagonal(&[x - y, 0.0])?),
            |rng: &mut dyn RngCore| rng.random_range(-10.0..=10.0),
        );
        let report = check_axioms(&signed, 100, 7, DEFAULT_POSITIVITY_TOL);
        assert!(!report.passed);
        assert!(report.worst_positivity_defect < 0.0);
    }

    #[test]
    fn collinear_triangle_defect_is_rounding_only() {
        let m = DiagMetric::new(2.0).unwrap();
        let triples = (0..200).map(|i| {
            let x = -9.0 + 0.05 * i as f64;
            let y = 9.5 - 0.03 * i as f64;
            let z = 0.5 * (x + y) + 0.001 * i as f64;
            (x, y, z)
        });
        let report = check_axioms_on(&m, triples, DEFAULT_POSITIVITY_TOL);
        assert!(report.passed);
        assert!(report.worst_triangle_defect >= -1e-12);
    }

    #[test]
    fn deterministic_given_seed() {
        let m = GridFunctionMetric::new(4).unwrap();
        assert_eq!(
            check_axioms(&m, 50, 9, 1e-10),
            check_axioms(&m, 50, 9, 1e-10)
        );
    }
}
