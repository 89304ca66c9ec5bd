use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CoupledMap, SolverError};
use crate::algebra::{Element, DEFAULT_POSITIVITY_TOL};
use crate::metric::MetricSpace;

/// Tolerance used when deciding whether a coefficient is a scalar multiple
/// of the identity.
const CENTER_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionKind {
    Banach,
    Kannan,
    Chatterjea,
}

impl fmt::Display for ContractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContractionKind::Banach => "banach",
            ContractionKind::Kannan => "kannan",
            ContractionKind::Chatterjea => "chatterjea",
        })
    }
}

/// Contraction coefficients: `a` alone for Banach, `a` and `b` otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Coefficients {
    pub a: Element,
    pub b: Option<Element>,
}

impl Coefficients {
    pub fn banach(a: Element) -> Self {
        Coefficients { a, b: None }
    }

    /// `a * 1_A` and `b * 1_A` in an algebra of dimension `dim`.
    pub fn scalars(a: f64, b: f64, dim: usize) -> Self {
        Coefficients {
            a: Element::scalar(a, dim),
            b: Some(Element::scalar(b, dim)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifyOptions {
    pub num_samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            num_samples: 2000,
            seed: 42,
            tol: DEFAULT_POSITIVITY_TOL,
        }
    }
}

/// Evidence that a map satisfies one of the contraction conditions.
///
/// A failed sample refutes the condition. A pass only means no sampled
/// quadruple violated it.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractionCertificate {
    pub kind: ContractionKind,
    pub coefficients: Coefficients,
    pub a_norm: f64,
    pub b_norm: Option<f64>,
    /// Per-step contraction factor implied by the coefficients:
    /// `||√2 a||²` (Banach), `||(1-b)^{-1} a||` (Kannan) or
    /// `||(1-m)^{-1} m||` with `m = (a+b)/2` (Chatterjea).
    pub ratio: f64,
    pub norm_condition_ok: bool,
    pub samples_checked: usize,
    pub evaluation_errors: usize,
    /// Most negative eigenvalue of `RHS - LHS` over all samples.
    pub worst_defect: f64,
    pub passed: bool,
}

impl ContractionCertificate {
    pub fn pointwise_ok(&self, tol: f64) -> bool {
        self.evaluation_errors == 0 && self.worst_defect >= -tol
    }
}

fn nonnegative_scalar(e: &Element, name: &'static str) -> Result<f64, SolverError> {
    match e.as_scalar(CENTER_TOL) {
        Some(c) if c.im.abs() <= CENTER_TOL && c.re >= 0.0 => Ok(c.re),
        _ => Err(SolverError::NotInCenter { name }),
    }
}

fn check_dim(e: &Element, dim: usize, name: &str) -> Result<(), SolverError> {
    if e.dim() == dim {
        Ok(())
    } else {
        Err(SolverError::CoeffShapeMismatch(format!(
            "{name} has dimension {}, metric takes values in dimension {dim}",
            e.dim()
        )))
    }
}

fn min_eigenvalue(a: &Element) -> f64 {
    let h = (a + &a.adjoint()).scale(0.5);
    h.hermitian_eigenvalues()
        .map(|v| v[0])
        .unwrap_or(f64::NEG_INFINITY)
}

/// Checks the contraction condition of `kind` on `num_samples` sampled
/// quadruples `(x, y, u, v)` together with the kind's norm threshold.
pub fn certify<M, F>(
    kind: ContractionKind,
    map: &F,
    space: &M,
    coefficients: &Coefficients,
    options: &CertifyOptions,
) -> Result<ContractionCertificate, SolverError>
where
    M: MetricSpace,
    F: CoupledMap<M::Point> + ?Sized,
{
    if options.num_samples == 0 {
        return Err(SolverError::InvalidConfig(
            "num_samples must be at least 1".into(),
        ));
    }
    if !(options.tol >= 0.0 && options.tol.is_finite()) {
        return Err(SolverError::InvalidConfig(
            "tol must be finite and nonnegative".into(),
        ));
    }
    let dim = space.algebra_dim();
    let a = &coefficients.a;
    check_dim(a, dim, "a")?;

    let (b_norm, ratio, norm_ok) = match kind {
        ContractionKind::Banach => {
            if coefficients.b.is_some() {
                return Err(SolverError::CoeffShapeMismatch(
                    "banach condition takes a single coefficient".into(),
                ));
            }
            // ||√2 a||² = 2 ||a* a||, no square root round trip
            let q = 2.0 * (&a.adjoint() * a).operator_norm();
            (None, q, q < 1.0)
        }
        ContractionKind::Kannan | ContractionKind::Chatterjea => {
            let b = coefficients.b.as_ref().ok_or_else(|| {
                SolverError::CoeffShapeMismatch(format!(
                    "{kind} condition needs coefficients a and b"
                ))
            })?;
            check_dim(b, dim, "b")?;
            let a_s = nonnegative_scalar(a, "a")?;
            let b_s = nonnegative_scalar(b, "b")?;
            let norm_ok = a.operator_norm() + b.operator_norm() < 1.0;
            let ratio = if kind == ContractionKind::Kannan {
                match b.inverse_one_minus() {
                    Ok(inv) => (&inv * a).operator_norm(),
                    Err(_) => f64::INFINITY,
                }
            } else {
                let m = Element::scalar(0.5 * (a_s + b_s), dim);
                match m.inverse_one_minus() {
                    Ok(inv) => (&inv * &m).operator_norm(),
                    Err(_) => f64::INFINITY,
                }
            };
            (Some(b.operator_norm()), ratio, norm_ok)
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut worst = f64::INFINITY;
    let mut errors = 0usize;
    for _ in 0..options.num_samples {
        let x = space.sample_point(&mut rng);
        let y = space.sample_point(&mut rng);
        let u = space.sample_point(&mut rng);
        let v = space.sample_point(&mut rng);
        match sample_defect(kind, map, space, coefficients, &x, &y, &u, &v) {
            Ok(d) => worst = worst.min(d),
            Err(_) => errors += 1,
        }
    }

    let pointwise = errors == 0 && worst >= -options.tol;
    Ok(ContractionCertificate {
        kind,
        coefficients: coefficients.clone(),
        a_norm: a.operator_norm(),
        b_norm,
        ratio,
        norm_condition_ok: norm_ok,
        samples_checked: options.num_samples,
        evaluation_errors: errors,
        worst_defect: worst,
        passed: norm_ok && pointwise,
    })
}

#[allow(clippy::too_many_arguments)]
fn sample_defect<M, F>(
    kind: ContractionKind,
    map: &F,
    space: &M,
    c: &Coefficients,
    x: &M::Point,
    y: &M::Point,
    u: &M::Point,
    v: &M::Point,
) -> Result<f64, SolverError>
where
    M: MetricSpace,
    F: CoupledMap<M::Point> + ?Sized,
{
    let fxy = map.apply(x, y);
    let fuv = map.apply(u, v);
    let lhs = space.distance(&fxy, &fuv)?;
    let a = &c.a;
    let rhs = match kind {
        ContractionKind::Banach => {
            let a_star = a.adjoint();
            let dx = space.distance(x, u)?;
            let dy = space.distance(y, v)?;
            &(&(&a_star * &dx) * a) + &(&(&a_star * &dy) * a)
        }
        ContractionKind::Kannan => {
            let b = c.b.as_ref().expect("validated");
            &(a * &space.distance(&fxy, x)?) + &(b * &space.distance(&fuv, u)?)
        }
        ContractionKind::Chatterjea => {
            let b = c.b.as_ref().expect("validated");
            &(a * &space.distance(&fxy, u)?) + &(b * &space.distance(&fuv, x)?)
        }
    };
    Ok(min_eigenvalue(&(&rhs - &lhs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Complex;
    use crate::metric::{DiagMetric, ScalarMetric};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn opts() -> CertifyOptions {
        CertifyOptions::default()
    }

    #[test]
    fn quarter_sum_is_banach_with_half() {
        let f = |x: &f64, y: &f64| (x + y) / 4.0;
        let a = Element::scalar(0.5, 1);
        let cert = certify(
            ContractionKind::Banach,
            &f,
            &ScalarMetric::new(),
            &Coefficients::banach(a),
            &opts(),
        )
        .unwrap();
        assert!(cert.passed, "{cert:?}");
        assert!((cert.ratio - 0.5).abs() < 1e-15);
    }

    #[test]
    fn midpoint_on_diag_metric_is_boundary_case() {
        let f = |x: &f64, y: &f64| (x + y) / 2.0;
        let a = Element::scalar(FRAC_1_SQRT_2, 2);
        let cert = certify(
            ContractionKind::Banach,
            &f,
            &DiagMetric::new(2.0).unwrap(),
            &Coefficients::banach(a),
            &opts(),
        )
        .unwrap();
        assert!(!cert.norm_condition_ok);
        assert!(cert.pointwise_ok(opts().tol));
        assert!(!cert.passed);
    }

    #[test]
    fn complex_phase_coefficient_behaves_like_its_modulus() {
        let f = |x: &f64, y: &f64| (x + y) / 2.0;
        let lambda = Complex::new(0.5, 0.5); // |λ| = 1/√2
        let a = Element::from_complex_diagonal(vec![lambda, lambda]).unwrap();
        let cert = certify(
            ContractionKind::Banach,
            &f,
            &DiagMetric::new(3.0).unwrap(),
            &Coefficients::banach(a),
            &opts(),
        )
        .unwrap();
        assert!(cert.pointwise_ok(opts().tol) && !cert.norm_condition_ok);
    }

    #[test]
    fn constant_map_passes_every_kind() {
        let f = |_: &f64, _: &f64| 3.0;
        let space = ScalarMetric::new();
        let banach = certify(
            ContractionKind::Banach,
            &f,
            &space,
            &Coefficients::banach(Element::zero(1)),
            &opts(),
        )
        .unwrap();
        assert!(banach.passed);
        for kind in [ContractionKind::Kannan, ContractionKind::Chatterjea] {
            let cert = certify(
                kind,
                &f,
                &space,
                &Coefficients::scalars(0.0, 0.0, 1),
                &opts(),
            )
            .unwrap();
            assert!(cert.passed, "{kind}");
        }
    }

    #[test]
    fn large_coefficient_fails_norm_condition() {
        let f = |x: &f64, y: &f64| (x + y) / 4.0;
        let cert = certify(
            ContractionKind::Banach,
            &f,
            &ScalarMetric::new(),
            &Coefficients::banach(Element::scalar(0.8, 1)),
            &opts(),
        )
        .unwrap();
        assert!(!cert.norm_condition_ok && !cert.passed);
    }

    #[test]
    fn expanding_map_is_refuted() {
        let f = |x: &f64, y: &f64| 2.0 * x + y;
        let cert = certify(
            ContractionKind::Banach,
            &f,
            &ScalarMetric::new(),
            &Coefficients::banach(Element::scalar(0.5, 1)),
            &opts(),
        )
        .unwrap();
        assert!(cert.norm_condition_ok);
        assert!(cert.worst_defect < 0.0 && !cert.passed);
    }

    #[test]
    fn shape_and_center_errors() {
        let f = |x: &f64, _: &f64| *x;
        let space = DiagMetric::new(1.0).unwrap();
        assert!(matches!(
            certify(
                ContractionKind::Banach,
                &f,
                &space,
                &Coefficients::scalars(0.1, 0.1, 2),
                &opts()
            ),
            Err(SolverError::CoeffShapeMismatch(_))
        ));
        assert!(matches!(
            certify(
                ContractionKind::Kannan,
                &f,
                &space,
                &Coefficients::banach(Element::scalar(0.1, 2)),
                &opts()
            ),
            Err(SolverError::CoeffShapeMismatch(_))
        ));
        assert!(matches!(
            certify(
                ContractionKind::Banach,
                &f,
                &space,
                &Coefficients::banach(Element::scalar(0.1, 3)),
                &opts()
            ),
            Err(SolverError::CoeffShapeMismatch(_))
        ));
        let non_scalar = Coefficients {
            a: Element::from_diagonal(&[0.1, 0.2]).unwrap(),
            b: Some(Element::scalar(0.1, 2)),
        };
        assert_eq!(
            certify(
                ContractionKind::Chatterjea,
                &f,
                &space,
                &non_scalar,
                &opts()
            ),
            Err(SolverError::NotInCenter { name: "a" })
        );
        let negative = Coefficients::scalars(0.1, -0.1, 2);
        assert_eq!(
            certify(ContractionKind::Kannan, &f, &space, &negative, &opts()),
            Err(SolverError::NotInCenter { name: "b" })
        );
    }

    #[test]
    fn kannan_and_chatterjea_ratios() {
        let c = 1.5;
        let kannan_map = move |x: &f64, _: &f64| c + (x - c) / 6.0;
        let chatterjea_map = move |x: &f64, _: &f64| c + 0.25 * (x - c);
        let space = ScalarMetric::new();
        let coeffs = Coefficients::scalars(0.2, 0.2, 1);
        let k = certify(
            ContractionKind::Kannan,
            &kannan_map,
            &space,
            &coeffs,
            &opts(),
        )
        .unwrap();
        assert!(k.passed, "{k:?}");
        assert!((k.ratio - 0.25).abs() < 1e-15);
        let ch = certify(
            ContractionKind::Chatterjea,
            &chatterjea_map,
            &space,
            &coeffs,
            &opts(),
        )
        .unwrap();
        assert!(ch.passed, "{ch:?}");
        assert!((ch.ratio - 0.25).abs() < 1e-15);
        // the chatterjea-rate map is too slow for the kannan condition
        let refuted = certify(
            ContractionKind::Kannan,
            &chatterjea_map,
            &space,
            &coeffs,
            &opts(),
        )
        .unwrap();
        assert!(!refuted.passed);
    }

    #[test]
    fn deterministic_given_seed() {
        let f = |x: &f64, y: &f64| (x - y) / 3.0;
        let run = || {
            certify(
                ContractionKind::Banach,
                &f,
                &DiagMetric::new(2.0).unwrap(),
                &Coefficients::banach(Element::scalar(0.6, 2)),
                &opts(),
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }
}
