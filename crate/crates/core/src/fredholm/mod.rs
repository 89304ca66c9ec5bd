//! Nonlinear Fredholm equations of the second kind,
//!
//! ```text
//! x(t) = ∫_E (K1(t,s) + K2(t,s)) (f(s, x(s)) + g(s, x(s))) ds + h(t),
//! ```
//!
//! solved on a uniform grid over `E = [lo, hi]` with the composite trapezoid
//! rule. The equation is split into the coupled operator
//!
//! ```text
//! F(x,y)(t) = ∫ K1(t,s) (f(s,x(s)) + g(s,y(s))) ds
//!           + ∫ K2(t,s) (f(s,y(s)) + g(s,x(s))) ds + h(t)
//! ```
//!
//! whose coupled fixed point lies on the diagonal and solves the equation.
//! The requirements are `K1 >= 0`, `K2 <= 0`, `f` nondecreasing and `g`
//! nonincreasing with slopes at most `k < 1/2`, and
//! `sup_t ∫ (K1 - K2) ds <= 1`.

mod registry;

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::Element;
use crate::metric::GridFunctionMetric;
use crate::solver::{self, CoupledMap, IterationTrace, SolveConfig, SolverError};

pub use registry::{ForcingForm, FredholmSpec, KernelForm, NonlinearityForm};

pub type KernelFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type NonlinearFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type ForcingFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Error)]
pub enum FredholmError {
    #[error("domain must satisfy lo < hi with finite ends, got [{lo}, {hi}]")]
    BadDomain { lo: f64, hi: f64 },
    #[error("grid needs at least 2 nodes, got {0}")]
    BadGridSize(usize),
    #[error("contraction constant k must lie in (0, 1/2), got {0}")]
    InvalidK(f64),
    #[error("sample range must be finite and positive, got {0}")]
    BadRange(f64),
    #[error("function parameters must be finite")]
    NonFiniteParameter,
    #[error("grid function has {got} values, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("problem assumptions violated: {0}")]
    AssumptionsViolated(Box<AssumptionReport>),
    #[error("iteration did not converge after {} steps", .0.steps.len())]
    NotConverged(Box<IterationTrace<Vec<f64>>>),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// A discretized problem on `[lo, hi]` with `n` uniform nodes.
#[derive(Clone)]
pub struct FredholmProblem {
    lo: f64,
    hi: f64,
    n: usize,
    k: f64,
    k1: KernelFn,
    k2: KernelFn,
    f: NonlinearFn,
    g: NonlinearFn,
    h: ForcingFn,
    sample_range: f64,
}

impl fmt::Debug for FredholmProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FredholmProblem")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("n", &self.n)
            .field("k", &self.k)
            .finish_non_exhaustive()
    }
}

impl FredholmProblem {
    /// A problem with all functions zero; fill them in with the `with_*` methods.
    pub fn new(lo: f64, hi: f64, n: usize, k: f64) -> Result<Self, FredholmError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(FredholmError::BadDomain { lo, hi });
        }
        if n < 2 {
            return Err(FredholmError::BadGridSize(n));
        }
        if !(k > 0.0 && k < 0.5) {
            return Err(FredholmError::InvalidK(k));
        }
        Ok(FredholmProblem {
            lo,
            hi,
            n,
            k,
            k1: Arc::new(|_, _| 0.0),
            k2: Arc::new(|_, _| 0.0),
            f: Arc::new(|_, _| 0.0),
            g: Arc::new(|_, _| 0.0),
            h: Arc::new(|_| 0.0),
            sample_range: 10.0,
        })
    }

    pub fn with_kernels(self, k1: KernelFn, k2: KernelFn) -> Self {
        FredholmProblem { k1, k2, ..self }
    }

    pub fn with_nonlinearities(self, f: NonlinearFn, g: NonlinearFn) -> Self {
        FredholmProblem { f, g, ..self }
    }

    pub fn with_forcing(self, h: ForcingFn) -> Self {
        FredholmProblem { h, ..self }
    }

    /// Half-width `R` of the `[-R, R]` box used when sampling the
    /// monotonicity/Lipschitz requirement.
    pub fn with_sample_range(self, range: f64) -> Result<Self, FredholmError> {
        if !(range.is_finite() && range > 0.0) {
            return Err(FredholmError::BadRange(range));
        }
        Ok(FredholmProblem {
            sample_range: range,
            ..self
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Uniform nodes `t_0 = lo, ..., t_{n-1} = hi`.
    pub fn grid(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                if i == self.n - 1 {
                    self.hi
                } else {
                    self.lo + i as f64 * step
                }
            })
            .collect()
    }

    /// Composite trapezoid weights on [`grid`](Self::grid).
    pub fn weights(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        let mut w = vec![step; self.n];
        w[0] = 0.5 * step;
        w[self.n - 1] = 0.5 * step;
        w
    }

    pub fn forcing_on_grid(&self) -> Vec<f64> {
        self.grid().iter().map(|&t| (self.h)(t)).collect()
    }

    fn check_len(&self, x: &[f64]) -> Result<(), FredholmError> {
        if x.len() == self.n {
            Ok(())
        } else {
            Err(FredholmError::LengthMismatch {
                expected: self.n,
                got: x.len(),
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssumptionReport {
    /// `K1 >= 0` and `K2 <= 0` on every pair of grid nodes.
    pub sign_ok: bool,
    /// Sampled monotonicity/Lipschitz bounds on `f` and `g`.
    pub monotone_lipschitz_ok: bool,
    /// `max_i Σ_j w_j (K1(t_i, s_j) - K2(t_i, s_j))`
    pub kernel_bound: f64,
    pub kernel_bound_ok: bool,
    pub samples_checked: usize,
    pub passed: bool,
}

impl fmt::Display for AssumptionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sign_ok={} monotone_lipschitz_ok={} kernel_bound={} (ok={})",
            self.sign_ok, self.monotone_lipschitz_ok, self.kernel_bound, self.kernel_bound_ok
        )
    }
}

/// Checks the sign, monotonicity and kernel-mass requirements.
///
/// The monotonicity/Lipschitz requirement is sampled at `num_samples`
/// random `(t, x, y)` with `x > y` drawn from `[-R, R]`; a small relative
/// slack absorbs rounding in the difference quotients.
pub fn check_assumptions(p: &FredholmProblem, num_samples: usize, seed: u64) -> AssumptionReport {
    let grid = p.grid();
    let weights = p.weights();

    let mut sign_ok = true;
    let mut kernel_bound = f64::NEG_INFINITY;
    for &t in &grid {
        let mut row = 0.0;
        for (&s, &w) in grid.iter().zip(&weights) {
            let a = (p.k1)(t, s);
            let b = (p.k2)(t, s);
            if !(a >= 0.0 && b <= 0.0) {
                sign_ok = false;
            }
            row += w * (a - b);
        }
        kernel_bound = kernel_bound.max(row);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = p.sample_range;
    let k = p.k;
    let mut monotone_ok = true;
    for _ in 0..num_samples {
        let t = rng.random_range(p.lo..=p.hi);
        let u = rng.random_range(-r..=r);
        let v = rng.random_range(-r..=r);
        let (x, y) = if u >= v { (u, v) } else { (v, u) };
        if x == y {
            continue;
        }
        let slack = 1e-12 * (x.abs() + y.abs()).max(1.0);
        let gap = x - y;
        let df = (p.f)(t, x) - (p.f)(t, y);
        let dg = (p.g)(t, x) - (p.g)(t, y);
        let f_ok = df >= -slack && df <= k * gap + slack;
        let g_ok = dg >= -k * gap - slack && dg <= slack;
        if !(f_ok && g_ok) {
            monotone_ok = false;
        }
    }

    let kernel_bound_ok = kernel_bound <= 1.0;
    AssumptionReport {
        sign_ok,
        monotone_lipschitz_ok: monotone_ok,
        kernel_bound,
        kernel_bound_ok,
        samples_checked: num_samples,
        passed: sign_ok && monotone_ok && kernel_bound_ok,
    }
}

/// The coupled operator on grid functions.
pub struct FredholmOperator {
    grid: Vec<f64>,
    weights: Vec<f64>,
    forcing: Vec<f64>,
    k1: KernelFn,
    k2: KernelFn,
    f: NonlinearFn,
    g: NonlinearFn,
}

impl CoupledMap<Vec<f64>> for FredholmOperator {
    fn apply(&self, x: &Vec<f64>, y: &Vec<f64>) -> Vec<f64> {
        let n = self.grid.len();
        assert!(
            x.len() == n && y.len() == n,
            "grid function length mismatch"
        );
        // a_j = f(s_j, x_j) + g(s_j, y_j), b_j = f(s_j, y_j) + g(s_j, x_j)
        let (a, b): (Vec<f64>, Vec<f64>) = (0..n)
            .map(|j| {
                let s = self.grid[j];
                (
                    (self.f)(s, x[j]) + (self.g)(s, y[j]),
                    (self.f)(s, y[j]) + (self.g)(s, x[j]),
                )
            })
            .unzip();
        (0..n)
            .into_par_iter()
            .map(|i| {
                let t = self.grid[i];
                let mut first = 0.0;
                let mut second = 0.0;
                for j in 0..n {
                    let s = self.grid[j];
                    first += self.weights[j] * (self.k1)(t, s) * a[j];
                    second += self.weights[j] * (self.k2)(t, s) * b[j];
                }
                first + second + self.forcing[i]
            })
            .collect()
    }
}

pub fn build_coupled_operator(p: &FredholmProblem) -> FredholmOperator {
    FredholmOperator {
        grid: p.grid(),
        weights: p.weights(),
        forcing: p.forcing_on_grid(),
        k1: p.k1.clone(),
        k2: p.k2.clone(),
        f: p.f.clone(),
        g: p.g.clone(),
    }
}

/// Discrete sup-norm defect of the original (uncoupled) equation at `x`.
pub fn residual(p: &FredholmProblem, x: &[f64]) -> Result<f64, FredholmError> {
    p.check_len(x)?;
    let grid = p.grid();
    let weights = p.weights();
    let nonlinear: Vec<f64> = grid
        .iter()
        .zip(x)
        .map(|(&s, &v)| (p.f)(s, v) + (p.g)(s, v))
        .collect();
    let worst = grid
        .par_iter()
        .zip(x.par_iter())
        .map(|(&t, &xt)| {
            let mut integral = 0.0;
            for j in 0..grid.len() {
                let s = grid[j];
                integral += weights[j] * ((p.k1)(t, s) + (p.k2)(t, s)) * nonlinear[j];
            }
            (xt - integral - (p.h)(t)).abs()
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FredholmConfig {
    pub solver: SolveConfig,
    pub assumption_samples: usize,
    pub seed: u64,
}

impl Default for FredholmConfig {
    fn default() -> Self {
        FredholmConfig {
            solver: SolveConfig::default(),
            assumption_samples: 2000,
            seed: 42,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FredholmSolution {
    pub grid: Vec<f64>,
    pub solution: Vec<f64>,
    pub trace: IterationTrace<Vec<f64>>,
    pub residual: f64,
    pub assumptions: AssumptionReport,
}

/// Checks the assumptions, then iterates the coupled operator from
/// `x_0 = y_0 = h` in the grid-function metric, tracking the a-priori
/// bound for `a = √k · 1`.
///
/// `config.solver.bound_tracking` is ignored; the coefficient comes from `k`.
pub fn solve(
    p: &FredholmProblem,
    config: &FredholmConfig,
) -> Result<FredholmSolution, FredholmError> {
    let assumptions = check_assumptions(p, config.assumption_samples, config.seed);
    if !assumptions.passed {
        return Err(FredholmError::AssumptionsViolated(Box::new(assumptions)));
    }
    let space = GridFunctionMetric::new(p.n).expect("n >= 2 checked at construction");
    let op = build_coupled_operator(p);
    let h = p.forcing_on_grid();
    let solver_config = SolveConfig {
        bound_tracking: Some(Element::scalar(p.k.sqrt(), p.n)),
        ..config.solver.clone()
    };
    let trace = solver::solve_coupled(&op, &space, h.clone(), h, &solver_config)?;
    let (x, _) = match trace.solution() {
        Ok(pair) => pair,
        Err(_) => return Err(FredholmError::NotConverged(Box::new(trace))),
    };
    let res = residual(p, &x)?;
    Ok(FredholmSolution {
        grid: p.grid(),
        solution: x,
        trace,
        residual: res,
        assumptions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked(n: usize, k: f64) -> FredholmSpec {
        FredholmSpec {
            lo: 0.0,
            hi: 1.0,
            n,
            k,
            k1: KernelForm::Product { c: 0.25 },
            k2: KernelForm::Product { c: -0.125 },
            f: NonlinearityForm::Linear { c: 0.25 },
            g: NonlinearityForm::Linear { c: -0.125 },
            h: ForcingForm::Linear { c: 1.0 },
        }
    }

    #[test]
    fn worked_instance_assumptions() {
        let p = worked(401, 0.25).to_problem().unwrap();
        let r = check_assumptions(&p, 2000, 42);
        assert!(r.passed, "{r:?}");
        assert!((r.kernel_bound - 3.0 / 16.0).abs() <= 1e-12);
    }

    #[test]
    fn tighter_k_breaks_lipschitz_check() {
        let p = worked(101, 0.2).to_problem().unwrap();
        let r = check_assumptions(&p, 2000, 42);
        assert!(r.sign_ok && r.kernel_bound_ok);
        assert!(!r.monotone_lipschitz_ok && !r.passed);
    }

    #[test]
    fn negative_kernel_values_break_sign_check() {
        let spec = FredholmSpec {
            lo: -1.0,
            ..worked(101, 0.25)
        };
        let r = check_assumptions(&spec.to_problem().unwrap(), 100, 1);
        assert!(!r.sign_ok && !r.passed);
    }

    #[test]
    fn heavy_kernel_breaks_mass_bound() {
        let spec = FredholmSpec {
            k1: KernelForm::Constant { c: 0.8 },
            k2: KernelForm::Constant { c: -0.3 },
            ..worked(51, 0.25)
        };
        let r = check_assumptions(&spec.to_problem().unwrap(), 100, 1);
        assert!((r.kernel_bound - 1.1).abs() < 1e-12);
        assert!(!r.kernel_bound_ok);
    }

    #[test]
    fn operator_at_zero_returns_forcing() {
        let p = worked(11, 0.25).to_problem().unwrap();
        let op = build_coupled_operator(&p);
        let zero = vec![0.0; 11];
        assert_eq!(op.apply(&zero, &zero), p.forcing_on_grid());
    }

    #[test]
    fn zero_kernels_map_everything_to_forcing() {
        let spec = FredholmSpec {
            k1: KernelForm::Zero,
            k2: KernelForm::Zero,
            h: ForcingForm::Sine { c: 2.0 },
            ..worked(21, 0.25)
        };
        let p = spec.to_problem().unwrap();
        let op = build_coupled_operator(&p);
        let x: Vec<f64> = (0..21).map(|i| i as f64).collect();
        let y = vec![-3.0; 21];
        assert_eq!(op.apply(&x, &y), p.forcing_on_grid());

        let sol = solve(&p, &FredholmConfig::default()).unwrap();
        assert_eq!(sol.solution, p.forcing_on_grid());
        assert_eq!(sol.trace.iterations(), 1);
        assert_eq!(sol.residual, 0.0);
        assert_eq!(spec.closed_form(), Some(ForcingForm::Sine { c: 2.0 }));
    }

    #[test]
    fn zero_forcing_gives_zero_solution() {
        let spec = FredholmSpec {
            h: ForcingForm::Zero,
            f: NonlinearityForm::Atan { c: 0.3 },
            g: NonlinearityForm::Atan { c: -0.1 },
            ..worked(51, 0.4)
        };
        let sol = solve(&spec.to_problem().unwrap(), &FredholmConfig::default()).unwrap();
        assert!(sol.solution.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn residual_examples() {
        let p = worked(101, 0.25).to_problem().unwrap();
        let zero = vec![0.0; 101];
        assert!((residual(&p, &zero).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            residual(&p, &[0.0; 3]),
            Err(FredholmError::LengthMismatch {
                expected: 101,
                got: 3
            })
        ));
        let no_kernel = FredholmSpec {
            k1: KernelForm::Zero,
            k2: KernelForm::Zero,
            ..worked(101, 0.25)
        }
        .to_problem()
        .unwrap();
        assert_eq!(
            residual(&no_kernel, &no_kernel.forcing_on_grid()).unwrap(),
            0.0
        );
    }

    #[test]
    fn solve_rejects_violated_assumptions() {
        let p = worked(51, 0.2).to_problem().unwrap();
        assert!(matches!(
            solve(&p, &FredholmConfig::default()),
            Err(FredholmError::AssumptionsViolated(_))
        ));
    }

    #[test]
    fn closed_form_of_worked_instance() {
        match worked(401, 0.25).closed_form() {
            Some(ForcingForm::Linear { c }) => assert!((c - 192.0 / 191.0).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
        let nonlinear = FredholmSpec {
            f: NonlinearityForm::Atan { c: 0.2 },
            ..worked(11, 0.25)
        };
        assert_eq!(nonlinear.closed_form(), None);
    }

    #[test]
    fn constructor_validation() {
        assert!(matches!(
            FredholmProblem::new(1.0, 0.0, 10, 0.25),
            Err(FredholmError::BadDomain { .. })
        ));
        assert!(matches!(
            FredholmProblem::new(0.0, 1.0, 1, 0.25),
            Err(FredholmError::BadGridSize(1))
        ));
        assert!(matches!(
            FredholmProblem::new(0.0, 1.0, 10, 0.5),
            Err(FredholmError::InvalidK(_))
        ));
        assert!(matches!(
            FredholmProblem::new(0.0, 1.0, 10, 0.0),
            Err(FredholmError::InvalidK(_))
        ));
        let bad = FredholmSpec {
            h: ForcingForm::Linear { c: f64::NAN },
            ..worked(11, 0.25)
        };
        assert!(matches!(
            bad.to_problem(),
            Err(FredholmError::NonFiniteParameter)
        ));
    }
}
