use super::{CoupledMap, SolverError};
use crate::algebra::Element;
use crate::metric::MetricSpace;

#[derive(Clone, Debug, PartialEq)]
pub struct SolveConfig {
    pub max_iters: usize,
    /// Stop once `||δ_n|| <= eps_abs`.
    pub eps_abs: f64,
    /// Banach coefficient `a`; when set, each step records the a-priori
    /// bound with `q = ||√2 a||²`.
    pub bound_tracking: Option<Element>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            max_iters: 10_000,
            eps_abs: 1e-12,
            bound_tracking: None,
        }
    }
}

/// One step of the coupled iteration, taken from `(x_n, y_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationStep<P> {
    pub n: usize,
    pub x: P,
    pub y: P,
    /// `||d(x_n, x_{n+1}) + d(y_n, y_{n+1})||`
    pub delta_norm: f64,
    /// `||d(x_n, x_{n+1})||`
    pub x_step_norm: f64,
    /// `||d(y_n, y_{n+1})||`
    pub y_step_norm: f64,
    pub apriori_bound: Option<f64>,
}

/// `(||d(F(x,y), x)||, ||d(F(y,x), y)||, ||d(x, y)||)`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residuals {
    pub x_residual: f64,
    pub y_residual: f64,
    pub diagonal_gap: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.x_residual.max(self.y_residual).max(self.diagonal_gap)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationTrace<P> {
    pub steps: Vec<IterationStep<P>>,
    pub converged: bool,
    /// The final pair `(x_{n+1}, y_{n+1})` when converged.
    pub result: Option<(P, P)>,
    pub residuals: Option<Residuals>,
    /// `q = ||√2 a||²` when bounds were tracked.
    pub contraction_q: Option<f64>,
}

impl<P: Clone> IterationTrace<P> {
    pub fn iterations(&self) -> usize {
        self.steps.len()
    }

    /// The converged pair, or `MaxItersExceeded`.
    pub fn solution(&self) -> Result<(P, P), SolverError> {
        match (&self.result, self.converged) {
            (Some(pair), true) => Ok(pair.clone()),
            _ => Err(SolverError::MaxItersExceeded {
                iterations: self.steps.len(),
                last_delta: self.steps.last().map_or(f64::NAN, |s| s.delta_norm),
            }),
        }
    }
}

/// `q^n ||δ_0|| / (1 - q)`: bound on `||d(x_{n+p}, x_n) + d(y_{n+p}, y_n)||`
/// for every `p`.
pub fn apriori_bound(q: f64, n: usize, delta0_norm: f64) -> Result<f64, SolverError> {
    if !(0.0..1.0).contains(&q) {
        return Err(SolverError::QOutOfRange(q));
    }
    if !(delta0_norm >= 0.0 && delta0_norm.is_finite()) {
        return Err(SolverError::InvalidConfig(format!(
            "delta0 norm must be finite and nonnegative, got {delta0_norm}"
        )));
    }
    if delta0_norm == 0.0 {
        return Ok(0.0);
    }
    let power = i32::try_from(n).map_or(0.0, |n| q.powi(n));
    Ok(power * delta0_norm / (1.0 - q))
}

/// Runs `x_{n+1} = F(x_n, y_n)`, `y_{n+1} = F(y_n, x_n)` from `(x0, y0)`.
///
/// Non-convergence is not an error here: the trace comes back with
/// `converged == false` and [`IterationTrace::solution`] reports it.
pub fn solve_coupled<M, F>(
    map: &F,
    space: &M,
    x0: M::Point,
    y0: M::Point,
    config: &SolveConfig,
) -> Result<IterationTrace<M::Point>, SolverError>
where
    M: MetricSpace,
    F: CoupledMap<M::Point> + ?Sized,
{
    if config.max_iters == 0 {
        return Err(SolverError::InvalidConfig(
            "max_iters must be at least 1".into(),
        ));
    }
    if !(config.eps_abs > 0.0 && config.eps_abs.is_finite()) {
        return Err(SolverError::InvalidConfig(format!(
            "eps_abs must be positive, got {}",
            config.eps_abs
        )));
    }
    let q = match &config.bound_tracking {
        Some(a) => {
            let q = 2.0 * (&a.adjoint() * a).operator_norm();
            if !(0.0..1.0).contains(&q) {
                return Err(SolverError::QOutOfRange(q));
            }
            Some(q)
        }
        None => None,
    };

    let mut trace = IterationTrace {
        steps: Vec::new(),
        converged: false,
        result: None,
        residuals: None,
        contraction_q: q,
    };
    let mut x = x0;
    let mut y = y0;
    let mut delta0 = 0.0;
    for n in 0..config.max_iters {
        let x_next = map.apply(&x, &y);
        let y_next = map.apply(&y, &x);
        let dx = space.distance(&x, &x_next)?;
        let dy = space.distance(&y, &y_next)?;
        let delta_norm = (&dx + &dy).operator_norm();
        if n == 0 {
            delta0 = delta_norm;
        }
        let bound = q.map(|q| apriori_bound(q, n, delta0)).transpose()?;
        trace.steps.push(IterationStep {
            n,
            x,
            y,
            delta_norm,
            x_step_norm: dx.operator_norm(),
            y_step_norm: dy.operator_norm(),
            apriori_bound: bound,
        });
        x = x_next;
        y = y_next;
        if delta_norm <= config.eps_abs {
            trace.converged = true;
            break;
        }
    }
    if trace.converged {
        trace.residuals = Some(verify_fixed_point(map, space, &x, &y)?);
        trace.result = Some((x, y));
    }
    Ok(trace)
}

/// Measures how far `(x, y)` is from a coupled fixed point on the diagonal.
pub fn verify_fixed_point<M, F>(
    map: &F,
    space: &M,
    x: &M::Point,
    y: &M::Point,
) -> Result<Residuals, SolverError>
where
    M: MetricSpace,
    F: CoupledMap<M::Point> + ?Sized,
{
    Ok(Residuals {
        x_residual: space.distance(&map.apply(x, y), x)?.operator_norm(),
        y_residual: space.distance(&map.apply(y, x), y)?.operator_norm(),
        diagonal_gap: space.distance(x, y)?.operator_norm(),
    })
}
