//! Named function forms that configuration files can select.

use std::sync::Arc;

use serde::Deserialize;

use super::{ForcingFn, FredholmError, FredholmProblem, KernelFn, NonlinearFn};

/// `K(t, s)`
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum KernelForm {
    Zero,
    /// `c`
    Constant {
        c: f64,
    },
    /// `c * t * s`
    Product {
        c: f64,
    },
}

/// `f(s, x)` or `g(s, x)`
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NonlinearityForm {
    Zero,
    /// `c * x`
    Linear {
        c: f64,
    },
    /// `c * atan(x)`
    Atan {
        c: f64,
    },
}

/// `h(t)`
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ForcingForm {
    Zero,
    /// `c`
    Constant {
        c: f64,
    },
    /// `c * t`
    Linear {
        c: f64,
    },
    /// `c * sin(t)`
    Sine {
        c: f64,
    },
}

impl KernelForm {
    fn coefficient(&self) -> f64 {
        match *self {
            KernelForm::Zero => 0.0,
            KernelForm::Constant { c } | KernelForm::Product { c } => c,
        }
    }

    pub fn to_fn(self) -> KernelFn {
        match self {
            KernelForm::Zero => Arc::new(|_, _| 0.0),
            KernelForm::Constant { c } => Arc::new(move |_, _| c),
            KernelForm::Product { c } => Arc::new(move |t, s| c * t * s),
        }
    }
}

impl NonlinearityForm {
    fn coefficient(&self) -> f64 {
        match *self {
            NonlinearityForm::Zero => 0.0,
            NonlinearityForm::Linear { c } | NonlinearityForm::Atan { c } => c,
        }
    }

    pub fn to_fn(self) -> NonlinearFn {
        match self {
            NonlinearityForm::Zero => Arc::new(|_, _| 0.0),
            NonlinearityForm::Linear { c } => Arc::new(move |_, x| c * x),
            NonlinearityForm::Atan { c } => Arc::new(move |_, x| c * x.atan()),
        }
    }

    fn linear_slope(&self) -> Option<f64> {
        match *self {
            NonlinearityForm::Zero => Some(0.0),
            NonlinearityForm::Linear { c } => Some(c),
            NonlinearityForm::Atan { .. } => None,
        }
    }
}

impl ForcingForm {
    fn coefficient(&self) -> f64 {
        match *self {
            ForcingForm::Zero => 0.0,
            ForcingForm::Constant { c } | ForcingForm::Linear { c } | ForcingForm::Sine { c } => c,
        }
    }

    pub fn to_fn(self) -> ForcingFn {
        match self {
            ForcingForm::Zero => Arc::new(|_| 0.0),
            ForcingForm::Constant { c } => Arc::new(move |_| c),
            ForcingForm::Linear { c } => Arc::new(move |t| c * t),
            ForcingForm::Sine { c } => Arc::new(move |t| c * t.sin()),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.to_fn())(t)
    }
}

/// A problem described entirely by registry forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FredholmSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub k: f64,
    pub k1: KernelForm,
    pub k2: KernelForm,
    pub f: NonlinearityForm,
    pub g: NonlinearityForm,
    pub h: ForcingForm,
}

impl FredholmSpec {
    pub fn to_problem(&self) -> Result<FredholmProblem, FredholmError> {
        let params = [
            self.k1.coefficient(),
            self.k2.coefficient(),
            self.f.coefficient(),
            self.g.coefficient(),
            self.h.coefficient(),
        ];
        if params.iter().any(|p| !p.is_finite()) {
            return Err(FredholmError::NonFiniteParameter);
        }
        Ok(FredholmProblem::new(self.lo, self.hi, self.n, self.k)?
            .with_kernels(self.k1.to_fn(), self.k2.to_fn())
            .with_nonlinearities(self.f.to_fn(), self.g.to_fn())
            .with_forcing(self.h.to_fn()))
    }

    /// The exact continuum solution when the problem falls in a family with
    /// a known closed form:
    ///
    /// * both kernels zero: `x = h`;
    /// * product kernels, linear `f` and `g`, linear `h`: `x(t) = α t` with
    ///   `α = c_h / (1 - (c_1 + c_2)(c_f + c_g)(hi³ - lo³)/3)`.
    pub fn closed_form(&self) -> Option<ForcingForm> {
        let kernel_product = |k: &KernelForm| match *k {
            KernelForm::Zero => Some(0.0),
            KernelForm::Product { c } => Some(c),
            KernelForm::Constant { .. } => None,
        };
        let (c1, c2) = (kernel_product(&self.k1)?, kernel_product(&self.k2)?);
        if c1 == 0.0 && c2 == 0.0 {
            return Some(self.h);
        }
        let slope_f = self.f.linear_slope()?;
        let slope_g = self.g.linear_slope()?;
        let ch = match self.h {
            ForcingForm::Zero => 0.0,
            ForcingForm::Linear { c } => c,
            _ => return None,
        };
        let moment = (self.hi.powi(3) - self.lo.powi(3)) / 3.0;
        let denom = 1.0 - (c1 + c2) * (slope_f + slope_g) * moment;
        if denom == 0.0 {
            return None;
        }
        Some(ForcingForm::Linear { c: ch / denom })
    }
}
