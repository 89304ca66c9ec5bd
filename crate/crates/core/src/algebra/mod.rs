//! A concrete finite-dimensional C*-algebra: complex `n x n` matrices with
//! the conjugate transpose as involution and the spectral norm.
//!
//! Elements are stored either densely or, when every off-diagonal entry is
//! zero by construction, as their diagonal alone. Diagonal storage is what
//! lets grid-function metrics with thousands of nodes stay linear in cost.

mod eigen;
pub mod random;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Complex scalars of the algebra.
pub type Complex = num_complex::Complex64;

/// Default relative tolerance for the positive cone.
pub const DEFAULT_POSITIVITY_TOL: f64 = 1e-10;

/// Relative tolerance (against the Frobenius norm) for `a == a*`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Pivots below this fraction of the largest entry count as zero.
const PIVOT_TOL: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("algebra elements need dimension at least 1")]
    EmptyElement,
    #[error("expected {expected} entries, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("element is not hermitian (max |a_ij - conj(a_ji)| = {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("1 - a is singular")]
    Singular,
}

#[derive(Clone, Debug)]
enum Repr {
    Dense(Vec<Complex>),
    Diagonal(Vec<Complex>),
}

/// An element of the matrix algebra `M_n(C)`.
///
/// Entries are always finite; every fallible constructor rejects NaN and
/// infinities.
#[derive(Clone, Debug)]
pub struct Element {
    dim: usize,
    repr: Repr,
}

/// Outcome of a positivity test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PositivityVerdict {
    pub is_hermitian: bool,
    /// Smallest eigenvalue; `None` when the element is not hermitian.
    pub min_eigenvalue: Option<f64>,
    pub is_positive: bool,
}

/// Ascending eigenvalues and matching unit eigenvectors (as columns).
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Element,
}

fn check_finite(dim: usize, entries: &[Complex]) -> Result<(), AlgebraError> {
    match entries.iter().position(|z| !z.is_finite()) {
        Some(idx) => Err(AlgebraError::NonFinite {
            row: idx / dim,
            col: idx % dim,
        }),
        None => Ok(()),
    }
}

impl Element {
    /// The zero element `0_A`.
    ///
    /// Panics if `dim == 0`.
    pub fn zero(dim: usize) -> Self {
        Self::scalar(0.0, dim)
    }

    /// The unit `1_A`.
    ///
    /// Panics if `dim == 0`.
    pub fn identity(dim: usize) -> Self {
        Self::scalar(1.0, dim)
    }

    /// `c * 1_A`. Panics if `dim == 0` or `c` is not finite.
    pub fn scalar(c: f64, dim: usize) -> Self {
        assert!(dim >= 1, "algebra elements need dimension at least 1");
        assert!(c.is_finite(), "scalar must be finite");
        Element {
            dim,
            repr: Repr::Diagonal(vec![Complex::from(c); dim]),
        }
    }

    pub fn from_diagonal(values: &[f64]) -> Result<Self, AlgebraError> {
        Self::from_complex_diagonal(values.iter().map(|&v| Complex::from(v)).collect())
    }

    pub fn from_complex_diagonal(values: Vec<Complex>) -> Result<Self, AlgebraError> {
        if values.is_empty() {
            return Err(AlgebraError::EmptyElement);
        }
        if let Some(i) = values.iter().position(|z| !z.is_finite()) {
            return Err(AlgebraError::NonFinite { row: i, col: i });
        }
        Ok(Element {
            dim: values.len(),
            repr: Repr::Diagonal(values),
        })
    }

    /// Builds a dense element from `dim * dim` row-major entries.
    pub fn from_row_major(dim: usize, entries: Vec<Complex>) -> Result<Self, AlgebraError> {
        if dim == 0 {
            return Err(AlgebraError::EmptyElement);
        }
        if entries.len() != dim * dim {
            return Err(AlgebraError::ShapeMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        check_finite(dim, &entries)?;
        Ok(Element {
            dim,
            repr: Repr::Dense(entries),
        })
    }

    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self, AlgebraError> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(AlgebraError::ShapeMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::from_row_major(dim, entries)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, AlgebraError> {
        let rows: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Complex::from(v)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `(i, j)`. Panics when out of range.
    pub fn get(&self, i: usize, j: usize) -> Complex {
        assert!(i < self.dim && j < self.dim, "index out of range");
        match &self.repr {
            Repr::Dense(e) => e[i * self.dim + j],
            Repr::Diagonal(d) => {
                if i == j {
                    d[i]
                } else {
                    Complex::ZERO
                }
            }
        }
    }

    /// The stored diagonal when the element is held in diagonal form.
    pub fn as_diagonal(&self) -> Option<&[Complex]> {
        match &self.repr {
            Repr::Diagonal(d) => Some(d),
            Repr::Dense(_) => None,
        }
    }

    pub fn to_row_major(&self) -> Vec<Complex> {
        match &self.repr {
            Repr::Dense(e) => e.clone(),
            Repr::Diagonal(d) => {
                let n = self.dim;
                let mut e = vec![Complex::ZERO; n * n];
                for (i, &z) in d.iter().enumerate() {
                    e[i * n + i] = z;
                }
                e
            }
        }
    }

    /// The involution `a -> a*` (conjugate transpose).
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let repr = match &self.repr {
            Repr::Diagonal(d) => Repr::Diagonal(d.iter().map(|z| z.conj()).collect()),
            Repr::Dense(e) => {
                let mut out = vec![Complex::ZERO; n * n];
                for i in 0..n {
                    for j in 0..n {
                        out[i * n + j] = e[j * n + i].conj();
                    }
                }
                Repr::Dense(out)
            }
        };
        Element { dim: n, repr }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_entries(|z| z.scale(s))
    }

    pub fn scale_complex(&self, s: Complex) -> Self {
        self.map_entries(|z| z * s)
    }

    fn map_entries(&self, f: impl Fn(Complex) -> Complex) -> Self {
        let repr = match &self.repr {
            Repr::Dense(e) => Repr::Dense(e.iter().map(|&z| f(z)).collect()),
            Repr::Diagonal(d) => Repr::Diagonal(d.iter().map(|&z| f(z)).collect()),
        };
        Element {
            dim: self.dim,
            repr,
        }
    }

    fn same_dim(&self, other: &Element) -> Result<(), AlgebraError> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(AlgebraError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        }
    }

    fn zip_entries(&self, other: &Element, f: impl Fn(Complex, Complex) -> Complex) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let repr = match (&self.repr, &other.repr) {
            (Repr::Diagonal(a), Repr::Diagonal(b)) => {
                Repr::Diagonal(a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
            }
            _ => {
                let a = self.to_row_major();
                let b = other.to_row_major();
                Repr::Dense(a.iter().zip(&b).map(|(&x, &y)| f(x, y)).collect())
            }
        };
        Element {
            dim: self.dim,
            repr,
        }
    }

    fn product(&self, other: &Element) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Diagonal(a), Repr::Diagonal(b)) => {
                Repr::Diagonal(a.iter().zip(b).map(|(&x, &y)| x * y).collect())
            }
            (Repr::Diagonal(d), Repr::Dense(e)) => {
                let mut out = e.clone();
                for i in 0..n {
                    for j in 0..n {
                        out[i * n + j] = d[i] * e[i * n + j];
                    }
                }
                Repr::Dense(out)
            }
            (Repr::Dense(e), Repr::Diagonal(d)) => {
                let mut out = e.clone();
                for i in 0..n {
                    for j in 0..n {
                        out[i * n + j] = e[i * n + j] * d[j];
                    }
                }
                Repr::Dense(out)
            }
            (Repr::Dense(a), Repr::Dense(b)) => {
                let mut out = vec![Complex::ZERO; n * n];
                for i in 0..n {
                    for k in 0..n {
                        let aik = a[i * n + k];
                        if aik == Complex::ZERO {
                            continue;
                        }
                        for j in 0..n {
                            out[i * n + j] += aik * b[k * n + j];
                        }
                    }
                }
                Repr::Dense(out)
            }
        };
        Element { dim: n, repr }
    }

    pub fn frobenius_norm(&self) -> f64 {
        let entries = match &self.repr {
            Repr::Dense(e) => e,
            Repr::Diagonal(d) => d,
        };
        entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |a_ij - conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        match &self.repr {
            Repr::Diagonal(d) => d.iter().map(|z| 2.0 * z.im.abs()).fold(0.0, f64::max),
            Repr::Dense(e) => {
                let mut worst = 0.0f64;
                for i in 0..n {
                    for j in i..n {
                        worst = worst.max((e[i * n + j] - e[j * n + i].conj()).norm());
                    }
                }
                worst
            }
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= HERMITIAN_TOL * self.frobenius_norm()
    }

    fn require_hermitian(&self) -> Result<(), AlgebraError> {
        if self.is_hermitian() {
            Ok(())
        } else {
            Err(AlgebraError::NotHermitian {
                defect: self.hermitian_defect(),
            })
        }
    }

    /// Ascending spectrum of a hermitian element.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>, AlgebraError> {
        self.require_hermitian()?;
        Ok(self.eigenvalues_unchecked())
    }

    fn eigenvalues_unchecked(&self) -> Vec<f64> {
        let mut values = match &self.repr {
            Repr::Diagonal(d) => d.iter().map(|z| z.re).collect(),
            Repr::Dense(e) => eigen::jacobi_hermitian(e, self.dim, false).values,
        };
        values.sort_by(f64::total_cmp);
        values
    }

    /// Spectrum plus an orthonormal eigenbasis, eigenvalues ascending.
    pub fn hermitian_eigen(&self) -> Result<HermitianEigen, AlgebraError> {
        self.require_hermitian()?;
        let n = self.dim;
        let dense = self.to_row_major();
        let dec = eigen::jacobi_hermitian(&dense, n, true);
        let raw = dec.vectors.expect("vectors requested");
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| dec.values[i].total_cmp(&dec.values[j]));
        let mut vectors = vec![Complex::ZERO; n * n];
        for (new_col, &old_col) in order.iter().enumerate() {
            for row in 0..n {
                vectors[row * n + new_col] = raw[row * n + old_col];
            }
        }
        Ok(HermitianEigen {
            values: order.iter().map(|&i| dec.values[i]).collect(),
            vectors: Element {
                dim: n,
                repr: Repr::Dense(vectors),
            },
        })
    }

    /// Spectral norm, `sqrt(max spectrum(a* a))`.
    pub fn operator_norm(&self) -> f64 {
        match &self.repr {
            Repr::Diagonal(d) => d.iter().map(|z| z.norm()).fold(0.0, f64::max),
            Repr::Dense(_) => {
                let gram = &self.adjoint() * self;
                gram.eigenvalues_unchecked()
                    .last()
                    .copied()
                    .unwrap_or(0.0)
                    .max(0.0)
                    .sqrt()
            }
        }
    }

    /// Tests membership in the positive cone: hermitian with
    /// `min spectrum >= -tol * max(1, ||a||)`.
    pub fn check_positive(&self, tol: f64) -> PositivityVerdict {
        if !self.is_hermitian() {
            return PositivityVerdict {
                is_hermitian: false,
                min_eigenvalue: None,
                is_positive: false,
            };
        }
        let values = self.eigenvalues_unchecked();
        let min = values[0];
        let norm = min.abs().max(values[values.len() - 1].abs());
        PositivityVerdict {
            is_hermitian: true,
            min_eigenvalue: Some(min),
            is_positive: min >= -tol * norm.max(1.0),
        }
    }

    /// `self ⪯ other`, i.e. `other - self` is positive.
    pub fn partial_leq(&self, other: &Element, tol: f64) -> Result<bool, AlgebraError> {
        self.same_dim(other)?;
        self.require_hermitian()?;
        other.require_hermitian()?;
        Ok((other - self).check_positive(tol).is_positive)
    }

    /// `(1_A - a)^{-1}` by Gaussian elimination with partial pivoting.
    pub fn inverse_one_minus(&self) -> Result<Element, AlgebraError> {
        let n = self.dim;
        let m = &Element::identity(n) - self;
        if let Repr::Diagonal(d) = &m.repr {
            let scale = d.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if d.iter().any(|z| z.norm() <= PIVOT_TOL * scale) || scale == 0.0 {
                return Err(AlgebraError::Singular);
            }
            return Element::from_complex_diagonal(d.iter().map(|&z| Complex::ONE / z).collect());
        }

        let mut a = m.to_row_major();
        let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(AlgebraError::Singular);
        }
        let mut inv = Element::identity(n).to_row_major();
        for col in 0..n {
            let (pivot_row, pivot_abs) =
                (col..n)
                    .map(|r| (r, a[r * n + col].norm()))
                    .fold(
                        (col, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pivot_abs <= PIVOT_TOL * scale {
                return Err(AlgebraError::Singular);
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                    inv.swap(col * n + j, pivot_row * n + j);
                }
            }
            let pivot = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= pivot;
                inv[col * n + j] /= pivot;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor == Complex::ZERO {
                    continue;
                }
                for j in 0..n {
                    let av = a[col * n + j];
                    let iv = inv[col * n + j];
                    a[r * n + j] -= factor * av;
                    inv[r * n + j] -= factor * iv;
                }
            }
        }
        Element::from_row_major(n, inv)
    }

    /// `||ab - ba|| <= tol * max(1, ||a|| ||b||)`.
    pub fn commutes(&self, other: &Element, tol: f64) -> Result<bool, AlgebraError> {
        self.same_dim(other)?;
        let commutator = &(self * other) - &(other * self);
        let scale = (self.operator_norm() * other.operator_norm()).max(1.0);
        Ok(commutator.operator_norm() <= tol * scale)
    }

    /// Returns `c` when the element equals `c * 1_A` up to `tol * max(1, |c|)`.
    pub fn as_scalar(&self, tol: f64) -> Option<Complex> {
        let c = self.get(0, 0);
        let slack = tol * c.norm().max(1.0);
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { c } else { Complex::ZERO };
                if (self.get(i, j) - expected).norm() > slack {
                    return None;
                }
            }
        }
        Some(c)
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Diagonal(a), Repr::Diagonal(b)) | (Repr::Dense(a), Repr::Dense(b)) => a == b,
            _ => self.to_row_major() == other.to_row_major(),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a Element> for &'a Element {
            type Output = Element;
            fn $method(self, rhs: &'a Element) -> Element {
                let f: fn(&Element, &Element) -> Element = $body;
                f(self, rhs)
            }
        }
        impl $trait<Element> for Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.zip_entries(b, |x, y| x + y));
forward_binop!(Sub, sub, |a, b| a.zip_entries(b, |x, y| x - y));
forward_binop!(Mul, mul, |a, b| a.product(b));

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}
