//! Cyclic Jacobi eigen-decomposition for hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a[p][q]` with a
//! diagonal unitary and then applies an ordinary real plane rotation, so
//! the accumulated transformation stays unitary and the diagonal stays real.

use super::Complex;

const MAX_SWEEPS: usize = 100;

/// Convergence threshold on the off-diagonal Frobenius norm, relative to the
/// Frobenius norm of the input.
pub(crate) const OFF_DIAGONAL_TOL: f64 = 1e-13;

pub(crate) struct Decomposition {
    /// Unsorted eigenvalues.
    pub values: Vec<f64>,
    /// Column-major-by-eigenvalue: `vectors[i * n + j]` is component `i` of eigenvector `j`.
    pub vectors: Option<Vec<Complex>>,
}

fn off_diagonal_norm(a: &[Complex], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i * n + j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Diagonalizes the hermitian part of `a` (row-major, `n * n`).
pub(crate) fn jacobi_hermitian(a: &[Complex], n: usize, want_vectors: bool) -> Decomposition {
    debug_assert_eq!(a.len(), n * n);
    // Work on the exactly hermitian part so rounding in the input cannot
    // leak an imaginary component onto the diagonal.
    let mut m = vec![Complex::ZERO; n * n];
    for i in 0..n {
        m[i * n + i] = Complex::from(a[i * n + i].re);
        for j in (i + 1)..n {
            let v = (a[i * n + j] + a[j * n + i].conj()).scale(0.5);
            m[i * n + j] = v;
            m[j * n + i] = v.conj();
        }
    }
    let mut v = if want_vectors {
        let mut id = vec![Complex::ZERO; n * n];
        for i in 0..n {
            id[i * n + i] = Complex::ONE;
        }
        Some(id)
    } else {
        None
    };

    let scale = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale > 0.0 && n > 1 {
        let threshold = OFF_DIAGONAL_TOL * scale;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&m, n) < threshold {
                break;
            }
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    rotate(&mut m, v.as_deref_mut(), n, p, q);
                }
            }
        }
    }

    Decomposition {
        values: (0..n).map(|i| m[i * n + i].re).collect(),
        vectors: v,
    }
}

fn rotate(m: &mut [Complex], v: Option<&mut [Complex]>, n: usize, p: usize, q: usize) {
    let apq = m[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    // w = e^{-i arg(apq)}
    let w = apq.conj().scale(1.0 / r);
    let app = m[p * n + p].re;
    let aqq = m[q * n + q].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    let jpp = Complex::from(c);
    let jpq = Complex::from(s);
    let jqp = w.scale(-s);
    let jqq = w.scale(c);

    // m <- m * J
    for k in 0..n {
        let akp = m[k * n + p];
        let akq = m[k * n + q];
        m[k * n + p] = akp * jpp + akq * jqp;
        m[k * n + q] = akp * jpq + akq * jqq;
    }
    // m <- J^H * m
    for k in 0..n {
        let apk = m[p * n + k];
        let aqk = m[q * n + k];
        m[p * n + k] = jpp.conj() * apk + jqp.conj() * aqk;
        m[q * n + k] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    m[p * n + q] = Complex::ZERO;
    m[q * n + p] = Complex::ZERO;
    m[p * n + p].im = 0.0;
    m[q * n + q].im = 0.0;

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[k * n + p];
            let vkq = v[k * n + q];
            v[k * n + p] = vkp * jpp + vkq * jqp;
            v[k * n + q] = vkp * jpq + vkq * jqq;
        }
    }
}
