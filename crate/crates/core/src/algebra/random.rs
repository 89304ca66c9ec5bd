//! Random elements for sampling-based checks.

use rand::Rng;

use super::{Complex, Element};

/// Entries with real and imaginary parts uniform in `[-1, 1]`.
pub fn element<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Element {
    let entries = (0..dim * dim)
        .map(|_| Complex::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
        .collect();
    Element::from_row_major(dim, entries).expect("finite entries")
}

/// `(x + x*) / 2` for a uniform random `x`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Element {
    let x = element(rng, dim);
    (&x + &x.adjoint()).scale(0.5)
}

/// Unitary `Q` from a modified Gram-Schmidt QR of a random matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Element {
    loop {
        let x = element(rng, dim).to_row_major();
        let mut cols: Vec<Vec<Complex>> = (0..dim)
            .map(|j| (0..dim).map(|i| x[i * dim + j]).collect())
            .collect();
        let mut ok = true;
        for j in 0..dim {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let qk = &done[k];
                let proj = qk
                    .iter()
                    .zip(rest[0].iter())
                    .fold(Complex::ZERO, |acc, (&q, &v)| acc + q.conj() * v);
                for (v, &q) in rest[0].iter_mut().zip(qk) {
                    *v -= proj * q;
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for v in cols[j].iter_mut() {
                *v = v.scale(1.0 / norm);
            }
        }
        if ok {
            let mut entries = vec![Complex::ZERO; dim * dim];
            for (j, col) in cols.iter().enumerate() {
                for (i, &z) in col.iter().enumerate() {
                    entries[i * dim + j] = z;
                }
            }
            return Element::from_row_major(dim, entries).expect("finite entries");
        }
    }
}

/// `u * diag(values) * u^*`.
pub fn conjugate_diagonal(u: &Element, values: &[f64]) -> Element {
    let d = Element::from_diagonal(values).expect("finite diagonal");
    &(u * &d) * &u.adjoint()
}

/// A positive element whose spectrum is uniform in `[0, max_eigenvalue)`.
pub fn positive<R: Rng + ?Sized>(rng: &mut R, dim: usize, max_eigenvalue: f64) -> Element {
    let u = unitary(rng, dim);
    let values: Vec<f64> = (0..dim)
        .map(|_| rng.random_range(0.0..max_eigenvalue))
        .collect();
    conjugate_diagonal(&u, &values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in 1..6 {
            let u = unitary(&mut rng, dim);
            let err = (&(&u.adjoint() * &u) - &Element::identity(dim)).operator_norm();
            assert!(err < 1e-12, "dim {dim}: {err}");
        }
    }

    #[test]
    fn positive_has_bounded_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = positive(&mut rng, 4, 0.5);
        let ev = p.hermitian_eigenvalues().unwrap();
        assert!(ev[0] > -1e-12 && ev[3] < 0.5 + 1e-12);
    }
}
