//! Real matrix exponential and logarithm.

use nalgebra::{DMatrix, Schur, SymmetricEigen};

use crate::error::{Error, Result};
use crate::Complex;

const SCHUR_ITERATIONS: usize = 10_000;

/// Complex eigenvalues through a Schur form with a bounded iteration count.
/// When the iteration stalls the matrix is replaced by a diagonal similarity
/// transform, which has the same spectrum.
pub fn eigenvalues(a: &DMatrix<f64>) -> Result<Vec<Complex>> {
    let n = a.nrows();
    for attempt in 0..8 {
        let m = if attempt == 0 {
            a.clone()
        } else {
            let d: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * attempt as f64 * ((i * 7 + attempt) % 5) as f64).collect();
            DMatrix::from_fn(n, n, |i, j| a[(i, j)] * d[i] / d[j])
        };
        if let Some(s) = Schur::try_new(m, f64::EPSILON, SCHUR_ITERATIONS) {
            return Ok(s.complex_eigenvalues().iter().copied().collect());
        }
    }
    Err(Error::Numerical("Schur iteration did not converge".into()))
}

pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    a.clone().exp()
}

/// `exp(s)` for symmetric `s` through its eigendecomposition.
pub fn expm_symmetric(s: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(s.clone());
    let q = &eig.eigenvectors;
    let mut scaled = q.clone();
    for (j, &mu) in eig.eigenvalues.iter().enumerate() {
        scaled.column_mut(j).scale_mut(mu.exp());
    }
    scaled * q.transpose()
}

fn frobenius(a: &DMatrix<f64>) -> f64 {
    a.norm()
}

/// Principal logarithm by inverse scaling and squaring: Denman–Beavers square
/// roots until `‖A - I‖_F < 1/4`, a Mercator series, then rescaling by `2^k`.
pub fn logm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Invalid("logm needs a square matrix".into()));
    }
    let id = DMatrix::<f64>::identity(n, n);
    let mut y = a.clone();
    let mut k = 0u32;
    while frobenius(&(&y - &id)) >= 0.25 {
        if k >= 40 {
            return Err(Error::Numerical("square-root iteration did not approach the identity".into()));
        }
        y = sqrtm_db(&y)?;
        k += 1;
    }
    let x = &y - &id;
    let mut term = x.clone();
    let mut sum = x.clone();
    for j in 2..200 {
        term = &term * &x;
        let add = &term * (if j % 2 == 0 { -1.0 } else { 1.0 } / j as f64);
        sum += &add;
        if frobenius(&add) < 1e-17 * frobenius(&sum).max(1e-300) {
            break;
        }
    }
    Ok(sum * 2f64.powi(k as i32))
}

/// Denman–Beavers iteration for the principal square root.
fn sqrtm_db(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = DMatrix::<f64>::identity(n, n);
    for _ in 0..100 {
        let yi = y.clone().try_inverse().ok_or_else(|| Error::Numerical("singular iterate in sqrtm".into()))?;
        let zi = z.clone().try_inverse().ok_or_else(|| Error::Numerical("singular iterate in sqrtm".into()))?;
        let y_next = (&y + &zi) * 0.5;
        let z_next = (&z + &yi) * 0.5;
        let delta = frobenius(&(&y_next - &y));
        y = y_next;
        z = z_next;
        if delta <= 1e-15 * frobenius(&y) {
            return Ok(y);
        }
    }
    if y.iter().all(|v| v.is_finite()) {
        Ok(y)
    } else {
        Err(Error::Numerical("sqrtm diverged".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_inverts_exp() {
        let a = DMatrix::from_row_slice(3, 3, &[0.3, -1.2, 0.4, 0.8, -0.1, 0.0, 0.2, 0.5, -0.2]);
        let back = logm(&expm(&a)).unwrap();
        assert!((back - &a).norm() < 1e-12);
        let rot = DMatrix::from_row_slice(2, 2, &[0.0, 2.5, -2.5, 0.0]);
        assert!((logm(&expm(&rot)).unwrap() - rot).norm() < 1e-11);
    }

    #[test]
    fn symmetric_exp_matches_general() {
        let s = DMatrix::from_row_slice(2, 2, &[0.7, 0.2, 0.2, -0.7]);
        assert!((expm_symmetric(&s) - expm(&s)).norm() < 1e-13);
    }
}
