//! Density `ν(x) = |det((Id - e^{-ad_x}) / ad_x)|` of Haar measure in
//! exponential coordinates.

use nalgebra::DMatrix;

use super::{ad_operator, matfn, AlgebraVector};
use crate::Complex;

/// Above this operator norm of `ad_x` the eigenvalue path is used.
pub const SERIES_RADIUS: f64 = std::f64::consts::PI;

/// `|det Σ_{k<terms} (-ad_x)^k / (k+1)!|`.
pub fn exp_density_series(x: &AlgebraVector, terms: usize) -> f64 {
    let ad = ad_operator(x);
    let d = ad.nrows();
    let neg = -&ad;
    let mut sum = DMatrix::<f64>::identity(d, d);
    let mut power = DMatrix::<f64>::identity(d, d);
    let mut fact = 1.0;
    for k in 1..terms {
        power = &power * &neg;
        fact *= (k + 1) as f64;
        sum += &power / fact;
    }
    sum.determinant().abs()
}

/// `Π_i |(1 - e^{-μ_i}) / μ_i|` over the complex eigenvalues of `ad_x`,
/// with the factor `1` at `μ = 0`.
pub fn exp_density_eigen(x: &AlgebraVector) -> f64 {
    let ad = ad_operator(x);
    if ad.iter().all(|&v| v == 0.0) {
        return 1.0;
    }
    let Ok(spectrum) = matfn::eigenvalues(&ad) else {
        log::warn!("eigenvalues of ad_x did not converge");
        return f64::NAN;
    };
    spectrum
        .iter()
        .map(|&mu: &Complex| {
            if mu.norm() < 1e-300 {
                1.0
            } else if mu.norm() < 1e-4 {
                // 1 - μ/2 + μ²/6 - μ³/24
                (Complex::new(1.0, 0.0) - mu / 2.0 + mu * mu / 6.0 - mu * mu * mu / 24.0).norm()
            } else {
                ((Complex::new(1.0, 0.0) - (-mu).exp()) / mu).norm()
            }
        })
        .product()
}

/// Series path with `series_terms` terms while `‖ad_x‖ ≤ π`, eigenvalue path
/// beyond.
pub fn exp_density(x: &AlgebraVector, series_terms: usize) -> f64 {
    let ad = x.model().operator_to_orthonormal(&ad_operator(x));
    let norm = ad.singular_values().max();
    if norm > SERIES_RADIUS || series_terms < 8 {
        if norm > SERIES_RADIUS {
            log::debug!("‖ad_x‖ = {norm:.3} exceeds π; using the eigenvalue product");
        }
        exp_density_eigen(x)
    } else {
        exp_density_series(x, series_terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::build_model;

    #[test]
    fn closed_forms() {
        let m = build_model("sl:2").unwrap();
        assert_eq!(exp_density(&AlgebraVector::zero(&m), 30), 1.0);
        assert_eq!(exp_density_eigen(&AlgebraVector::zero(&m)), 1.0);
        for t in [0.1f64, 1.0, 2.0] {
            let x = AlgebraVector::basis_vector(&m, 0).scale(t);
            let expect = (t.sinh() / t).powi(2);
            assert!((exp_density(&x, 30) - expect).abs() < 1e-10);
            assert!((exp_density_eigen(&x) - expect).abs() < 1e-10);
        }
        assert!((exp_density(&AlgebraVector::basis_vector(&m, 0), 30) - 1.381097845541816).abs() < 1e-12);
        let h = build_model("heisenberg3").unwrap();
        let x = AlgebraVector::new(&h, vec![0.7, -2.0, 5.0]).unwrap();
        assert!((exp_density(&x, 30) - 1.0).abs() < 1e-12);
    }
}
