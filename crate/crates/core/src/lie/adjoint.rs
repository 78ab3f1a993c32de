//! Adjoint norms, the balls `B_ρ = {g : ‖Ad_g‖ ≤ ρ}` and their KAK
//! description `K ρ^P K` for `SL(n, R)`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{GroupMatrix, LieModel};
use crate::error::{invalid, Error, Result};

/// Operator norm of `Ad_g` with respect to `B_θ`.
pub fn adjoint_norm(g: &GroupMatrix) -> Result<f64> {
    let ad = g.model().operator_to_orthonormal(&g.ad_matrix()?);
    let sv = ad
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?
        .singular_values;
    Ok(sv.iter().copied().fold(0.0, f64::max))
}

/// Haar-random element of `SO(n)` (QR of a Gaussian matrix with the sign
/// convention fixed, then a column flip if needed).
pub fn random_rotation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = a.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BallReport {
    pub norm: f64,
    pub rho: f64,
    pub member: bool,
    /// `|‖Ad_{g^{-1}}‖ - ‖Ad_g‖|`, expected ≤ 1e-9.
    pub inversion_residual: f64,
    /// `max |‖Ad_{k_1 g k_2}‖ - ‖Ad_g‖|` over the sampled rotations, expected ≤ 1e-8.
    pub k_invariance_residual: f64,
}

impl BallReport {
    pub fn pass(&self) -> bool {
        self.inversion_residual <= 1e-9 && self.k_invariance_residual <= 1e-8
    }
}

/// Membership in `B_ρ` with the inversion and `K`-bi-invariance checks,
/// using `trials` pairs of random rotations.
pub fn ball_checks<R: Rng + ?Sized>(g: &GroupMatrix, rho: f64, trials: usize, rng: &mut R) -> Result<BallReport> {
    if !(rho >= 1.0) {
        return invalid(format!("ρ = {rho} must be at least 1"));
    }
    let model = g.model();
    if !model.is_sl() {
        return invalid("ball checks need an sl model");
    }
    let norm = adjoint_norm(g)?;
    let inversion_residual = (adjoint_norm(&g.inverse()?)? - norm).abs();
    let n = model.matrix_size();
    let mut k_res = 0.0f64;
    for _ in 0..trials {
        let k1 = random_rotation(n, rng);
        let k2 = random_rotation(n, rng);
        let h = GroupMatrix::new(model, &k1 * g.matrix() * &k2)?;
        k_res = k_res.max((adjoint_norm(&h)? - norm).abs());
    }
    Ok(BallReport { norm, rho, member: norm <= rho * (1.0 + 1e-12), inversion_residual, k_invariance_residual: k_res })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KakProfile {
    /// Log singular values in decreasing order.
    pub h: Vec<f64>,
    /// `max_{i≠j} (h_i - h_j) = h_1 - h_n`.
    pub max_root: f64,
}

impl KakProfile {
    pub fn in_polygon(&self, rho: f64) -> bool {
        self.max_root <= rho.ln() + 1e-12
    }

    /// Whether the ball test through the adjoint norm and through the polygon
    /// agree at radius `ρ`; points within `tol` of the boundary count as agreeing.
    pub fn agrees_with(&self, adjoint_norm: f64, rho: f64, tol: f64) -> bool {
        let by_norm = adjoint_norm <= rho;
        let by_poly = self.max_root <= rho.ln();
        by_norm == by_poly || (adjoint_norm.ln() - rho.ln()).abs() <= tol
    }
}

pub fn kak_log_profile(g: &GroupMatrix) -> Result<KakProfile> {
    if !g.model().is_sl() {
        return invalid("KAK profile needs an sl model");
    }
    let sv = g
        .matrix()
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?
        .singular_values;
    let mut h: Vec<f64> = sv.iter().map(|s| s.ln()).collect();
    h.sort_by(|a, b| b.total_cmp(a));
    let max_root = h[0] - h[h.len() - 1];
    Ok(KakProfile { h, max_root })
}

/// `k_1 · diag(e^{h}) · k_2` for random rotations.
pub(crate) fn kak_element<R: Rng + ?Sized>(
    model: &std::sync::Arc<LieModel>,
    h: &[f64],
    rng: &mut R,
) -> Result<GroupMatrix> {
    let n = model.matrix_size();
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, h.iter().map(|x| x.exp())));
    let k1 = random_rotation(n, rng);
    let k2 = random_rotation(n, rng);
    GroupMatrix::normalized(model, k1 * d * k2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::build_model;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(m: &std::sync::Arc<LieModel>, a: f64) -> GroupMatrix {
        GroupMatrix::new(m, DMatrix::from_row_slice(2, 2, &[a, 0.0, 0.0, 1.0 / a])).unwrap()
    }

    #[test]
    fn fixtures() {
        let m = build_model("sl:2").unwrap();
        assert!((adjoint_norm(&GroupMatrix::identity(&m)).unwrap() - 1.0).abs() < 1e-12);
        assert!((adjoint_norm(&diag(&m, 2.0)).unwrap() - 4.0).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = ball_checks(&diag(&m, 2.0), 4.0, 5, &mut rng).unwrap();
        assert!(r.member && r.pass());
        let r = ball_checks(&diag(&m, 3.0), 4.0, 5, &mut rng).unwrap();
        assert!(!r.member && (r.norm - 9.0).abs() < 1e-9);
        let rot = GroupMatrix::new(&m, random_rotation(2, &mut rng)).unwrap();
        assert!(ball_checks(&rot, 1.0, 3, &mut rng).unwrap().member);
        assert!(ball_checks(&rot, 0.5, 3, &mut rng).is_err());
    }

    #[test]
    fn svd_cross_oracle() {
        let m = build_model("sl:2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = DMatrix::from_fn(2, 2, |_, _| rng.sample::<f64, _>(StandardNormal));
            let a = if a.determinant() < 0.0 { a * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0])) } else { a };
            let g = GroupMatrix::normalized(&m, a).unwrap();
            let s = g.matrix().singular_values();
            let inv = g.inverse().unwrap().matrix().singular_values();
            assert!((adjoint_norm(&g).unwrap() - s.max() * inv.max()).abs() < 1e-9 * s.max() * inv.max());
        }
    }

    #[test]
    fn profile_of_diag() {
        let m = build_model("sl:2").unwrap();
        let p = kak_log_profile(&diag(&m, 2.0)).unwrap();
        assert!((p.h[0] - 2f64.ln()).abs() < 1e-14 && (p.max_root - 4f64.ln()).abs() < 1e-14);
        let rot = GroupMatrix::new(&m, random_rotation(2, &mut ChaCha8Rng::seed_from_u64(1))).unwrap();
        assert!(kak_log_profile(&rot).unwrap().max_root.abs() < 1e-12);
    }
}
