//! Nilpotent orbit dimensions `dim O_X = rank(ad_X)`.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::adjoint::kak_element;
use super::{ad_operator, AlgebraVector, GroupMatrix, LieModel, ModelKind};
use crate::error::{invalid, Error, Result};

/// Relative singular-value cutoff for numerical rank.
pub const RANK_CUTOFF: f64 = 1e-8;

fn is_nilpotent(x: &DMatrix<f64>) -> bool {
    let norm = x.norm();
    if norm == 0.0 {
        return true;
    }
    let m = x / norm;
    let mut p = m.clone();
    for _ in 1..m.nrows() {
        p = &p * &m;
    }
    p.norm() <= 1e-9
}

fn numerical_rank(a: &DMatrix<f64>) -> Result<usize> {
    let sv = a
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?
        .singular_values;
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > RANK_CUTOFF * top).count())
}

/// `rank(ad_X)` for nilpotent `X`.
pub fn nilpotent_orbit_dim(x: &AlgebraVector) -> Result<usize> {
    if !is_nilpotent(&x.matrix()) {
        return Err(Error::Precondition("element is not nilpotent".into()));
    }
    numerical_rank(&ad_operator(x))
}

/// The single Jordan block `Σ E_{i,i+1}`.
pub fn regular_nilpotent(model: &Arc<LieModel>) -> AlgebraVector {
    let n = model.matrix_size();
    let m = DMatrix::from_fn(n, n, |i, j| if j == i + 1 { 1.0 } else { 0.0 });
    AlgebraVector::from_matrix(model, &m).expect("superdiagonal lies in the algebra")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MaxNilpotentDim {
    /// `None` for the Heisenberg model, which is not reductive.
    pub d: Option<usize>,
    pub sweep_max: usize,
    pub samples: usize,
}

/// Orbit dimension of the regular nilpotent, checked to dominate `samples`
/// random nilpotents: strictly upper triangular matrices with random entries
/// zeroed, conjugated by `k_1 diag(e^h) k_2` with `h ∈ [-1, 1]^n`.
pub fn max_nilpotent_dim<R: Rng + ?Sized>(model: &Arc<LieModel>, samples: usize, rng: &mut R) -> Result<MaxNilpotentDim> {
    let n = model.matrix_size();
    let mut sweep_max = 0;
    for _ in 0..samples {
        let m = DMatrix::from_fn(n, n, |i, j| {
            if j > i && rng.gen_bool(0.5) {
                rng.sample::<f64, _>(StandardNormal)
            } else {
                0.0
            }
        });
        let x = AlgebraVector::from_matrix(model, &m)?;
        let x = match model.kind() {
            ModelKind::Sl(_) => {
                let h: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let g: GroupMatrix = kak_element(model, &h, rng)?;
                g.adjoint(&x)?
            }
            ModelKind::Heisenberg => x,
        };
        sweep_max = sweep_max.max(nilpotent_orbit_dim(&x)?);
    }
    let d = match model.kind() {
        ModelKind::Sl(_) => {
            let regular = nilpotent_orbit_dim(&regular_nilpotent(model))?;
            if sweep_max > regular {
                return invalid(format!("random nilpotent reached dimension {sweep_max} > {regular}"));
            }
            Some(regular)
        }
        ModelKind::Heisenberg => None,
    };
    Ok(MaxNilpotentDim { d, sweep_max, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::build_model;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixtures() {
        let m = build_model("sl:2").unwrap();
        assert_eq!(nilpotent_orbit_dim(&AlgebraVector::zero(&m)).unwrap(), 0);
        assert_eq!(nilpotent_orbit_dim(&AlgebraVector::basis_vector(&m, 1)).unwrap(), 2);
        assert!(nilpotent_orbit_dim(&AlgebraVector::basis_vector(&m, 0)).is_err());
        let m3 = build_model("sl:3").unwrap();
        assert_eq!(nilpotent_orbit_dim(&regular_nilpotent(&m3)).unwrap(), 6);
    }

    #[test]
    fn maximal_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for (n, d) in [(2, 2), (3, 6), (4, 12)] {
            let m = build_model(&format!("sl:{n}")).unwrap();
            let r = max_nilpotent_dim(&m, 200, &mut rng).unwrap();
            assert_eq!(r.d, Some(d));
            assert!(r.sweep_max <= d);
        }
        let h = build_model("heisenberg3").unwrap();
        assert_eq!(max_nilpotent_dim(&h, 10, &mut rng).unwrap().d, None);
    }
}
