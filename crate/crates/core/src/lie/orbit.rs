//! Minimal norm on an adjoint orbit and membership in the nilpotent-cone tube
//! `V_{ε,R} = Ad_G(B_ε) ∩ B_R`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::matfn::expm_symmetric;
use super::{AlgebraVector, LieModel, ModelKind};
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum OrbitMethod {
    /// `sqrt(2 |det x|)`, valid on `sl(2, R)`.
    ClosedForm,
    /// Gradient flow of `‖e^p x e^{-p}‖²` over symmetric traceless `p`.
    Descent { starts: usize, seed: u64 },
}

impl Default for OrbitMethod {
    fn default() -> Self {
        OrbitMethod::Descent { starts: 20, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitNorm {
    pub value: f64,
    pub converged: bool,
    pub method: OrbitMethod,
}

fn require_sl(model: &LieModel) -> Result<usize> {
    match model.kind() {
        ModelKind::Sl(n) => Ok(n),
        ModelKind::Heisenberg => invalid("orbit norms are implemented for sl models"),
    }
}

pub fn orbit_min_norm(x: &AlgebraVector, method: OrbitMethod) -> Result<OrbitNorm> {
    let n = require_sl(x.model())?;
    match method {
        OrbitMethod::ClosedForm => {
            if n != 2 {
                return invalid("the closed form holds on sl:2 only");
            }
            let m = x.matrix();
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            Ok(OrbitNorm { value: (2.0 * det.abs()).sqrt(), converged: true, method })
        }
        OrbitMethod::Descent { starts, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let y0 = x.matrix();
            let mut best = f64::INFINITY;
            let mut converged = false;
            for s in 0..starts.max(1) {
                let start = if s == 0 {
                    y0.clone()
                } else {
                    let p = random_symmetric_traceless(n, &mut rng);
                    let e = expm_symmetric(&p);
                    let ei = expm_symmetric(&(-&p));
                    e * &y0 * ei
                };
                let (v, ok) = descend(start);
                if v < best {
                    best = v;
                    converged = ok;
                }
            }
            Ok(OrbitNorm { value: best, converged, method })
        }
    }
}

fn random_symmetric_traceless<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let mut s = (&a + a.transpose()) * 0.5;
    let tr = s.trace() / n as f64;
    for i in 0..n {
        s[(i, i)] -= tr;
    }
    s
}

/// Returns the final norm and whether the flow settled.
fn descend(mut y: DMatrix<f64>) -> (f64, bool) {
    let f0 = y.norm_squared();
    if f0 == 0.0 {
        return (0.0, true);
    }
    let mut f = f0;
    let mut eta = 0.25 / f0;
    for _ in 0..5000 {
        let g = &y * y.transpose() - y.transpose() * &y;
        let gn = g.norm();
        if gn <= 1e-14 * f || f <= 1e-20 * f0 {
            return (f.sqrt(), true);
        }
        loop {
            let cand = expm_symmetric(&(&g * -eta)) * &y * expm_symmetric(&(&g * eta));
            let fc = cand.norm_squared();
            if fc < f {
                y = cand;
                f = fc;
                eta *= 1.5;
                break;
            }
            eta *= 0.5;
            if eta * gn < 1e-17 {
                return (f.sqrt(), true);
            }
        }
    }
    (f.sqrt(), false)
}

/// `orbit_min_norm(x) < ε` and `‖x‖ < R`; closed form on `sl:2`, descent
/// otherwise.
pub fn nilcone_tube_membership(x: &AlgebraVector, eps: f64, r: f64) -> Result<bool> {
    if !(eps > 0.0 && r > 0.0) {
        return invalid("ε and R must be positive");
    }
    if x.norm() >= r {
        return Ok(false);
    }
    let method = match x.model().kind() {
        ModelKind::Sl(2) => OrbitMethod::ClosedForm,
        _ => OrbitMethod::default(),
    };
    Ok(orbit_min_norm(x, method)?.value < eps)
}

/// Fast tube test in `B_θ`-orthonormal `sl:2` coordinates `(h/√2, e, f)`:
/// `2|det x| = |y_1² + 2 y_2 y_3|`.
#[inline]
pub(crate) fn sl2_tube_orthonormal(y: &[f64], eps: f64, r: f64) -> bool {
    let n2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    n2 < r * r && (y[0] * y[0] + 2.0 * y[1] * y[2]).abs() < eps * eps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::build_model;

    #[test]
    fn fixtures() {
        let m = build_model("sl:2").unwrap();
        let d = OrbitMethod::Descent { starts: 20, seed: 1 };
        let h = AlgebraVector::basis_vector(&m, 0);
        let rot = AlgebraVector::new(&m, vec![0.0, 2.0, -2.0]).unwrap();
        let e = AlgebraVector::basis_vector(&m, 1);
        for (x, expect) in [(&h, 2f64.sqrt()), (&rot, 8f64.sqrt()), (&e, 0.0)] {
            let cf = orbit_min_norm(x, OrbitMethod::ClosedForm).unwrap().value;
            let ds = orbit_min_norm(x, d).unwrap().value;
            assert!((cf - expect).abs() < 1e-12);
            assert!((ds - cf).abs() < 1e-4, "{ds} vs {cf}");
        }
    }

    #[test]
    fn tube_membership() {
        let m = build_model("sl:2").unwrap();
        assert!(nilcone_tube_membership(&AlgebraVector::zero(&m), 1e-3, 1e-3).unwrap());
        assert!(nilcone_tube_membership(&AlgebraVector::basis_vector(&m, 1), 0.01, 2.0).unwrap());
        assert!(!nilcone_tube_membership(&AlgebraVector::basis_vector(&m, 0), 1.0, 2.0).unwrap());
        let x = AlgebraVector::new(&m, vec![0.1, 0.3, -0.05]).unwrap();
        let y = x.orthonormal_coords();
        for eps in [0.05, 0.1, 0.2, 0.4] {
            assert_eq!(nilcone_tube_membership(&x, eps, 1.0).unwrap(), sl2_tube_orthonormal(y.as_slice(), eps, 1.0));
        }
    }
}
