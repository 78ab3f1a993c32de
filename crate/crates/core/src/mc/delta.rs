//! Monte Carlo `δ_F(V)` with shared samples for numerator and denominator.
//!
//! As in the exact count, the identity is adjoined to `F`: a sample `v ∈ V`
//! counts when `s^{-1} v s ∈ V` for every `s ∈ F`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{McConfig, McEstimate};
use crate::error::{invalid, Error, Result};
use crate::group::{FiniteGroup, GroupSubset};
use crate::lie::{
    exp_density, kak_element, nilcone_tube_membership, sl2_tube_orthonormal, AlgebraVector, GroupMatrix, LieModel,
    ModelKind,
};

/// Largest tolerated fraction of samples whose logarithm fails its round trip.
pub const MAX_LOG_FAILURE_RATE: f64 = 0.01;
const LOG_TOL: f64 = 1e-8;
const DENSITY_TERMS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Survival {
    Survives,
    Leaves,
    /// The sample could not be classified and is rejected.
    Failed,
}

/// One weighted draw from `V` together with its classification.
pub trait DeltaBackend: Sync {
    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<(f64, Survival)>;
}

#[derive(Default, Clone, Copy)]
struct Moments {
    w: f64,
    w_hit: f64,
    w2: f64,
    w2_hit: f64,
    hits: usize,
    accepted: usize,
    failed: usize,
}

impl Moments {
    fn add(&mut self, o: &Moments) {
        self.w += o.w;
        self.w_hit += o.w_hit;
        self.w2 += o.w2;
        self.w2_hit += o.w2_hit;
        self.hits += o.hits;
        self.accepted += o.accepted;
        self.failed += o.failed;
    }
}

/// Ratio estimate `Σ w 1[survives] / Σ w` with delta-method stderr
/// `sqrt(Σ w² (1[survives] - δ)²) / Σ w`, which reduces to the binomial
/// stderr for unit weights.
pub fn delta_mc<B: DeltaBackend>(backend: &B, cfg: &McConfig) -> Result<McEstimate> {
    cfg.validate()?;
    let parts = (0..cfg.batches())
        .into_par_iter()
        .map(|b| {
            let mut rng = cfg.batch_rng(b);
            let mut m = Moments::default();
            for _ in 0..cfg.batch {
                let (w, s) = backend.draw(&mut rng)?;
                match s {
                    Survival::Failed => m.failed += 1,
                    s => {
                        m.accepted += 1;
                        m.w += w;
                        m.w2 += w * w;
                        if s == Survival::Survives {
                            m.hits += 1;
                            m.w_hit += w;
                            m.w2_hit += w * w;
                        }
                    }
                }
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut m = Moments::default();
    for p in &parts {
        m.add(p);
    }
    if m.failed as f64 > MAX_LOG_FAILURE_RATE * cfg.samples as f64 {
        return Err(Error::Numerical(format!(
            "{} of {} samples failed the logarithm round trip (limit {:.0}%); shrink the neighbourhood",
            m.failed,
            cfg.samples,
            100.0 * MAX_LOG_FAILURE_RATE
        )));
    }
    if m.failed > 0 {
        log::warn!("rejected {} of {} samples after failed logarithm round trips", m.failed, cfg.samples);
    }
    if m.accepted == 0 || m.w <= 0.0 {
        return Err(Error::Numerical("no usable samples".into()));
    }
    let delta = m.w_hit / m.w;
    let var = m.w2_hit * (1.0 - delta).powi(2) + (m.w2 - m.w2_hit) * delta * delta;
    Ok(McEstimate {
        mean: delta,
        stderr: var.sqrt() / m.w,
        samples: m.accepted,
        seed: cfg.seed,
        hits: m.hits,
        zero_information: m.hits == 0 || m.hits == m.accepted,
    })
}

/// Uniform sampling of a finite `V`.
pub struct FiniteDeltaBackend {
    group: Arc<FiniteGroup>,
    v: GroupSubset,
    f: Vec<usize>,
}

impl FiniteDeltaBackend {
    pub fn new(f: &GroupSubset, v: &GroupSubset) -> Result<Self> {
        if !crate::group::same_group(f.parent(), v.parent()) {
            return Err(Error::ParentMismatch(f.parent().label().into(), v.parent().label().into()));
        }
        if v.is_empty() {
            return Err(Error::Precondition("V is empty".into()));
        }
        Ok(Self { group: v.parent().clone(), v: v.clone(), f: f.members().to_vec() })
    }
}

impl DeltaBackend for FiniteDeltaBackend {
    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<(f64, Survival)> {
        let members = self.v.members();
        let x = members[rng.gen_range(0..members.len())];
        let g = &self.group;
        let ok = self.f.iter().all(|&s| self.v.contains(g.mul(g.mul(g.inv(s), x), s)));
        Ok((1.0, if ok { Survival::Survives } else { Survival::Leaves }))
    }
}

/// Neighbourhood `W` of zero in the Lie algebra; `V = exp(W)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Neighbourhood {
    /// `B_θ`-norm ball.
    Ball { radius: f64 },
    /// Nilpotent-cone tube `V_{ε,R}`.
    Tube { eps: f64, r: f64 },
}

impl Neighbourhood {
    fn half_width(&self) -> f64 {
        match *self {
            Neighbourhood::Ball { radius } => radius,
            Neighbourhood::Tube { r, .. } => r,
        }
    }

    fn contains(&self, model: &LieModel, x: &AlgebraVector) -> Result<bool> {
        match *self {
            Neighbourhood::Ball { radius } => Ok(x.norm() < radius),
            Neighbourhood::Tube { eps, r } if model.kind() == ModelKind::Sl(2) => {
                Ok(sl2_tube_orthonormal(x.orthonormal_coords().as_slice(), eps, r))
            }
            Neighbourhood::Tube { eps, r } => nilcone_tube_membership(x, eps, r),
        }
    }

    fn contains_orthonormal(&self, model: &Arc<LieModel>, y: &[f64]) -> Result<bool> {
        match *self {
            Neighbourhood::Ball { radius } => Ok(y.iter().map(|v| v * v).sum::<f64>() < radius * radius),
            Neighbourhood::Tube { eps, r } if model.kind() == ModelKind::Sl(2) => Ok(sl2_tube_orthonormal(y, eps, r)),
            _ => self.contains(model, &AlgebraVector::from_orthonormal(model, y)?),
        }
    }
}

type M2 = [f64; 4];

fn m2_mul(a: &M2, b: &M2) -> M2 {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

/// `exp` of a traceless 2×2 matrix: `c(D) I + s(D) X` with `D = -det X`.
fn sl2_exp(x: &M2) -> M2 {
    let d = -(x[0] * x[3] - x[1] * x[2]);
    let (c, s) = if d.abs() < 1e-12 {
        (1.0 + d / 2.0, 1.0 + d / 6.0)
    } else if d > 0.0 {
        let l = d.sqrt();
        (l.cosh(), l.sinh() / l)
    } else {
        let t = (-d).sqrt();
        (t.cos(), t.sin() / t)
    };
    [c + s * x[0], s * x[1], s * x[2], c + s * x[3]]
}

/// Principal logarithm of a determinant-one 2×2 matrix, `None` when the
/// trace is at most `-2`.
fn sl2_log(m: &M2) -> Option<M2> {
    let half = (m[0] + m[3]) / 2.0;
    let k = if (half - 1.0).abs() < 1e-12 {
        1.0
    } else if half > 1.0 {
        let l = half.acosh();
        l / l.sinh()
    } else if half > -1.0 {
        let t = half.acos();
        if t.sin() < 1e-6 {
            return None;
        }
        t / t.sin()
    } else {
        return None;
    };
    Some([k * (m[0] - half), k * m[1], k * m[2], k * (m[3] - half)])
}

/// `(sinh λ / λ)²` with `λ² = -det x`.
fn sl2_density(x: &M2) -> f64 {
    let d = -(x[0] * x[3] - x[1] * x[2]);
    if d.abs() < 1e-12 {
        1.0 + d / 3.0
    } else if d > 0.0 {
        let l = d.sqrt();
        (l.sinh() / l).powi(2)
    } else {
        let t = (-d).sqrt();
        (t.sin() / t).powi(2)
    }
}

fn to_m2(m: &nalgebra::DMatrix<f64>) -> M2 {
    [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
}

/// Samples `x` uniformly from `W` in orthonormal coordinates with weight
/// `ν(x)`, and checks `log(s^{-1} exp(x) s) ∈ W` for `s ∈ F`.
pub struct LieDeltaBackend {
    model: Arc<LieModel>,
    f: Vec<GroupMatrix>,
    f_inv: Vec<GroupMatrix>,
    w: Neighbourhood,
    sl2: Option<Vec<(M2, M2)>>,
}

impl LieDeltaBackend {
    pub fn new(model: &Arc<LieModel>, f: &[GroupMatrix], w: Neighbourhood) -> Result<Self> {
        match w {
            Neighbourhood::Ball { radius } if radius > 0.0 => {}
            Neighbourhood::Tube { eps, r } if eps > 0.0 && r > 0.0 => {}
            _ => return invalid("neighbourhood parameters must be positive"),
        }
        for s in f {
            if !Arc::ptr_eq(s.model(), model) && s.model().name() != model.name() {
                return Err(Error::ParentMismatch(s.model().name().into(), model.name().into()));
            }
        }
        let f_inv = f.iter().map(|s| s.inverse()).collect::<Result<Vec<_>>>()?;
        let sl2 = (model.kind() == ModelKind::Sl(2))
            .then(|| f.iter().zip(&f_inv).map(|(s, si)| (to_m2(s.matrix()), to_m2(si.matrix()))).collect());
        Ok(Self { model: model.clone(), f: f.to_vec(), f_inv, w, sl2 })
    }

    fn sample_w(&self, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        let hw = self.w.half_width();
        let mut y = vec![0.0; self.model.dim()];
        loop {
            for v in y.iter_mut() {
                *v = hw * (2.0 * rng.gen::<f64>() - 1.0);
            }
            if self.w.contains_orthonormal(&self.model, &y)? {
                return Ok(y);
            }
        }
    }

    fn draw_sl2(&self, pairs: &[(M2, M2)], x: &AlgebraVector) -> Result<(f64, Survival)> {
        let xm = to_m2(&x.matrix());
        let weight = sl2_density(&xm);
        let e = sl2_exp(&xm);
        for (s, si) in pairs {
            let m = m2_mul(&m2_mul(si, &e), s);
            let Some(l) = sl2_log(&m) else { return Ok((weight, Survival::Failed)) };
            let back = sl2_exp(&l);
            let err = back.iter().zip(&m).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            let scale = m.iter().map(|a| a * a).sum::<f64>().sqrt();
            if err > LOG_TOL * scale {
                return Ok((weight, Survival::Failed));
            }
            let lx = AlgebraVector::from_matrix(&self.model, &nalgebra::DMatrix::from_row_slice(2, 2, &l))?;
            if !self.w.contains(&self.model, &lx)? {
                return Ok((weight, Survival::Leaves));
            }
        }
        Ok((weight, Survival::Survives))
    }
}

impl DeltaBackend for LieDeltaBackend {
    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<(f64, Survival)> {
        let y = self.sample_w(rng)?;
        let x = AlgebraVector::from_orthonormal(&self.model, &y)?;
        if let Some(pairs) = &self.sl2 {
            return self.draw_sl2(pairs, &x);
        }
        let weight = exp_density(&x, DENSITY_TERMS);
        let e = GroupMatrix::exp(&x);
        for (s, si) in self.f.iter().zip(&self.f_inv) {
            let l = match si.mul(&e).mul(s).log(LOG_TOL) {
                Ok(l) => l,
                Err(Error::Numerical(_)) => return Ok((weight, Survival::Failed)),
                Err(e) => return Err(e),
            };
            if !self.w.contains(&self.model, &l)? {
                return Ok((weight, Survival::Leaves));
            }
        }
        Ok((weight, Survival::Survives))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TheoremBReport {
    pub rho: f64,
    pub r: f64,
    /// `ρ^{-d/2}`.
    pub bound: f64,
    /// Row-major entries of the sampled elements of `F`.
    pub f: Vec<Vec<f64>>,
    pub adjoint_norms: Vec<f64>,
    pub rows: Vec<(f64, McEstimate)>,
    /// Estimate at the smallest `ε` is at least `bound - 3 stderr`.
    pub pass: bool,
}

/// Draws `F` from `B_ρ` in `SL(2, R)` as `k_1 diag(e^t, e^{-t}) k_2` with
/// `t` uniform in `[-log ρ / 2, log ρ / 2]` and estimates
/// `δ_F(exp(V_{ε,R}))` along the schedule. `F` uses stream `u64::MAX` of the
/// seed, which sampling batches never reach.
pub fn theorem_b_consistency(rho: f64, f_size: usize, eps: &[f64], r: f64, cfg: &McConfig) -> Result<TheoremBReport> {
    if !(rho >= 1.0) {
        return invalid(format!("ρ must be at least 1, got {rho}"));
    }
    if eps.is_empty() || eps.windows(2).any(|w| w[1] >= w[0]) {
        return invalid("ε schedule must be nonempty and strictly decreasing");
    }
    let model = crate::lie::build_model("sl:2")?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(u64::MAX);
    let half = rho.ln() / 2.0;
    let f = (0..f_size)
        .map(|_| {
            let t = if half > 0.0 { rng.gen_range(-half..=half) } else { 0.0 };
            kak_element(&model, &[t, -t], &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    let adjoint_norms = f.iter().map(crate::lie::adjoint_norm).collect::<Result<Vec<_>>>()?;
    let rows = eps
        .iter()
        .map(|&e| {
            let backend = LieDeltaBackend::new(&model, &f, Neighbourhood::Tube { eps: e, r })?;
            Ok((e, delta_mc(&backend, cfg)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let bound = 1.0 / rho;
    let last = &rows.last().expect("schedule is nonempty").1;
    Ok(TheoremBReport {
        rho,
        r,
        bound,
        f: f.iter().map(|g| to_m2(g.matrix()).to_vec()).collect(),
        adjoint_norms,
        pass: last.mean >= bound - 3.0 * last.stderr,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::delta_exact;
    use crate::lie::{build_model, exp_density};
    use nalgebra::DMatrix;

    #[test]
    fn sl2_closed_forms_match_general_routines() {
        let m = build_model("sl:2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let x = AlgebraVector::random(&m, &mut rng).scale(0.6);
            let xm = to_m2(&x.matrix());
            assert!((sl2_density(&xm) - exp_density(&x, 30)).abs() < 1e-10);
            let e = GroupMatrix::exp(&x);
            let ce = sl2_exp(&xm);
            for (a, b) in ce.iter().zip(&to_m2(e.matrix())) {
                assert!((a - b).abs() < 1e-12);
            }
            let l = sl2_log(&ce).unwrap();
            for (a, b) in l.iter().zip(&xm) {
                assert!((a - b).abs() < 1e-10);
            }
        }
        assert!(sl2_log(&[-1.0, 1.0, 0.0, -1.0]).is_none());
    }

    #[test]
    fn trivial_and_rotation_invariant_cases() {
        let m = build_model("sl:2").unwrap();
        let cfg = McConfig::new(20_000, 2).unwrap();
        let ball = Neighbourhood::Ball { radius: 0.3 };
        let id = LieDeltaBackend::new(&m, &[GroupMatrix::identity(&m)], ball).unwrap();
        assert_eq!(delta_mc(&id, &cfg).unwrap().mean, 1.0);
        let (c, s) = (0.7f64.cos(), 0.7f64.sin());
        let k = GroupMatrix::new(&m, DMatrix::from_row_slice(2, 2, &[c, -s, s, c])).unwrap();
        let est = delta_mc(&LieDeltaBackend::new(&m, &[k], ball).unwrap(), &cfg).unwrap();
        assert!((est.mean - 1.0).abs() <= 3.0 * est.stderr + 1e-12, "{est:?}");
    }

    #[test]
    fn hyperbolic_conjugation_shrinks_the_ball() {
        let m = build_model("sl:2").unwrap();
        let cfg = McConfig::new(100_000, 3).unwrap();
        let a = GroupMatrix::new(&m, DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5])).unwrap();
        let est = delta_mc(&LieDeltaBackend::new(&m, &[a], Neighbourhood::Ball { radius: 0.1 }).unwrap(), &cfg).unwrap();
        assert!(1.0 - est.mean > 5.0 * est.stderr, "{est:?}");
    }

    #[test]
    fn general_path_agrees_with_sl2_path() {
        let m = build_model("sl:2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = vec![kak_element(&m, &[0.3, -0.3], &mut rng).unwrap()];
        let b = LieDeltaBackend::new(&m, &f, Neighbourhood::Ball { radius: 0.4 }).unwrap();
        let general = LieDeltaBackend { sl2: None, ..LieDeltaBackend::new(&m, &f, Neighbourhood::Ball { radius: 0.4 }).unwrap() };
        for seed in 0..200 {
            let mut r1 = ChaCha8Rng::seed_from_u64(seed);
            let mut r2 = ChaCha8Rng::seed_from_u64(seed);
            let (w1, s1) = b.draw(&mut r1).unwrap();
            let (w2, s2) = general.draw(&mut r2).unwrap();
            assert!((w1 - w2).abs() < 1e-10);
            assert_eq!(s1, s2);
        }
    }

    #[test]
    fn finite_backend_matches_exact() {
        let g = Arc::new(FiniteGroup::parse("dihedral:6").unwrap());
        let f = GroupSubset::parse(&g, "indices:6").unwrap();
        let v = GroupSubset::parse(&g, "indices:0,1,5,7").unwrap();
        let exact = delta_exact(&f, &v).unwrap().value();
        let est = delta_mc(&FiniteDeltaBackend::new(&f, &v).unwrap(), &McConfig::new(100_000, 1).unwrap()).unwrap();
        assert!((est.mean - exact).abs() < 3.0 * est.stderr);
        let again = delta_mc(&FiniteDeltaBackend::new(&f, &v).unwrap(), &McConfig::new(100_000, 1).unwrap()).unwrap();
        assert_eq!(est, again);
    }

    #[test]
    fn theorem_b_rho_one_is_trivial() {
        let cfg = McConfig::new(10_000, 5).unwrap();
        let r = theorem_b_consistency(1.0, 3, &[0.1], 0.5, &cfg).unwrap();
        assert!(r.pass && (r.rows[0].1.mean - 1.0).abs() < 1e-12);
    }
}
