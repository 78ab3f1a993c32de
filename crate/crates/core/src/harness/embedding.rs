//! The local embedding `Φ_{p,V}(x) = x h_V^{2/p}` of `L_p(Γ̂)` into `L_p(Ĝ)`
//! and its per-`V` lower bound through a dual witness.

use nalgebra::DMatrix;

use super::{delta_exact, ResidualReport};
use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::group::{GroupSubset, SubgroupEmbedding};
use crate::lp::{lp_norm, matrix_abs_power, matrix_lp_norm, polar_parts, Exponent};
use crate::Complex;

/// Whether the sets `s V t`, `(s, t) ∈ pairs`, are pairwise disjoint.
fn family_disjoint(v: &GroupSubset, pairs: &[(usize, usize)]) -> bool {
    let g = v.parent();
    let mut owner = vec![usize::MAX; g.order()];
    for (k, &(s, t)) in pairs.iter().enumerate() {
        for &x in v.members() {
            let y = g.mul(g.mul(s, x), t);
            if owner[y] != usize::MAX && owner[y] != k {
                return false;
            }
            owner[y] = k;
        }
    }
    true
}

/// Whether the left translates `s V`, `s ∈ f`, are pairwise disjoint.
pub fn translates_disjoint(f: &[usize], v: &GroupSubset) -> bool {
    let e = v.parent().identity();
    let pairs: Vec<_> = f.iter().map(|&s| (s, e)).collect();
    family_disjoint(v, &pairs)
}

/// Checks the three disjointness conditions under which the lower bound is
/// exact: `sV` over `s ∈ f`, `sV` over `s ∈ fy^{-1}`, and `s_1 V t_1 ∩ s_2 V t_2 = ∅`
/// whenever `s_1 t_1 ≠ s_2 t_2` with `s_i ∈ f`, `t_i ∈ fy`.
pub fn check_lower_conditions(f: &[usize], fy: &[usize], v: &GroupSubset) -> Result<()> {
    let g = v.parent();
    if !translates_disjoint(f, v) {
        return Err(Error::Precondition("condition (1): translates sV, s in supp x, overlap".into()));
    }
    let fy_inv: Vec<usize> = fy.iter().map(|&t| g.inv(t)).collect();
    if !translates_disjoint(&fy_inv, v) {
        return Err(Error::Precondition("condition (2): translates sV, s in supp(y)^-1, overlap".into()));
    }
    for &s1 in f {
        for &t1 in fy {
            for &s2 in f {
                for &t2 in fy {
                    if g.mul(s1, t1) != g.mul(s2, t2) && !family_disjoint(v, &[(s1, t1), (s2, t2)]) {
                        return Err(Error::Precondition(format!(
                            "condition (3): s1 V t1 and s2 V t2 overlap for (s1,t1,s2,t2) = ({s1},{t1},{s2},{t2})"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_embedding(emb: &SubgroupEmbedding, x: &AlgebraElement, v: &GroupSubset) -> Result<()> {
    if !crate::group::same_group(x.group(), emb.sub()) {
        return Err(Error::ParentMismatch(x.group().label().into(), emb.sub().label().into()));
    }
    if !crate::group::same_group(v.parent(), emb.amb()) {
        return Err(Error::ParentMismatch(v.parent().label().into(), emb.amb().label().into()));
    }
    Ok(())
}

fn image_support(emb: &SubgroupEmbedding, x: &AlgebraElement) -> Vec<usize> {
    x.support().into_iter().map(|s| emb.apply(s)).collect()
}

/// `Φ_{p,V}(x)` as a matrix on `ℓ_2(G)`.
fn phi_matrix(emb: &SubgroupEmbedding, x: &AlgebraElement, v: &GroupSubset, p: Exponent) -> Result<DMatrix<Complex>> {
    let xg = x.push_forward(emb.amb(), emb.map()).regular_matrix();
    if p.is_infinite() {
        return Ok(xg);
    }
    let polar = polar_parts(v)?;
    Ok(xg * polar.h_power(2.0 / p.value()))
}

/// `max(0, ‖x h_V^{2/p}‖_p - ‖x‖_p)` for `p ≥ 2`; at `p = 2` the absolute
/// difference, since equality holds there.
pub fn embedding_contraction_residual(
    emb: &SubgroupEmbedding,
    x: &AlgebraElement,
    v: &GroupSubset,
    p: Exponent,
) -> Result<ResidualReport> {
    check_embedding(emb, x, v)?;
    if p.value() < 2.0 {
        return Err(Error::Precondition(format!("exponent {p} below 2")));
    }
    let f = image_support(emb, x);
    if !translates_disjoint(&f, v) {
        return Err(Error::Precondition("translates sV, s in supp x, overlap".into()));
    }
    let lhs = matrix_lp_norm(&phi_matrix(emb, x, v, p)?, p)?;
    let rhs = lp_norm(x, p)?;
    let residual = if p == Exponent::TWO { (lhs - rhs).abs() } else { (lhs - rhs).max(0.0) };
    Ok(ResidualReport::new("embedding_contraction", residual, 1e-10)
        .with("p", p)
        .with("phi_norm", lhs)
        .with("x_norm", rhs)
        .with("V", v.spec()))
}

/// The Hölder-extremal `y = |x|^{p/q} / ‖|x|^{p/q}‖_q` with `1/p + 1/q = 1/2`,
/// for which `‖xy‖_2 = ‖x‖_p ‖y‖_q`.
pub fn holder_witness(x: &AlgebraElement, p: Exponent) -> Result<AlgebraElement> {
    if p.value() <= 2.0 || p.is_infinite() {
        return Err(Error::Precondition(format!("Hölder witness needs 2 < p < ∞, got {p}")));
    }
    let q = Exponent::new(1.0 / (0.5 - p.reciprocal()))?;
    let y = AlgebraElement::from_regular_matrix(x.group(), &matrix_abs_power(&x.regular_matrix(), p.value() / q.value()))?;
    let norm = lp_norm(&y, q)?;
    if norm == 0.0 {
        return Err(Error::Precondition("x vanishes".into()));
    }
    Ok(y.scale(Complex::new(1.0 / norm, 0.0)))
}

/// `max(0, δ_F(V)^{1/2} ‖xy‖_2 / ‖y‖_q - ‖Φ_{p,V}(x)‖_p)` with `F = supp x`,
/// for `2 < p < ∞` and `1/p + 1/q = 1/2`.
pub fn embedding_lower_residual(
    emb: &SubgroupEmbedding,
    x: &AlgebraElement,
    v: &GroupSubset,
    p: Exponent,
    y: &AlgebraElement,
) -> Result<ResidualReport> {
    check_embedding(emb, x, v)?;
    x.check_same(y)?;
    if p.value() <= 2.0 || p.is_infinite() {
        return Err(Error::Precondition(format!("lower bound needs 2 < p < ∞, got {p}")));
    }
    let q = Exponent::new(1.0 / (0.5 - p.reciprocal()))?;
    let f = image_support(emb, x);
    let fy = image_support(emb, y);
    check_lower_conditions(&f, &fy, v)?;
    let fset = GroupSubset::new(emb.amb(), f.iter().copied())?;
    let delta = delta_exact(&fset, v)?;
    let y_norm = lp_norm(y, q)?;
    if y_norm == 0.0 {
        return Err(Error::Precondition("witness y vanishes".into()));
    }
    let bound = delta.value().sqrt() * x.convolve(y)?.l2() / y_norm;
    let lhs = matrix_lp_norm(&phi_matrix(emb, x, v, p)?, p)?;
    Ok(ResidualReport::new("embedding_lower", (bound - lhs).max(0.0), 1e-9)
        .with("p", p)
        .with("delta", delta.to_string())
        .with("bound", bound)
        .with("phi_norm", lhs)
        .with("V", v.spec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn setup(g: &str, gamma: &[usize]) -> (Arc<FiniteGroup>, SubgroupEmbedding) {
        let g = Arc::new(FiniteGroup::parse(g).unwrap());
        let emb = SubgroupEmbedding::from_subset(&GroupSubset::new(&g, gamma.iter().copied()).unwrap()).unwrap();
        (g, emb)
    }

    #[test]
    fn trivial_v_is_isometric() {
        let (g, emb) = setup("dihedral:4", &[0, 1, 2, 3]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = AlgebraElement::random_gaussian(emb.sub(), None, &mut rng);
        for p in [2.0, 3.0, 6.0] {
            let r = embedding_contraction_residual(&emb, &x, &GroupSubset::identity(&g), Exponent::new(p).unwrap()).unwrap();
            let ctx = |k: &str| r.context[k].as_f64().unwrap();
            assert!((ctx("phi_norm") - ctx("x_norm")).abs() < 1e-10);
        }
    }

    #[test]
    fn plancherel_equality_on_z8() {
        let (g, emb) = setup("cyclic:8", &[0, 4]);
        let v = GroupSubset::new(&g, [7, 0, 1]).unwrap();
        let x = AlgebraElement::new(emb.sub(), vec![Complex::new(0.3, -1.0), Complex::new(2.0, 0.5)]).unwrap();
        let r = embedding_contraction_residual(&emb, &x, &v, Exponent::TWO).unwrap();
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn overlapping_translates_are_rejected() {
        let (g, emb) = setup("cyclic:8", &[0, 2, 4, 6]);
        let v = GroupSubset::new(&g, [7, 0, 1]).unwrap();
        let x = AlgebraElement::delta(emb.sub(), 0).add(&AlgebraElement::delta(emb.sub(), 1)).unwrap();
        assert!(embedding_contraction_residual(&emb, &x, &v, Exponent::TWO).is_err());
    }

    #[test]
    fn holder_witness_attains_norm() {
        let (_, emb) = setup("dihedral:3", &[0, 1, 2, 3, 4, 5]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = AlgebraElement::random_gaussian(emb.sub(), None, &mut rng);
        let p = Exponent::new(4.0).unwrap();
        let y = holder_witness(&x, p).unwrap();
        let q = Exponent::new(4.0).unwrap();
        assert!((lp_norm(&y, q).unwrap() - 1.0).abs() < 1e-10);
        assert!((x.convolve(&y).unwrap().l2() - lp_norm(&x, p).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn lower_bound_in_z16() {
        let (g, emb) = setup("cyclic:16", &[0, 8]);
        let v = GroupSubset::parse(&g, "indices:14,15,0,1,2").unwrap();
        let x = AlgebraElement::new(emb.sub(), vec![Complex::new(1.0, 0.2), Complex::new(-0.4, 0.7)]).unwrap();
        let p = Exponent::new(4.0).unwrap();
        let y = holder_witness(&x, p).unwrap();
        let r = embedding_lower_residual(&emb, &x, &v, p, &y).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
