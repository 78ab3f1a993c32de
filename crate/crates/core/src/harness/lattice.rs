//! Lattice approximation maps for a subgroup `Γ ≤ G` with fundamental domain
//! `X` (`G = ⨆_{γ ∈ Γ} γ X`) and `h = λ(1_X)`:
//!
//! * `Φ^{(p)}(x) = |X|^{-2+1/p} h^* x h`, from `L_p(Γ̂)` to `L_p(Ĝ)`;
//! * `Ψ^{(p)}(x) = |X|^{-1-1/p} Σ_γ τ(h^* λ(γ^{-1}) h x) λ(γ)`, back again;
//! * `S(x_1, …, x_n) = Φ^{(p)} T_{m|_Γ}(Ψ^{(p_1)} x_1, …, Ψ^{(p_n)} x_n)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ResidualReport;
use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::group::{same_group, GroupSubset, SubgroupEmbedding};
use crate::lp::{dual_pairing, lp_norm, Exponent};
use crate::multiplier::Symbol;
use crate::Complex;

#[derive(Clone, Debug)]
pub struct FundamentalDomain {
    emb: SubgroupEmbedding,
    x: GroupSubset,
    indicator: AlgebraElement,
    indicator_star: AlgebraElement,
}

impl FundamentalDomain {
    /// Validates that `γ x`, `γ ∈ Γ`, `x ∈ X`, hits every element exactly once.
    pub fn new(gamma: &GroupSubset, x: &GroupSubset) -> Result<Self> {
        if !same_group(gamma.parent(), x.parent()) {
            return Err(Error::ParentMismatch(gamma.parent().label().into(), x.parent().label().into()));
        }
        if !gamma.is_subgroup() {
            return Err(Error::Precondition(format!("{} is not a subgroup", gamma.spec())));
        }
        let g = gamma.parent();
        let mut hit = vec![false; g.order()];
        for &c in gamma.members() {
            for &d in x.members() {
                let y = g.mul(c, d);
                if hit[y] {
                    return Err(Error::Precondition(format!("translates of X overlap at element {y}")));
                }
                hit[y] = true;
            }
        }
        if hit.iter().any(|&b| !b) {
            return Err(Error::Precondition("translates of X do not cover the group".into()));
        }
        let emb = SubgroupEmbedding::from_subset(gamma)?;
        let indicator = AlgebraElement::indicator(x);
        let indicator_star = indicator.involution();
        Ok(Self { emb, x: x.clone(), indicator, indicator_star })
    }

    /// `Γ_k = k Z_N` with `X = {0, …, k-1}` in the cyclic group `Z_N`.
    pub fn cyclic_step(g: &std::sync::Arc<crate::group::FiniteGroup>, step: usize) -> Result<Self> {
        if step == 0 || g.order() % step != 0 {
            return Err(Error::Invalid(format!("step {step} does not divide {}", g.order())));
        }
        let gamma = GroupSubset::new(g, (0..g.order()).step_by(step))?;
        Self::new(&gamma, &GroupSubset::new(g, 0..step)?)
    }

    pub fn embedding(&self) -> &SubgroupEmbedding {
        &self.emb
    }

    pub fn domain(&self) -> &GroupSubset {
        &self.x
    }

    fn size(&self) -> f64 {
        self.x.len() as f64
    }
}

pub fn phi_map(fd: &FundamentalDomain, x: &AlgebraElement, p: Exponent) -> Result<AlgebraElement> {
    let emb = &fd.emb;
    if !same_group(x.group(), emb.sub()) {
        return Err(Error::ParentMismatch(x.group().label().into(), emb.sub().label().into()));
    }
    let lifted = x.push_forward(emb.amb(), emb.map());
    let out = fd.indicator_star.convolve(&lifted)?.convolve(&fd.indicator)?;
    Ok(out.scale(Complex::new(fd.size().powf(-2.0 + p.reciprocal()), 0.0)))
}

pub fn psi_map(fd: &FundamentalDomain, x: &AlgebraElement, p: Exponent) -> Result<AlgebraElement> {
    let emb = &fd.emb;
    if !same_group(x.group(), emb.amb()) {
        return Err(Error::ParentMismatch(x.group().label().into(), emb.amb().label().into()));
    }
    let sandwich = fd.indicator.convolve(x)?.convolve(&fd.indicator_star)?;
    let scale = fd.size().powf(-1.0 - p.reciprocal());
    let coeffs = emb.map().iter().map(|&g| sandwich.coeffs()[g] * scale).collect();
    AlgebraElement::new(emb.sub(), coeffs)
}

/// `S(x_1, …, x_n)` on `G`.
pub fn lattice_approximant(fd: &FundamentalDomain, m: &Symbol, xs: &[&AlgebraElement], ps: &[Exponent]) -> Result<AlgebraElement> {
    if ps.len() != m.arity() || xs.len() != m.arity() {
        return Err(Error::Arity { expected: m.arity(), got: ps.len().min(xs.len()) });
    }
    let p = Exponent::harmonic_sum(ps)?;
    let restricted = m.restrict(&fd.emb)?;
    let pulled: Vec<AlgebraElement> = xs.iter().zip(ps).map(|(x, &pi)| psi_map(fd, x, pi)).collect::<Result<_>>()?;
    let refs: Vec<_> = pulled.iter().collect();
    phi_map(fd, &restricted.apply(&refs)?, p)
}

/// `|⟨y, S(x)⟩ - ⟨y, T_m(x)⟩|` with the bilinear pairing `Σ_s y(s) f(s)`.
pub fn lattice_pairing_deviation(
    fd: &FundamentalDomain,
    m: &Symbol,
    xs: &[&AlgebraElement],
    y: &AlgebraElement,
    ps: &[Exponent],
) -> Result<f64> {
    let approx = lattice_approximant(fd, m, xs, ps)?;
    let exact = m.apply(xs)?;
    Ok((dual_pairing(y, &approx)? - dual_pairing(y, &exact)?).norm())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeReport {
    /// `max(0, ‖Φ^{(p)} x‖_p - ‖x‖_p)` over random inputs and every exponent.
    pub phi: ResidualReport,
    /// `max(0, ‖Ψ^{(p)} x‖_p - ‖x‖_p)` likewise.
    pub psi: ResidualReport,
    /// Pairing deviation of `S` against `T_m` for the last random trial.
    pub pairing_deviation: f64,
}

impl LatticeReport {
    pub fn pass(&self) -> bool {
        self.phi.pass && self.psi.pass
    }
}

/// Contraction residuals of `Φ^{(p)}` and `Ψ^{(p)}` at the input exponents
/// and their harmonic sum, plus one pairing deviation.
pub fn lattice_maps_report<R: Rng + ?Sized>(
    fd: &FundamentalDomain,
    m: &Symbol,
    ps: &[Exponent],
    trials: usize,
    rng: &mut R,
) -> Result<LatticeReport> {
    if ps.len() != m.arity() {
        return Err(Error::Arity { expected: m.arity(), got: ps.len() });
    }
    let mut exps = ps.to_vec();
    exps.push(Exponent::harmonic_sum(ps)?);
    let (g, sub) = (fd.emb.amb().clone(), fd.emb.sub().clone());
    let (mut phi, mut psi, mut pairing) = (0.0f64, 0.0f64, 0.0);
    for _ in 0..trials {
        for &p in &exps {
            let x = AlgebraElement::random_gaussian(&sub, None, rng);
            phi = phi.max(lp_norm(&phi_map(fd, &x, p)?, p)? - lp_norm(&x, p)?);
            let z = AlgebraElement::random_gaussian(&g, None, rng);
            psi = psi.max(lp_norm(&psi_map(fd, &z, p)?, p)? - lp_norm(&z, p)?);
        }
        let xs: Vec<AlgebraElement> = (0..m.arity()).map(|_| AlgebraElement::random_gaussian(&g, None, rng)).collect();
        let y = AlgebraElement::random_gaussian(&g, None, rng);
        let refs: Vec<_> = xs.iter().collect();
        pairing = lattice_pairing_deviation(fd, m, &refs, &y, ps)?;
    }
    let ctx = |r: ResidualReport| r.with("domain", fd.x.spec()).with("lattice", fd.emb.sub().label()).with("trials", trials);
    Ok(LatticeReport {
        phi: ctx(ResidualReport::new("lattice_phi_contraction", phi.max(0.0), 1e-9)),
        psi: ctx(ResidualReport::new("lattice_psi_contraction", psi.max(0.0), 1e-9)),
        pairing_deviation: pairing,
    })
}

/// Pairing deviations along a refining family of lattices; the residual is the
/// largest increase between consecutive members, so it vanishes exactly when
/// the deviations are nonincreasing.
pub fn lattice_refinement_report(
    family: &[FundamentalDomain],
    m: &Symbol,
    xs: &[&AlgebraElement],
    y: &AlgebraElement,
    ps: &[Exponent],
) -> Result<ResidualReport> {
    let devs: Vec<f64> = family
        .iter()
        .map(|fd| lattice_pairing_deviation(fd, m, xs, y, ps))
        .collect::<Result<_>>()?;
    let worst = devs.windows(2).map(|w| w[1] - w[0]).fold(0.0f64, f64::max);
    let sizes: Vec<usize> = family.iter().map(|fd| fd.emb.sub().order()).collect();
    Ok(ResidualReport::new("lattice_refinement", worst, 1e-12)
        .with("deviations", &devs)
        .with("lattice_orders", sizes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn whole_group_maps_are_identities() {
        let g = Arc::new(FiniteGroup::parse("dihedral:3").unwrap());
        let fd = FundamentalDomain::new(&GroupSubset::whole(&g), &GroupSubset::identity(&g)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = AlgebraElement::random_gaussian(fd.embedding().sub(), None, &mut rng);
        let p = Exponent::new(3.0).unwrap();
        assert!(phi_map(&fd, &x, p).unwrap().coeffs().iter().zip(x.coeffs()).all(|(a, b)| (a - b).norm() < 1e-14));
        let x = AlgebraElement::random_gaussian(&g, None, &mut rng);
        assert!(psi_map(&fd, &x, p).unwrap().coeffs().iter().zip(x.coeffs()).all(|(a, b)| (a - b).norm() < 1e-14));
        let m = Symbol::family(&g, 2, "random:1").unwrap();
        let r = lattice_maps_report(&fd, &m, &[p, p], 3, &mut rng).unwrap();
        assert!(r.pass() && r.pairing_deviation < 1e-12);
    }

    #[test]
    fn z8_contractions() {
        let g = Arc::new(FiniteGroup::parse("cyclic:8").unwrap());
        let fd = FundamentalDomain::cyclic_step(&g, 4).unwrap();
        let m = Symbol::family(&g, 1, "gaussian:2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [1.0, 1.5, 2.0, 4.0] {
            let r = lattice_maps_report(&fd, &m, &[Exponent::new(p).unwrap()], 10, &mut rng).unwrap();
            assert!(r.phi.residual <= 1e-10 && r.psi.residual <= 1e-10, "{r:?}");
        }
    }

    #[test]
    fn invalid_domains() {
        let g = Arc::new(FiniteGroup::parse("cyclic:8").unwrap());
        let gamma = GroupSubset::new(&g, [0, 4]).unwrap();
        assert!(FundamentalDomain::new(&gamma, &GroupSubset::new(&g, [0, 1, 2]).unwrap()).is_err());
        assert!(FundamentalDomain::new(&gamma, &GroupSubset::new(&g, [0, 1, 2, 4]).unwrap()).is_err());
        assert!(FundamentalDomain::new(&GroupSubset::new(&g, [0, 3]).unwrap(), &GroupSubset::new(&g, [0, 1, 2, 3]).unwrap()).is_err());
    }
}
