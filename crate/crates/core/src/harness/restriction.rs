//! Restriction of multipliers to subgroups: the norm of `T_{m|_H}` never
//! exceeds that of `T_m` when `H ≤ G` are finite.

use serde::{Deserialize, Serialize};

use super::ResidualReport;
use crate::error::{Error, Result};
use crate::group::SubgroupEmbedding;
use crate::lp::Exponent;
use crate::multiplier::{estimate_norm, estimate_norm_seeded, multiplier_ratio, NormEstimate, OptimizerConfig, Symbol};

/// Largest ambient order for which the optimiser is trusted here.
pub const MAX_RESTRICTION_ORDER: usize = 64;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RestrictionReport {
    /// `|ratio_G(ι x_H) - value_H|` for the transported witness, tolerance `1e-9`.
    pub transport: ResidualReport,
    /// `max(0, value_H - value_G)`, tolerance `1e-6`.
    pub restriction: ResidualReport,
    pub sub_estimate: NormEstimate,
    pub amb_estimate: NormEstimate,
}

impl RestrictionReport {
    pub fn pass(&self) -> bool {
        self.transport.pass && self.restriction.pass
    }
}

/// Estimates `‖T_{m|_H}‖` on `H`, pushes its witness into `G`, and estimates
/// `‖T_m‖` on `G` starting from the transported witness plus `cfg.restarts`
/// random starts. `ps` are the input exponents; the output exponent is their
/// harmonic sum.
pub fn restriction_consistency(
    emb: &SubgroupEmbedding,
    m: &Symbol,
    ps: &[Exponent],
    cfg: &OptimizerConfig,
) -> Result<RestrictionReport> {
    if emb.amb().order() > MAX_RESTRICTION_ORDER {
        return Err(Error::Precondition(format!(
            "ambient order {} exceeds {MAX_RESTRICTION_ORDER}",
            emb.amb().order()
        )));
    }
    let p = Exponent::harmonic_sum(ps)?;
    let restricted = m.restrict(emb)?;
    let sub_estimate = estimate_norm(&restricted, ps, p, cfg)?;
    let transported: Vec<_> = sub_estimate
        .witness_elements(&restricted)?
        .iter()
        .map(|x| x.push_forward(emb.amb(), emb.map()))
        .collect();
    let refs: Vec<_> = transported.iter().collect();
    let ratio = multiplier_ratio(m, &refs, ps, p)?;
    let transport = ResidualReport::new("witness_transport", (ratio - sub_estimate.value).abs(), 1e-9)
        .with("sub_value", sub_estimate.value)
        .with("transported_ratio", ratio);
    let amb_estimate = estimate_norm_seeded(m, ps, p, cfg, &[transported])?;
    let restriction = ResidualReport::new("restriction", (sub_estimate.value - amb_estimate.value).max(0.0), 1e-6)
        .with("sub", emb.sub().label())
        .with("amb", emb.amb().label())
        .with("sub_value", sub_estimate.value)
        .with("amb_value", amb_estimate.value)
        .with("p", p);
    Ok(RestrictionReport { transport, restriction, sub_estimate, amb_estimate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroup, GroupSubset};
    use crate::Complex;
    use std::sync::Arc;

    #[test]
    fn whole_group_and_constant_symbol() {
        let g = Arc::new(FiniteGroup::parse("dihedral:3").unwrap());
        let cfg = OptimizerConfig { restarts: 4, ..Default::default() };
        let p = [Exponent::new(3.0).unwrap()];
        let m = Symbol::family(&g, 1, "random:5").unwrap();
        let r = restriction_consistency(&SubgroupEmbedding::identity(&g), &m, &p, &cfg).unwrap();
        assert!(r.pass() && r.restriction.residual == 0.0);
        let one = Symbol::constant(&g, 1, Complex::new(1.0, 0.0)).unwrap();
        let emb = SubgroupEmbedding::from_subset(&GroupSubset::new(&g, [0, 1, 2]).unwrap()).unwrap();
        let r = restriction_consistency(&emb, &one, &p, &cfg).unwrap();
        assert!((r.sub_estimate.value - 1.0).abs() < 1e-9 && (r.amb_estimate.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn large_ambient_rejected() {
        let g = Arc::new(FiniteGroup::parse("cyclic:65").unwrap());
        let m = Symbol::family(&g, 1, "random:1").unwrap();
        let cfg = OptimizerConfig::default();
        assert!(restriction_consistency(&SubgroupEmbedding::identity(&g), &m, &[Exponent::TWO], &cfg).is_err());
    }
}
