//! The local embedding Φ_{p,V}: contraction for p ≥ 2 and the δ-weighted lower bound.

use std::sync::Arc;

use ncmult::algebra::AlgebraElement;
use ncmult::group::{FiniteGroup, GroupSubset, SubgroupEmbedding};
use ncmult::harness::{embedding_contraction_residual, embedding_lower_residual, holder_witness};
use ncmult::lp::Exponent;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ncmult::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let z16 = Arc::new(FiniteGroup::parse("cyclic:16")?);
    let emb = SubgroupEmbedding::from_subset(&GroupSubset::parse(&z16, "indices:0,8")?)?;
    let v = GroupSubset::parse(&z16, "indices:14,15,0,1,2")?;
    let x = AlgebraElement::random_gaussian(emb.sub(), None, &mut rng);
    for p in [2.0, 3.0, 6.0] {
        let r = embedding_contraction_residual(&emb, &x, &v, Exponent::new(p)?)?;
        println!("p = {p}: ‖Φx‖ = {:.6}, ‖x‖ = {:.6}", r.context["phi_norm"], r.context["x_norm"]);
    }
    let p = Exponent::new(4.0)?;
    let r = embedding_lower_residual(&emb, &x, &v, p, &holder_witness(&x, p)?)?;
    println!("lower bound: residual {:.2e}, δ = {}", r.residual, r.context["delta"]);

    let d12 = Arc::new(FiniteGroup::parse("dihedral:12")?);
    let emb = SubgroupEmbedding::from_subset(&GroupSubset::parse(&d12, "indices:0,12")?)?;
    let x = AlgebraElement::random_gaussian(emb.sub(), None, &mut rng);
    let v = GroupSubset::parse(&d12, "indices:0,13")?;
    let r = embedding_lower_residual(&emb, &x, &v, p, &holder_witness(&x, p)?)?;
    println!("D12 with V = {}: δ = {}, bound {:.6}", v.spec(), r.context["delta"], r.context["bound"]);
    Ok(())
}
