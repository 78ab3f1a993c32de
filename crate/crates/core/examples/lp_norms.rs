//! Normalised Schatten norms on group algebras.

use std::sync::Arc;

use ncmult::algebra::AlgebraElement;
use ncmult::group::{FiniteGroup, GroupSubset};
use ncmult::lp::{lp_norm, polar_parts, Exponent};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ncmult::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = Arc::new(FiniteGroup::parse("dihedral:5")?);
    let x = AlgebraElement::random_gaussian(&g, None, &mut rng);
    println!("random x on {}:", g.label());
    for p in ["1", "1.5", "2", "4", "inf"] {
        let p: Exponent = p.parse()?;
        println!("  ‖x‖_{p:<4} = {:.6}", lp_norm(&x, p)?);
    }
    println!("  ℓ² of coefficients = {:.6} (equals ‖x‖_2)", x.l2());

    let v = GroupSubset::ball(&g, 1)?;
    let polar = polar_parts(&v)?;
    println!("\npolar parts of 1_V for V = {}: rank of k_V = {}", v.spec(), polar.rank());
    Ok(())
}
