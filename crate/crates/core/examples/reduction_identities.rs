//! Consummation, translation and nesting of multilinear symbols.

use std::sync::Arc;

use ncmult::group::FiniteGroup;
use ncmult::lp::Exponent;
use ncmult::multiplier::{
    consummation_residual, estimate_norm, nested_residual, translation_norm_transport, translation_residual,
    OptimizerConfig, Symbol,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ncmult::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let g = Arc::new(FiniteGroup::parse("dihedral:3")?);

    let m = Symbol::family(&g, 2, "random:1")?;
    println!("consummation [1, 3] of 4: {:.2e}", consummation_residual(&m, &[1, 3], 4, 10, &mut rng)?);

    let m3 = Symbol::family(&g, 3, "random:2")?;
    println!("translation i=2:          {:.2e}", translation_residual(&m3, 2, 1, 4, 5, 10, &mut rng)?);

    let ms = [Symbol::family(&g, 1, "random:3")?, Symbol::family(&g, 1, "random:4")?];
    println!("nested pair:              {:.2e}", nested_residual(&ms, 10, &mut rng)?);

    let ps = [Exponent::new(4.0)?, Exponent::new(4.0)?];
    let cfg = OptimizerConfig { restarts: 8, ..Default::default() };
    let p = Exponent::harmonic_sum(&ps)?;
    let est = estimate_norm(&m, &ps, p, &cfg)?;
    let r = translation_norm_transport(&m, 1, 2, 3, 1, &ps, p, &est)?;
    println!("norm {:.6}; translated witness residual {r:.2e}", est.value);
    Ok(())
}
