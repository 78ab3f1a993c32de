//! Periodizing a quotient multiplier along a finite normal subgroup.

use std::sync::Arc;

use ncmult::group::{FiniteGroup, GroupSubset, Quotient};
use ncmult::harness::periodization_residual;
use ncmult::lp::Exponent;
use ncmult::multiplier::Symbol;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ncmult::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for (g, h) in [("cyclic:12", "indices:0,4,8"), ("dihedral:4", "indices:0,2"), ("dihedral:3", "indices:0,1,2")] {
        let g = Arc::new(FiniteGroup::parse(g)?);
        let q = Quotient::new(&GroupSubset::parse(&g, h)?)?;
        let ps = [Exponent::new(3.0)?, Exponent::new(6.0)?];
        let m = Symbol::family(q.group(), 2, "random:10")?;
        let r = periodization_residual(&q, &m, &ps, 10, &mut rng)?;
        println!(
            "{:<28} intertwining {:.1e}  isometry {:.1e}  trace {:.1e}",
            q.group().label(),
            r.intertwining.residual,
            r.isometry.residual,
            r.trace.residual
        );
    }
    Ok(())
}
