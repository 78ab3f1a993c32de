//! Operator norms of linear and bilinear multipliers.

use std::sync::Arc;

use ncmult::group::FiniteGroup;
use ncmult::lp::Exponent;
use ncmult::multiplier::{estimate_norm, OptimizerConfig, Symbol};

fn main() -> ncmult::Result<()> {
    let g = Arc::new(FiniteGroup::parse("dihedral:4")?);
    let cfg = OptimizerConfig { restarts: 24, ..Default::default() };

    let m = Symbol::family(&g, 1, "random:5")?;
    let two = estimate_norm(&m, &[Exponent::TWO], Exponent::TWO, &cfg)?;
    println!("L2:  estimate {:.12}  max|m| {:.12}  exact {}", two.value, m.sup_norm(), two.exact);
    for p in [1.5, 4.0] {
        let p = Exponent::new(p)?;
        let e = estimate_norm(&m, &[p], p, &cfg)?;
        println!("L{p}: {:.6} after {} iterations (best restart {})", e.value, e.iterations, e.best_restart);
    }

    let b = Symbol::family(&g, 2, "gaussian:1.5")?;
    let ps = [Exponent::new(3.0)?, Exponent::new(6.0)?];
    let e = estimate_norm(&b, &ps, Exponent::harmonic_sum(&ps)?, &cfg)?;
    println!("bilinear L3 × L6 → L2: {:.6}", e.value);
    Ok(())
}
