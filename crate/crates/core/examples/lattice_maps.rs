//! Lattice maps on Z_64 and the pairing deviation under refinement.

use std::sync::Arc;

use ncmult::algebra::AlgebraElement;
use ncmult::group::FiniteGroup;
use ncmult::harness::{lattice_maps_report, lattice_pairing_deviation, FundamentalDomain};
use ncmult::lp::Exponent;
use ncmult::multiplier::Symbol;
use ncmult::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bump(g: &Arc<FiniteGroup>, c: usize, width: f64) -> ncmult::Result<AlgebraElement> {
    let n = g.order();
    let coeffs = (0..n)
        .map(|k| {
            let d = ((k + n - c) % n).min((c + n - k) % n) as f64;
            Complex::new((-d * d / (2.0 * width * width)).exp(), 0.0)
        })
        .collect();
    AlgebraElement::new(g, coeffs)
}

fn main() -> ncmult::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = Arc::new(FiniteGroup::parse("cyclic:64")?);
    let m = Symbol::family(&g, 2, "gaussian:6")?;
    let ps = [Exponent::new(3.0)?, Exponent::new(6.0)?];
    let (x1, x2, y) = (bump(&g, 3, 4.0)?, bump(&g, 60, 3.0)?, bump(&g, 0, 6.0)?);
    for step in [8, 4, 2, 1] {
        let fd = FundamentalDomain::cyclic_step(&g, step)?;
        let r = lattice_maps_report(&fd, &m, &ps, 3, &mut rng)?;
        let dev = lattice_pairing_deviation(&fd, &m, &[&x1, &x2], &y, &ps)?;
        println!(
            "step {step}: lattice of order {:>2}, Φ {:.1e}, Ψ {:.1e}, pairing deviation {dev:.4e}",
            fd.embedding().sub().order(),
            r.phi.residual,
            r.psi.residual
        );
    }
    Ok(())
}
