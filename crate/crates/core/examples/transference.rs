//! Compressed Schur pairings on Z_256 approach the Fourier pairing as α grows.

use std::sync::Arc;

use ncmult::algebra::AlgebraElement;
use ncmult::group::FiniteGroup;
use ncmult::lp::Exponent;
use ncmult::multiplier::{hertz_schur_transference, Symbol};
use ncmult::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> ncmult::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let g = Arc::new(FiniteGroup::parse("cyclic:256")?);
    let m = Symbol::family(&g, 2, "random:13")?;
    let mut draw = || {
        let mut c = vec![Complex::new(0.0, 0.0); 256];
        for k in 0..=8 {
            c[(k + 252) % 256] = Complex::new(rng.gen_range(0.0..1.0), 0.0);
        }
        AlgebraElement::new(&g, c)
    };
    let (x, y, z) = (draw()?, draw()?, draw()?);
    let ps = (Exponent::new(3.0)?, Exponent::new(3.0)?);
    for alpha in [4, 8, 16, 32, 64] {
        let r = hertz_schur_transference(&m, alpha, ps, &x, &y, &z)?;
        println!("α = {alpha:>2}: compressed {:.5?}  direct {:.5?}  relative {:.4}", r.compressed, r.direct, r.relative);
    }
    Ok(())
}
