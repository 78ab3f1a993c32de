//! Exact δ_F(V), its Gram matrix and a Monte Carlo estimate of the same value.

use std::sync::Arc;

use ncmult::group::{FiniteGroup, GroupSubset};
use ncmult::harness::{delta_exact, gram_matrix};
use ncmult::mc::{delta_mc, FiniteDeltaBackend, McConfig};

fn main() -> ncmult::Result<()> {
    let g = Arc::new(FiniteGroup::parse("dihedral:6")?);
    let f = GroupSubset::parse(&g, "indices:6")?;
    let v = GroupSubset::parse(&g, "indices:0,1,5,7")?;
    let d = delta_exact(&f, &v)?;
    let gm = gram_matrix(&f, &v)?;
    println!("D6, F = {}, V = {}: δ = {d}", f.spec(), v.spec());
    println!("Gram matrix:\n{}", gm.a);
    println!("λ_min(A) = {:.3}, λ_min(A - δI) = {:.3}", gm.min_eigenvalue, gm.min_eigenvalue_shifted);

    let est = delta_mc(&FiniteDeltaBackend::new(&f, &v)?, &McConfig::new(100_000, 7)?)?;
    println!("Monte Carlo: {:.4} ± {:.4}", est.mean, est.stderr);

    let h = Arc::new(FiniteGroup::parse("heisenberg:3")?);
    for k in 0..=2 {
        let v = GroupSubset::ball(&h, k)?;
        let f = GroupSubset::ball(&h, 1)?;
        println!("heisenberg:3, F = ball 1, V = ball {k} (|V| = {:>2}): δ = {}", v.len(), delta_exact(&f, &v)?);
    }
    Ok(())
}
