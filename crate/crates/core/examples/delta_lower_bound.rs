//! δ_F(exp(V_{ε,R})) for random F ⊂ B_ρ in SL(2, R) against the bound 1/ρ.

use ncmult::mc::{theorem_b_consistency, McConfig};

fn main() -> ncmult::Result<()> {
    let cfg = McConfig::new(20_000, 0)?;
    for rho in [2.0, 4.0] {
        for seed in 0..3 {
            let t = std::time::Instant::now();
            let r = theorem_b_consistency(rho, 3, &[0.1, 0.05, 0.025], 0.5, &McConfig { seed, ..cfg })?;
            println!("ρ = {rho}, seed {seed}, ‖Ad_s‖ = {:.3?}", r.adjoint_norms);
            for (eps, est) in &r.rows {
                println!("  ε = {eps:<6} δ = {:.4} ± {:.4}", est.mean, est.stderr);
            }
            println!("  bound {:.4}, pass {} ({:.1?})", r.bound, r.pass, t.elapsed());
        }
    }
    Ok(())
}
