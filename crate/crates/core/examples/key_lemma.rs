//! Volume ratios of nilpotent-cone tubes in sl(2) under dilation by ρ.

use ncmult::mc::{key_lemma_schedule, McConfig};

fn main() -> ncmult::Result<()> {
    let cfg = McConfig::new(1_000_000, 42)?;
    for rho in [1.0, 2.0, 4.0] {
        let s = key_lemma_schedule(&[0.1, 0.05, 0.025], 0.5, rho, &cfg)?;
        for r in &s.rows {
            println!("ρ = {rho}, ε = {:<6} ratio {:.4} ± {:.4} (limit {})", r.eps, r.ratio, r.stderr, r.expected);
        }
        println!("  extrapolated {:.4?}, monotone {}", s.extrapolated, s.monotone_approach());
    }
    Ok(())
}
