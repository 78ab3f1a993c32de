//! Points of SL(2, Z) in adjoint-norm balls and their growth exponent.

use ncmult::mc::{growth_fit, sl2z_count, sl2z_series};

fn main() -> ncmult::Result<()> {
    let radii = [100.0, 250.0, 500.0, 1000.0, 2500.0];
    let series = sl2z_series(&radii)?;
    for (r, c) in series.radii.iter().zip(&series.counts) {
        println!("ρ = {r:<6} count = {c:<8} count/ρ = {:.3}", *c as f64 / r);
    }
    println!("exponent after dividing by log ρ: {:.4} (rms {:.2e})", series.fitted_exponent, series.fit_residual);
    let (raw, res) = growth_fit(&radii, &series.counts, 0)?;
    println!("exponent without the log factor: {raw:.4} (rms {res:.2e})");
    println!("ρ → 1⁺: {}", sl2z_count(1.0 + 1e-9)?);
    Ok(())
}
