//! Haar density in exponential coordinates on sl(2), sl(3) and the Heisenberg algebra.

use ncmult::lie::{build_model, exp_density, exp_density_eigen, exp_density_series, AlgebraVector};

fn main() -> ncmult::Result<()> {
    let sl2 = build_model("sl:2")?;
    for t in [0.1f64, 0.5, 1.0, 2.0] {
        let x = AlgebraVector::basis_vector(&sl2, 0).scale(t);
        println!(
            "sl:2, x = {t}·H: series {:.12}  eigen {:.12}  (sinh t / t)² {:.12}",
            exp_density_series(&x, 40),
            exp_density_eigen(&x),
            (t.sinh() / t).powi(2)
        );
    }
    let rot = AlgebraVector::new(&sl2, vec![0.0, 1.0, -1.0])?;
    println!("sl:2, compact direction: ν = {:.12} ((sin 1)² = {:.12})", exp_density(&rot, 40), 1f64.sin().powi(2));

    let sl3 = build_model("sl:3")?;
    let x = AlgebraVector::new(&sl3, vec![0.3, -0.2, 0.1, 0.4, -0.3, 0.2, 0.1, -0.1])?;
    println!("sl:3: series {:.12}  eigen {:.12}", exp_density_series(&x, 40), exp_density_eigen(&x));

    let h = build_model("heisenberg3")?;
    let x = AlgebraVector::new(&h, vec![3.0, -2.0, 5.0])?;
    println!("heisenberg3: ν = {}", exp_density(&x, 40));
    Ok(())
}
