//! Nilpotent orbit dimensions, minimal orbit norms and adjoint balls.

use nalgebra::DMatrix;
use ncmult::lie::{
    adjoint_norm, ball_checks, build_model, kak_log_profile, max_nilpotent_dim, nilpotent_orbit_dim, orbit_min_norm,
    AlgebraVector, GroupMatrix, OrbitMethod,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ncmult::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 2..=5 {
        let m = build_model(&format!("sl:{n}"))?;
        let r = max_nilpotent_dim(&m, 50, &mut rng)?;
        println!("sl:{n}: maximal nilpotent orbit dimension {:?}", r.d);
    }

    let sl3 = build_model("sl:3")?;
    let e12 = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    println!("minimal nilpotent in sl:3 has orbit dimension {}", nilpotent_orbit_dim(&AlgebraVector::from_matrix(&sl3, &e12)?)?);

    let sl2 = build_model("sl:2")?;
    let x = AlgebraVector::new(&sl2, vec![0.2, 1.0, 0.1])?;
    let closed = orbit_min_norm(&x, OrbitMethod::ClosedForm)?;
    let descent = orbit_min_norm(&x, OrbitMethod::default())?;
    println!("orbit minimal norm: closed form {:.8}, descent {:.8}", closed.value, descent.value);

    let g = GroupMatrix::new(&sl2, DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 0.5]))?;
    let b = ball_checks(&g, 10.0, 20, &mut rng)?;
    println!(
        "‖Ad_g‖ = {:.6}, in B_10 {}, KAK roots {:.6}, inversion {:.1e}",
        adjoint_norm(&g)?,
        b.member,
        kak_log_profile(&g)?.max_root.exp(),
        b.inversion_residual
    );
    Ok(())
}
