//! Bilinear Hertz–Schur transference on the cyclic group `Z_L`.
//!
//! Inputs `x, y, z ∈ C[Z_L]` are compressed to the Følner window
//! `F_α = {-α, …, α}` by `j_p(x) = |F_α|^{-1/p} P x P`, the Schur multiplier
//! `S_M(A, B)_{s,t} = Σ_r m(s - r, r - t) A_{s,r} B_{r,t}` is applied, and the
//! trace pairing `Tr(S_M(j x, j y) j(z)^*)` is compared with
//! `⟨T_M(x, y), z⟩ = Σ_{a,b} m(a, b) x(a) y(b) conj z(a + b)`.

use serde::{Deserialize, Serialize};

use super::Symbol;
use crate::algebra::AlgebraElement;
use crate::error::{invalid, Result};
use crate::lp::Exponent;
use crate::Complex;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransferenceResidual {
    pub alpha: usize,
    pub compressed: (f64, f64),
    pub direct: (f64, f64),
    pub residual: f64,
    pub relative: f64,
}

/// Compares the compressed Schur pairing with the Fourier pairing on `Z_L`.
/// The exponents only enter through `|F_α|^{-1/p_1 - 1/p_2 - 1/p'} = |F_α|^{-1}`.
pub fn hertz_schur_transference(
    m: &Symbol,
    alpha: usize,
    ps: (Exponent, Exponent),
    x: &AlgebraElement,
    y: &AlgebraElement,
    z: &AlgebraElement,
) -> Result<TransferenceResidual> {
    let g = m.group();
    let l = g.order();
    if m.arity() != 2 {
        return invalid("transference needs a bilinear symbol");
    }
    if alpha == 0 || 4 * alpha > l {
        return invalid(format!("Følner radius {alpha} must satisfy 1 ≤ α ≤ L/4 = {}", l / 4));
    }
    if !g.label().starts_with("cyclic:") {
        return invalid("transference is implemented on cyclic groups");
    }
    m.check_args(&[x, y])?;
    m.check_args(&[z, z])?;
    let out_exp = Exponent::harmonic_sum(&[ps.0, ps.1])?;
    let scale = (2 * alpha + 1) as f64;
    let weight = scale.powf(-ps.0.reciprocal() - ps.1.reciprocal() - out_exp.conjugate().reciprocal());

    let md = |a: i64, b: i64| m.get(&[a.rem_euclid(l as i64) as usize, b.rem_euclid(l as i64) as usize]);
    let at = |f: &AlgebraElement, a: i64| f.coeffs()[a.rem_euclid(l as i64) as usize];
    let sx = signed_support(x, l);
    let sy = signed_support(y, l);
    let a = alpha as i64;

    let mut compressed = Complex::new(0.0, 0.0);
    for s in -a..=a {
        for &dx in &sx {
            let r = s - dx;
            if r < -a || r > a {
                continue;
            }
            for &dy in &sy {
                let t = r - dy;
                if t < -a || t > a {
                    continue;
                }
                compressed += md(dx, dy) * at(x, dx) * at(y, dy) * at(z, s - t).conj();
            }
        }
    }
    compressed *= weight;

    let mut direct = Complex::new(0.0, 0.0);
    for &dx in &sx {
        for &dy in &sy {
            direct += md(dx, dy) * at(x, dx) * at(y, dy) * at(z, dx + dy).conj();
        }
    }
    let residual = (compressed - direct).norm();
    let relative = if direct.norm() > 0.0 { residual / direct.norm() } else { residual };
    Ok(TransferenceResidual {
        alpha,
        compressed: (compressed.re, compressed.im),
        direct: (direct.re, direct.im),
        residual,
        relative,
    })
}

/// Support as signed offsets in `(-L/2, L/2]`.
fn signed_support(f: &AlgebraElement, l: usize) -> Vec<i64> {
    f.support()
        .into_iter()
        .map(|k| if 2 * k > l { k as i64 - l as i64 } else { k as i64 })
        .collect()
}
