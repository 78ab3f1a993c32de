//! Acceptance criteria with pinned seeds, plus independent oracles.
//!
//! Prints one `PASS`/`FAIL` line per criterion, then one `ORACLE` line per
//! cross-check computed without the library routine under test. Criteria in
//! `KNOWN_FAILING` are reported but do not fail the run; any other failure,
//! or a known failure that starts passing, exits with status 1.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use ncmult::algebra::AlgebraElement;
use ncmult::group::{FiniteGroup, GroupSubset};
use ncmult::harness::delta_exact;
use ncmult::lie::{build_model, exp_density, regular_nilpotent, AlgebraVector};
use ncmult::lp::Exponent;
use ncmult::mc::{key_lemma_ratio, sl2z_count, theorem_b_consistency, McConfig};
use ncmult::multiplier::{multiplier_ratio, Symbol};
use ncmult::suite::{self, CRITERIA};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Lattice-point growth: the true count is linear in ρ, so the prescribed
/// log-corrected exponent lands just below its window.
const KNOWN_FAILING: &[usize] = &[12];

struct Oracle {
    name: &'static str,
    detail: String,
    pass: bool,
}

fn oracle(name: &'static str, f: impl FnOnce() -> ncmult::Result<(String, bool)>) -> Oracle {
    match f() {
        Ok((detail, pass)) => Oracle { name, detail, pass },
        Err(e) => Oracle { name, detail: format!("error: {e}"), pass: false },
    }
}

/// Orbit dimension of the regular nilpotent as the rank of `ad_e` on
/// `n × n` traceless matrices, built from commutators of elementary matrices.
fn regular_orbit_rank(n: usize) -> ncmult::Result<(usize, usize)> {
    let model = build_model(&format!("sl:{n}"))?;
    let e = regular_nilpotent(&model).matrix();
    let mut cols = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j && i == n - 1 {
                continue;
            }
            let mut b = DMatrix::<f64>::zeros(n, n);
            if i == j {
                b[(i, i)] = 1.0;
                b[(i + 1, i + 1)] = -1.0;
            } else {
                b[(i, j)] = 1.0;
            }
            let c = &e * &b - &b * &e;
            cols.push(c.iter().copied().collect::<Vec<_>>());
        }
    }
    let m = DMatrix::from_fn(n * n, cols.len(), |r, c| cols[c][r]);
    Ok((m.rank(1e-9), n * (n - 1)))
}

fn tube_volume(eps: f64, r: f64) -> f64 {
    let v1 = ((r * r - eps * eps) / 2.0).sqrt();
    let v2 = ((r * r + eps * eps) / 2.0).sqrt();
    2.0 * PI
        * (4.0 * eps.powi(3) / 3.0 + 2.0 * eps * eps * (v1 - eps) + (4.0 / 3.0) * v2.powi(3) - 2.0 * v2 * v2 * v1
            + (2.0 / 3.0) * v1.powi(3))
}

/// `|V ∩ ⋂ s V s^{-1}| / |V|` straight from the multiplication table.
fn brute_delta(g: &FiniteGroup, f: &[usize], v: &[usize]) -> f64 {
    let inv = |a: usize| (0..g.order()).find(|&b| g.mul(a, b) == g.identity()).unwrap();
    let hits = v
        .iter()
        .filter(|&&x| f.iter().all(|&s| v.contains(&g.mul(g.mul(inv(s), x), s))))
        .count();
    hits as f64 / v.len() as f64
}

fn brute_count(rho: f64) -> u64 {
    let bound = (rho + 1.0 / rho + 1e-9).floor() as i64;
    let e = (bound as f64).sqrt() as i64;
    let mut n = 0;
    for a in -e..=e {
        for b in -e..=e {
            for c in -e..=e {
                let rest = bound - a * a - b * b - c * c;
                if rest < 0 {
                    continue;
                }
                let d_max = (rest as f64).sqrt() as i64;
                for d in -d_max..=d_max {
                    if a * d - b * c == 1 {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

fn oracles() -> Vec<Oracle> {
    vec![
        oracle("orbit dimension as rank of ad on the regular nilpotent", || {
            let dims = (2..=5).map(regular_orbit_rank).collect::<ncmult::Result<Vec<_>>>()?;
            Ok((format!("{dims:?}"), dims.iter().all(|(a, b)| a == b)))
        }),
        oracle("tube volume ratios against the closed form", || {
            let cfg = McConfig::new(2_000_000, 7)?;
            let mut worst = 0.0f64;
            let mut parts = Vec::new();
            for rho in [2.0, 4.0] {
                for eps in [0.1, 0.05] {
                    let exact = tube_volume(eps, rho * 0.5) / tube_volume(eps, 0.5);
                    let k = key_lemma_ratio(eps, 0.5, rho, &cfg)?;
                    let z = (k.ratio - exact).abs() / k.stderr;
                    worst = worst.max(z);
                    parts.push(format!("{:.3}/{exact:.3}", k.ratio));
                }
            }
            Ok((format!("{} (worst {worst:.2}σ)", parts.join(", ")), worst <= 4.0))
        }),
        oracle("sampled F lies in the adjoint ball, ‖Ad_g‖ = σ₁²", || {
            let r = theorem_b_consistency(4.0, 5, &[0.1], 0.5, &McConfig::new(10_000, 3)?)?;
            let mut worst = 0.0f64;
            for (m, &norm) in r.f.iter().zip(&r.adjoint_norms) {
                let g = DMatrix::from_row_slice(2, 2, m);
                let s1 = g.singular_values().max();
                worst = worst.max((s1 * s1 - norm).abs());
                if norm > 4.0 + 1e-9 {
                    return Ok((format!("‖Ad_g‖ = {norm} > ρ"), false));
                }
            }
            Ok((format!("max |σ₁² - ‖Ad_g‖| = {worst:.1e}"), worst <= 1e-9))
        }),
        oracle("density closed forms along hyperbolic and compact directions", || {
            let m = build_model("sl:2")?;
            let mut worst = 0.0f64;
            for t in [0.3f64, 1.0, 2.5] {
                let h = AlgebraVector::new(&m, vec![t, 0.0, 0.0])?;
                worst = worst.max((exp_density(&h, 40) - (t.sinh() / t).powi(2)).abs());
                let k = AlgebraVector::new(&m, vec![0.0, t, -t])?;
                worst = worst.max((exp_density(&k, 40) - (t.sin() / t).powi(2)).abs());
            }
            Ok((format!("{worst:.1e}"), worst <= 1e-10))
        }),
        oracle("L2 multiplier ratio at a point mass equals max |m|", || {
            let g = Arc::new(FiniteGroup::parse("dihedral:5")?);
            let m = Symbol::family(&g, 1, "random:3")?;
            let (arg, _) = m
                .values()
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                .expect("nonempty");
            let x = AlgebraElement::delta(&g, arg);
            let r = multiplier_ratio(&m, &[&x], &[Exponent::TWO], Exponent::TWO)?;
            Ok((format!("{:.2e}", (r - m.sup_norm()).abs()), (r - m.sup_norm()).abs() <= 1e-12))
        }),
        oracle("exact δ against direct enumeration", || {
            let mut rng = ChaCha8Rng::seed_from_u64(77);
            let mut worst = 0.0f64;
            for d in ["dihedral:6", "heisenberg:3", "product:cyclic:2,dihedral:3", "cyclic:10"] {
                let g = Arc::new(FiniteGroup::parse(d)?);
                for _ in 0..40 {
                    let f: Vec<usize> = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(0..g.order())).collect();
                    let mut v: Vec<usize> = (0..rng.gen_range(1..g.order())).map(|_| rng.gen_range(0..g.order())).collect();
                    v.sort_unstable();
                    v.dedup();
                    let exact = delta_exact(&GroupSubset::new(&g, f.clone())?, &GroupSubset::new(&g, v.clone())?)?;
                    worst = worst.max((exact.value() - brute_delta(&g, &f, &v)).abs());
                }
            }
            Ok((format!("{worst:.1e}"), worst == 0.0))
        }),
        oracle("SL(2,Z) counts against four-fold enumeration", || {
            let mut parts = Vec::new();
            let mut ok = true;
            for rho in [100.0, 250.0, 500.0] {
                let (a, b) = (sl2z_count(rho)?, brute_count(rho));
                ok &= a == b;
                parts.push(format!("{a}={b}"));
            }
            Ok((parts.join(", "), ok))
        }),
    ]
}

fn main() {
    let mut unexpected = 0;
    for id in 1..=CRITERIA {
        let c = suite::run(id);
        let known = KNOWN_FAILING.contains(&id);
        println!("{c}{}", if known && !c.pass { "  (known failure)" } else { "" });
        if c.pass == known {
            unexpected += 1;
        }
    }
    for o in oracles() {
        println!("ORACLE {} {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.name, o.detail);
        if !o.pass {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected result(s)");
        std::process::exit(1);
    }
}
