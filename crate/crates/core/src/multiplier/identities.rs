//! Brute-force residuals of the reduction identities for multilinear
//! multipliers: consummation, translation and nesting.

use rand::Rng;

use super::{NormEstimate, Symbol};
use crate::algebra::AlgebraElement;
use crate::error::{invalid, Error, Result};
use crate::lp::Exponent;

fn random_inputs<R: Rng + ?Sized>(m: &Symbol, n: usize, rng: &mut R) -> Vec<AlgebraElement> {
    (0..n).map(|_| AlgebraElement::random_gaussian(m.group(), None, rng)).collect()
}

fn product(xs: &[AlgebraElement]) -> Result<AlgebraElement> {
    let mut acc = xs[0].clone();
    for x in &xs[1..] {
        acc = acc.convolve(x)?;
    }
    Ok(acc)
}

/// Consummation of `m` (arity `k`) along 1-based block starts
/// `indices = (1 = i_1 < … < i_k ≤ n)`:
/// `m̃(s_1, …, s_n) = m(s_{i_1} ⋯ s_{i_2 - 1}, …, s_{i_k} ⋯ s_n)`.
pub fn consummate(m: &Symbol, indices: &[usize], n: usize) -> Result<Symbol> {
    let blocks = blocks(m, indices, n)?;
    let g = m.group();
    Symbol::from_fn(g, n, |s| {
        let args: Vec<usize> = blocks
            .iter()
            .map(|&(a, b)| s[a..b].iter().fold(g.identity(), |acc, &x| g.mul(acc, x)))
            .collect();
        m.get(&args)
    })
}

fn blocks(m: &Symbol, indices: &[usize], n: usize) -> Result<Vec<(usize, usize)>> {
    if indices.len() != m.arity() {
        return Err(Error::Arity { expected: m.arity(), got: indices.len() });
    }
    if indices.first() != Some(&1) || indices.windows(2).any(|w| w[0] >= w[1]) || indices[indices.len() - 1] > n {
        return invalid(format!("invalid consummation pattern {indices:?} for n = {n}"));
    }
    let mut out = Vec::with_capacity(indices.len());
    for (l, &start) in indices.iter().enumerate() {
        let end = indices.get(l + 1).copied().unwrap_or(n + 1);
        out.push((start - 1, end - 1));
    }
    Ok(out)
}

/// Largest `‖T_{m̃}(x) − T_m(x_{i_1} ⋯ x_{i_2-1}, …)‖_2` over random inputs.
pub fn consummation_residual<R: Rng + ?Sized>(
    m: &Symbol,
    indices: &[usize],
    n: usize,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    let blocks = blocks(m, indices, n)?;
    let mt = consummate(m, indices, n)?;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let xs = random_inputs(m, n, rng);
        let lhs = mt.apply(&xs.iter().collect::<Vec<_>>())?;
        let grouped: Vec<AlgebraElement> = blocks.iter().map(|&(a, b)| product(&xs[a..b])).collect::<Result<_>>()?;
        let rhs = m.apply(&grouped.iter().collect::<Vec<_>>())?;
        worst = worst.max(lhs.sub(&rhs)?.l2());
    }
    Ok(worst)
}

/// `m̃_i(s; r, t, r') = m(r s_1, …, s_i t, t^{-1} s_{i+1}, …, s_n r')` with
/// `1 ≤ i ≤ n - 1`.
pub fn translate_symbol(m: &Symbol, i: usize, r: usize, t: usize, r2: usize) -> Result<Symbol> {
    let n = m.arity();
    if i == 0 || i >= n {
        return invalid(format!("translation slot {i} outside 1..{}", n.saturating_sub(1)));
    }
    let g = m.group();
    let ti = g.inv(t);
    Symbol::from_fn(g, n, |s| {
        let mut u = s.to_vec();
        u[0] = g.mul(r, u[0]);
        u[i - 1] = g.mul(u[i - 1], t);
        u[i] = g.mul(ti, u[i]);
        u[n - 1] = g.mul(u[n - 1], r2);
        m.get(&u)
    })
}

/// Largest deviation between `T_{m̃_i}(x)` and
/// `λ(r)^* T_m(λ(r) x_1, …, x_i λ(t), λ(t)^* x_{i+1}, …, x_n λ(r')) λ(r')^*`.
pub fn translation_residual<R: Rng + ?Sized>(
    m: &Symbol,
    i: usize,
    r: usize,
    t: usize,
    r2: usize,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    let mt = translate_symbol(m, i, r, t, r2)?;
    let g = m.group();
    let n = m.arity();
    let e = g.identity();
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let xs = random_inputs(m, n, rng);
        let lhs = mt.apply(&xs.iter().collect::<Vec<_>>())?;
        let mut moved = xs.clone();
        moved[0] = moved[0].translate(r, e);
        moved[i - 1] = moved[i - 1].translate(e, t);
        moved[i] = moved[i].translate(g.inv(t), e);
        moved[n - 1] = moved[n - 1].translate(e, r2);
        let inner = m.apply(&moved.iter().collect::<Vec<_>>())?;
        let rhs = inner.translate(g.inv(r), g.inv(r2));
        worst = worst.max(lhs.sub(&rhs)?.l2());
    }
    Ok(worst)
}

/// Transports a witness of `T_m` to one of `T_{m̃_i}` and returns
/// `|ratio_{m̃}(transported) − est.value|`, which vanishes up to rounding.
pub fn translation_norm_transport(
    m: &Symbol,
    i: usize,
    r: usize,
    t: usize,
    r2: usize,
    ps: &[Exponent],
    p: Exponent,
    est: &NormEstimate,
) -> Result<f64> {
    let mt = translate_symbol(m, i, r, t, r2)?;
    let g = m.group();
    let n = m.arity();
    let e = g.identity();
    let mut w = est.witness_elements(m)?;
    w[0] = w[0].translate(g.inv(r), e);
    w[i - 1] = w[i - 1].translate(e, g.inv(t));
    w[i] = w[i].translate(t, e);
    w[n - 1] = w[n - 1].translate(e, g.inv(r2));
    let ratio = super::multiplier_ratio(&mt, &w.iter().collect::<Vec<_>>(), ps, p)?;
    Ok((ratio - est.value).abs())
}

/// `m̃(s) = m_1(s_1 ⋯ s_{n-1}) m_2(s_2 ⋯ s_{n-1}) ⋯ m_{n-1}(s_{n-1}) m_n(s_n)`.
pub fn nest_symbols(ms: &[Symbol]) -> Result<Symbol> {
    let n = ms.len();
    if n < 2 {
        return invalid("nesting needs at least two symbols");
    }
    for m in ms {
        if m.arity() != 1 {
            return Err(Error::Arity { expected: 1, got: m.arity() });
        }
        ms[0].check_args(&[&AlgebraElement::zero(m.group())])?;
    }
    let g = ms[0].group();
    Symbol::from_fn(g, n, |s| {
        let mut v = ms[n - 1].get(&[s[n - 1]]);
        let mut tail = g.identity();
        for j in (0..n - 1).rev() {
            tail = g.mul(s[j], tail);
            v *= ms[j].get(&[tail]);
        }
        v
    })
}

/// Largest deviation between `T_{m̃}(x)` and
/// `T_{m_1}(x_1 T_{m_2}(x_2 ⋯ T_{m_{n-1}}(x_{n-1}) ⋯)) T_{m_n}(x_n)`.
pub fn nested_residual<R: Rng + ?Sized>(ms: &[Symbol], trials: usize, rng: &mut R) -> Result<f64> {
    let mt = nest_symbols(ms)?;
    let n = ms.len();
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let xs = random_inputs(&ms[0], n, rng);
        let lhs = mt.apply(&xs.iter().collect::<Vec<_>>())?;
        let mut z = ms[n - 2].apply(&[&xs[n - 2]])?;
        for j in (0..n - 2).rev() {
            z = ms[j].apply(&[&xs[j].convolve(&z)?])?;
        }
        let rhs = z.convolve(&ms[n - 1].apply(&[&xs[n - 1]])?)?;
        worst = worst.max(lhs.sub(&rhs)?.l2());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::multiplier::{estimate_norm, OptimizerConfig};
    use crate::Complex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn group(s: &str) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::parse(s).unwrap())
    }

    #[test]
    fn identity_consummation_is_exact() {
        let g = group("dihedral:3");
        let m = Symbol::family(&g, 2, "random:1").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(consummation_residual(&m, &[1, 2], 2, 5, &mut rng).unwrap(), 0.0);
    }

    #[test]
    fn consummation_fixtures() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let z3 = group("cyclic:3");
        let m = Symbol::family(&z3, 1, "random:2").unwrap();
        assert!(consummation_residual(&m, &[1], 2, 100, &mut rng).unwrap() <= 1e-12);
        let d3 = group("dihedral:3");
        let m2 = Symbol::family(&d3, 2, "random:3").unwrap();
        assert!(consummation_residual(&m2, &[1, 3], 3, 20, &mut rng).unwrap() <= 1e-10);
        assert!(consummation_residual(&m2, &[2, 3], 3, 1, &mut rng).is_err());
    }

    #[test]
    fn trivial_translation_is_exact() {
        let g = group("dihedral:3");
        let m = Symbol::family(&g, 2, "random:4").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(translation_residual(&m, 1, 0, 0, 0, 5, &mut rng).unwrap(), 0.0);
        assert!(translation_residual(&m, 2, 0, 0, 0, 1, &mut rng).is_err());
    }

    #[test]
    fn translation_noncommuting() {
        let g = group("dihedral:3");
        let m = Symbol::family(&g, 2, "random:5").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(translation_residual(&m, 1, 1, 3, 4, 20, &mut rng).unwrap() <= 1e-10);
        let m3 = Symbol::family(&g, 3, "random:6").unwrap();
        assert!(translation_residual(&m3, 2, 2, 5, 1, 10, &mut rng).unwrap() <= 1e-10);
    }

    #[test]
    fn translation_transport_equal_values() {
        let g = group("dihedral:3");
        let m = Symbol::family(&g, 2, "random:9").unwrap();
        let ps = [Exponent::new(4.0).unwrap(), Exponent::new(4.0).unwrap()];
        let p = Exponent::TWO;
        let est = estimate_norm(&m, &ps, p, &OptimizerConfig { restarts: 2, ..Default::default() }).unwrap();
        assert!(translation_norm_transport(&m, 1, 1, 4, 2, &ps, p, &est).unwrap() < 1e-9);
    }

    #[test]
    fn nested_all_ones_is_product() {
        let g = group("dihedral:3");
        let one = Symbol::constant(&g, 1, Complex::new(1.0, 0.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert!(nested_residual(&[one.clone(), one.clone(), one], 5, &mut rng).unwrap() < 1e-12);
    }

    #[test]
    fn nested_fixtures() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let z3 = group("cyclic:3");
        let ms: Vec<Symbol> = (0..2).map(|k| Symbol::family(&z3, 1, &format!("random:{k}")).unwrap()).collect();
        assert!(nested_residual(&ms, 50, &mut rng).unwrap() <= 1e-12);
        let d3 = group("dihedral:3");
        let ms: Vec<Symbol> = (0..3).map(|k| Symbol::family(&d3, 1, &format!("random:{k}")).unwrap()).collect();
        assert!(nested_residual(&ms, 20, &mut rng).unwrap() <= 1e-10);
    }
}
