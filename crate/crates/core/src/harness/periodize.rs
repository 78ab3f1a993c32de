//! Periodization along a finite normal subgroup `H ⊴ G`.
//!
//! `π(λ(gH)) = λ(g) Π` with `Π = |H|^{-1} Σ_h λ(h)`, so on coefficients
//! `π(x)(g) = x(gH) / |H|`, and `π_p = |H|^{1/p} π` is an `L_p` isometry.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ResidualReport;
use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::group::{same_group, Quotient};
use crate::lp::{lp_norm, plancherel_trace, Exponent};
use crate::multiplier::Symbol;
use crate::Complex;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeriodizationReport {
    /// `max ‖π_p T_{m_q}(x) - T_{m_π}(π_{p_1} x_1, …)‖_2`, tolerance `1e-10`.
    pub intertwining: ResidualReport,
    /// `max |‖π_p(x)‖_p - ‖x‖_p|` over inputs and output, tolerance `1e-10`.
    pub isometry: ResidualReport,
    /// `max |τ_G(π(x)) - τ_{G/H}(x) / |H||`, tolerance `1e-12`.
    pub trace: ResidualReport,
}

impl PeriodizationReport {
    pub fn pass(&self) -> bool {
        self.intertwining.pass && self.isometry.pass && self.trace.pass
    }
}

/// `π_p(x)`; pass `p = ∞` for the unscaled `π`.
pub fn periodize(q: &Quotient, x: &AlgebraElement, p: Exponent) -> Result<AlgebraElement> {
    if !same_group(x.group(), q.group()) {
        return Err(Error::ParentMismatch(x.group().label().into(), q.group().label().into()));
    }
    let h = q.normal().len() as f64;
    let scale = h.powf(p.reciprocal()) / h;
    let g = q.ambient();
    let coeffs = (0..g.order()).map(|s| x.coeffs()[q.coset_of(s)] * scale).collect();
    AlgebraElement::new(g, coeffs)
}

/// `m_π(g_1, …, g_n) = m_q(g_1 H, …, g_n H)`.
pub fn periodized_symbol(q: &Quotient, m: &Symbol) -> Result<Symbol> {
    if !same_group(m.group(), q.group()) {
        return Err(Error::ParentMismatch(m.group().label().into(), q.group().label().into()));
    }
    Symbol::from_fn(q.ambient(), m.arity(), |s| {
        let cs: Vec<usize> = s.iter().map(|&g| q.coset_of(g)).collect();
        m.get(&cs)
    })
}

pub fn periodization_residual<R: Rng + ?Sized>(
    q: &Quotient,
    m: &Symbol,
    ps: &[Exponent],
    trials: usize,
    rng: &mut R,
) -> Result<PeriodizationReport> {
    if ps.len() != m.arity() {
        return Err(Error::Arity { expected: m.arity(), got: ps.len() });
    }
    let p = Exponent::harmonic_sum(ps)?;
    let m_pi = periodized_symbol(q, m)?;
    let h = q.normal().len() as f64;
    let (mut inter, mut iso, mut tr) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..trials {
        let xs: Vec<AlgebraElement> = (0..m.arity()).map(|_| AlgebraElement::random_gaussian(q.group(), None, rng)).collect();
        let refs: Vec<_> = xs.iter().collect();
        let out = m.apply(&refs)?;
        let lhs = periodize(q, &out, p)?;
        let lifted: Vec<AlgebraElement> =
            xs.iter().zip(ps).map(|(x, &pi)| periodize(q, x, pi)).collect::<Result<_>>()?;
        let lifted_refs: Vec<_> = lifted.iter().collect();
        let rhs = m_pi.apply(&lifted_refs)?;
        inter = inter.max(lhs.sub(&rhs)?.l2());
        for (x, &pi) in xs.iter().zip(ps).chain(std::iter::once((&out, &p))) {
            if pi.is_infinite() {
                continue;
            }
            iso = iso.max((lp_norm(&periodize(q, x, pi)?, pi)? - lp_norm(x, pi)?).abs());
            let plain = periodize(q, x, Exponent::INFINITY)?;
            let expect: Complex = plancherel_trace(x) / h;
            tr = tr.max((plancherel_trace(&plain) - expect).norm());
        }
    }
    let label = q.group().label().to_string();
    Ok(PeriodizationReport {
        intertwining: ResidualReport::new("periodization_intertwining", inter, 1e-10)
            .with("quotient", &label)
            .with("trials", trials),
        isometry: ResidualReport::new("periodization_isometry", iso, 1e-10).with("quotient", &label),
        trace: ResidualReport::new("periodization_trace", tr, 1e-12).with("quotient", &label),
    })
}
