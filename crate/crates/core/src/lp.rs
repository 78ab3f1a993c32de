//! Trace, noncommutative `L_p` norms, the duality pairing and the polar data
//! of `|V|^{-1/2} λ(1_V)`.
//!
//! The trace on `L(G)` is `τ(λ(f)) = f(e)`, which is `Tr / N` on the regular
//! representation, so `‖x‖_p = (N^{-1} Σ σ_i^p)^{1/p}` over singular values.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::group::GroupSubset;
use crate::Complex;

/// An exponent `p ∈ [1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::Invalid(format!("exponent {p} outside [1, ∞]")));
        }
        Ok(Self(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    /// `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Self {
        if self.0 == 1.0 {
            Self::INFINITY
        } else if self.is_infinite() {
            Self::ONE
        } else {
            Self(self.0 / (self.0 - 1.0))
        }
    }

    /// `r` with `1/r = Σ 1/p_i`, if that lies in `[1, ∞]`.
    pub fn harmonic_sum(ps: &[Exponent]) -> Result<Self> {
        let s: f64 = ps.iter().map(|p| p.reciprocal()).sum();
        if s > 1.0 + 1e-12 {
            return Err(Error::Invalid(format!("Σ 1/p_i = {s} exceeds 1")));
        }
        if s == 0.0 {
            Ok(Self::INFINITY)
        } else {
            Ok(Self((1.0 / s).max(1.0)))
        }
    }

    pub fn parse_list(text: &str) -> Result<Vec<Exponent>> {
        text.split(',').map(|s| s.trim().parse()).collect()
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Self::INFINITY),
            t => Self::new(t.parse::<f64>().map_err(|_| Error::Invalid(format!("bad exponent `{t}`")))?),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::Num(p) => Exponent::new(p),
            Raw::Text(t) => t.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// Normalised Schatten norm from singular values of an `n × n` matrix.
pub fn schatten_from_singular(sv: &[f64], n: usize, p: Exponent) -> f64 {
    if p.is_infinite() {
        return sv.iter().copied().fold(0.0, f64::max);
    }
    let p = p.value();
    if p == 2.0 {
        return (sv.iter().map(|s| s * s).sum::<f64>() / n as f64).sqrt();
    }
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    let s: f64 = sv.iter().map(|&x| (x / top).powf(p)).sum();
    top * (s / n as f64).powf(1.0 / p)
}

pub fn singular_values(m: &DMatrix<Complex>) -> Result<Vec<f64>> {
    let sv = m
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?
        .singular_values;
    if sv.iter().any(|s| !s.is_finite()) {
        return Err(Error::Numerical("non-finite singular value".into()));
    }
    Ok(sv.iter().copied().collect())
}

/// `‖M‖_p` for a square matrix with the trace normalised by its size.
pub fn matrix_lp_norm(m: &DMatrix<Complex>, p: Exponent) -> Result<f64> {
    let sv = singular_values(m)?;
    Ok(schatten_from_singular(&sv, m.nrows(), p))
}

/// `τ(λ(f)) = f(e)`.
pub fn plancherel_trace(f: &AlgebraElement) -> Complex {
    f.coeffs()[f.group().identity()]
}

/// `‖λ(f)‖_{L_p(Ĝ)}`.
pub fn lp_norm(f: &AlgebraElement, p: Exponent) -> Result<f64> {
    if p == Exponent::TWO {
        return Ok(f.l2());
    }
    matrix_lp_norm(&f.regular_matrix(), p)
}

/// `⟨λ(φ^∨), λ(f)⟩ = Σ_s φ(s) f(s)`.
pub fn dual_pairing(phi: &AlgebraElement, f: &AlgebraElement) -> Result<Complex> {
    phi.check_same(f)?;
    Ok(phi.coeffs().iter().zip(f.coeffs()).map(|(a, b)| a * b).sum())
}

/// `g(A)` for a Hermitian matrix via its eigendecomposition; eigenvalues with
/// modulus below `1e-12 ‖A‖` are treated as zero and mapped to `g(0)`.
pub fn hermitian_function(a: &DMatrix<Complex>, g: impl Fn(f64) -> f64) -> DMatrix<Complex> {
    let eig = SymmetricEigen::new(a.clone());
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cutoff = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let q = &eig.eigenvectors;
    let vals = eig.eigenvalues.iter().map(|&mu| g(if mu.abs() < cutoff { 0.0 } else { mu }));
    scale_columns(q, vals) * q.adjoint()
}

fn scale_columns(q: &DMatrix<Complex>, vals: impl Iterator<Item = f64>) -> DMatrix<Complex> {
    let mut scaled = q.clone();
    for (j, v) in vals.enumerate() {
        for x in scaled.column_mut(j).iter_mut() {
            *x *= v;
        }
    }
    scaled
}

/// `|x|^s` for an arbitrary square matrix, as `(x^* x)^{s/2}`.
pub fn matrix_abs_power(x: &DMatrix<Complex>, s: f64) -> DMatrix<Complex> {
    let xx = x.adjoint() * x;
    hermitian_function(&xx, |v| if v <= 0.0 { 0.0 } else { v.powf(s / 2.0) })
}

/// Polar data `k_V = u_V h_V` of the self-adjoint `k_V = |V|^{-1/2} λ(1_V)`.
#[derive(Clone, Debug)]
pub struct PolarPair {
    pub h: DMatrix<Complex>,
    pub u: DMatrix<Complex>,
    pub source: GroupSubset,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex>,
}

impl PolarPair {
    /// `h^s` with `0^s = 0` for `s > 0` and the support projection for `s = 0`.
    pub fn h_power(&self, s: f64) -> DMatrix<Complex> {
        let scale = self.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let cutoff = 1e-12 * scale;
        let q = &self.eigenvectors;
        let vals = self
            .eigenvalues
            .iter()
            .map(|&mu| if mu.abs() <= cutoff { 0.0 } else { mu.abs().powf(s) });
        scale_columns(q, vals) * q.adjoint()
    }

    /// The matrix of `k_V`.
    pub fn k(&self) -> DMatrix<Complex> {
        &self.u * &self.h
    }

    pub fn rank(&self) -> usize {
        let scale = self.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.eigenvalues.iter().filter(|v| v.abs() > 1e-12 * scale).count()
    }
}

pub fn polar_parts(v: &GroupSubset) -> Result<PolarPair> {
    if v.is_empty() {
        return Err(Error::Precondition("V is empty".into()));
    }
    if !v.is_symmetric() {
        return Err(Error::Precondition(format!("V = {} is not symmetric", v.spec())));
    }
    let scale = Complex::new(1.0 / (v.len() as f64).sqrt(), 0.0);
    let k = AlgebraElement::indicator(v).scale(scale).regular_matrix();
    let eig = SymmetricEigen::new(k);
    let eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let top = eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cutoff = 1e-12 * top;
    let q = eig.eigenvectors;
    let build = |g: &dyn Fn(f64) -> f64| {
        scale_columns(&q, eigenvalues.iter().map(|&mu| g(mu))) * q.adjoint()
    };
    let h = build(&|mu| if mu.abs() <= cutoff { 0.0 } else { mu.abs() });
    let u = build(&|mu| if mu.abs() <= cutoff { 0.0 } else { mu.signum() });
    Ok(PolarPair { h, u, source: v.clone(), eigenvalues, eigenvectors: q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use std::sync::Arc;

    fn group(s: &str) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::parse(s).unwrap())
    }

    #[test]
    fn exponent_arithmetic() {
        assert_eq!(Exponent::ONE.conjugate(), Exponent::INFINITY);
        assert_eq!(Exponent::INFINITY.conjugate(), Exponent::ONE);
        assert!((Exponent::new(4.0).unwrap().conjugate().value() - 4.0 / 3.0).abs() < 1e-15);
        assert!(Exponent::new(0.5).is_err());
        let r = Exponent::harmonic_sum(&[Exponent::new(4.0).unwrap(), Exponent::new(4.0).unwrap()]).unwrap();
        assert_eq!(r.value(), 2.0);
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::INFINITY);
    }

    #[test]
    fn trace_and_norm_examples() {
        let g = group("cyclic:2");
        let e = AlgebraElement::delta(&g, 0);
        assert_eq!(plancherel_trace(&e), Complex::new(1.0, 0.0));
        assert_eq!(plancherel_trace(&AlgebraElement::delta(&g, 1)), Complex::new(0.0, 0.0));
        for p in [1.0, 1.5, 3.0] {
            assert!((lp_norm(&e, Exponent::new(p).unwrap()).unwrap() - 1.0).abs() < 1e-12);
        }
        let f = AlgebraElement::from_real(&g, &[1.0, 1.0]).unwrap();
        // Singular values 2 and 0 give (1/2)(2 + 0) = 1.
        assert!((lp_norm(&f, Exponent::ONE).unwrap() - 1.0).abs() < 1e-12);
        assert!((lp_norm(&f, Exponent::INFINITY).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn polar_parts_of_whole_z2() {
        let g = group("cyclic:2");
        let pp = polar_parts(&GroupSubset::whole(&g)).unwrap();
        // Fourier basis (1,1)/√2, (1,-1)/√2 with eigenvalues √2, 0.
        let mut evs = pp.eigenvalues.clone();
        evs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(evs[0].abs() < 1e-14 && (evs[1] - 2f64.sqrt()).abs() < 1e-14);
        let expected_h = DMatrix::from_element(2, 2, Complex::new(2f64.sqrt() / 2.0, 0.0));
        assert!((pp.h.clone() - expected_h).camax() < 1e-14);
        assert_eq!(pp.rank(), 1);
    }

    #[test]
    fn polar_parts_identity_and_asymmetric() {
        let g = group("dihedral:6");
        let pp = polar_parts(&GroupSubset::identity(&g)).unwrap();
        let id = DMatrix::<Complex>::identity(12, 12);
        assert!((pp.h.clone() - &id).camax() < 1e-14 && (pp.u.clone() - &id).camax() < 1e-14);
        assert!(polar_parts(&GroupSubset::new(&g, [0, 1]).unwrap()).is_err());
    }
}
