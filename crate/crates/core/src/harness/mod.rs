//! Exact finite-scale checks: `δ_F(V)` by counting, the overlap Gram matrix,
//! the local embedding maps, restriction to subgroups, periodization along
//! quotients and the lattice approximation maps.

mod embedding;
mod lattice;
mod periodize;
mod restriction;

use std::collections::BTreeMap;
use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupSubset;

pub use embedding::{
    check_lower_conditions, embedding_contraction_residual, embedding_lower_residual, holder_witness,
    translates_disjoint,
};
pub use lattice::{
    lattice_approximant, lattice_maps_report, lattice_pairing_deviation, lattice_refinement_report, phi_map, psi_map,
    FundamentalDomain, LatticeReport,
};
pub use periodize::{periodization_residual, periodize, periodized_symbol, PeriodizationReport};
pub use restriction::{restriction_consistency, RestrictionReport, MAX_RESTRICTION_ORDER};

/// Exact `δ_F(V) = |V ∩ ⋂_{s∈F} s V s^{-1}| / |V|`, i.e. with the identity
/// adjoined to `F`; for `e ∈ F` this is the plain intersection ratio.
#[derive(Clone, Debug)]
pub struct DeltaValue {
    pub numerator: usize,
    pub denominator: usize,
    pub f: GroupSubset,
    pub v: GroupSubset,
}

impl DeltaValue {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// The fraction in lowest terms.
    pub fn reduced(&self) -> (usize, usize) {
        let g = gcd(self.numerator, self.denominator);
        (self.numerator / g, self.denominator / g)
    }
}

impl std::fmt::Display for DeltaValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (a, b) = self.reduced();
        write!(f, "{a}/{b}")
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Outcome of one residual check; `pass` holds exactly when
/// `residual <= tolerance`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ResidualReport {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub context: BTreeMap<String, serde_json::Value>,
}

impl ResidualReport {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            context: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.context
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(serde_json::Value::Null));
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn write_json_lines<W: Write>(reports: &[ResidualReport], mut w: W) -> Result<()> {
        for r in reports {
            writeln!(w, "{}", r.to_json_line())?;
        }
        Ok(())
    }
}

pub fn delta_exact(f: &GroupSubset, v: &GroupSubset) -> Result<DeltaValue> {
    if v.is_empty() {
        return Err(Error::Precondition("V is empty".into()));
    }
    if !crate::group::same_group(f.parent(), v.parent()) {
        return Err(Error::ParentMismatch(f.parent().label().into(), v.parent().label().into()));
    }
    let mut inter = v.clone();
    for &s in f.members() {
        inter = inter.intersect(&v.conjugate(s));
    }
    Ok(DeltaValue { numerator: inter.len(), denominator: v.len(), f: f.clone(), v: v.clone() })
}

#[derive(Clone, Debug)]
pub struct GramMatrix {
    /// `A_{s,t} = |s V s^{-1} ∩ t V t^{-1}| / |V|` over `s, t ∈ F`.
    pub a: DMatrix<f64>,
    pub delta: DeltaValue,
    pub min_eigenvalue: f64,
    pub min_eigenvalue_shifted: f64,
}

/// The overlap matrix of the conjugates of `V` and the smallest eigenvalues
/// of `A` and `A - δ_F(V) 1`.
pub fn gram_matrix(f: &GroupSubset, v: &GroupSubset) -> Result<GramMatrix> {
    if f.is_empty() {
        return Err(Error::Precondition("F is empty".into()));
    }
    let delta = delta_exact(f, v)?;
    let conj: Vec<GroupSubset> = f.members().iter().map(|&s| v.conjugate(s)).collect();
    let k = conj.len();
    let a = DMatrix::from_fn(k, k, |i, j| conj[i].intersect(&conj[j]).len() as f64 / v.len() as f64);
    let min_eig = |m: DMatrix<f64>| SymmetricEigen::new(m).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let min_eigenvalue = min_eig(a.clone());
    let shifted = a.map(|x| x - delta.value());
    let min_eigenvalue_shifted = min_eig(shifted);
    Ok(GramMatrix { a, delta, min_eigenvalue, min_eigenvalue_shifted })
}
