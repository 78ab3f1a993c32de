//! Exact and Monte Carlo computations for noncommutative Fourier multipliers.
//!
//! The crate works at two scales. On finite groups everything is exact up to
//! floating point: group algebras, normalised Schatten norms, multilinear
//! multipliers, the almost-invariance constant `δ_F(V)` and the maps that
//! transport multipliers between a group and its subgroups, quotients and
//! lattices. On matrix Lie groups (`sl(n, R)`, Heisenberg) it provides the
//! geometry needed to estimate `δ_F(V)` and nilpotent-cone volumes by Monte
//! Carlo, plus exact lattice-point counts in `SL(2, Z)`.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod group;
pub mod harness;
pub mod lie;
pub mod lp;
pub mod mc;
pub mod multiplier;
pub mod suite;

pub use error::{Error, Result};

/// Double-precision complex scalar used throughout.
pub type Complex = nalgebra::Complex<f64>;
