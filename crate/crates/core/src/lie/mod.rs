//! Matrix models of `sl(n, R)` and the three-dimensional Heisenberg algebra.
//!
//! The invariant form is the trace form and the inner product is
//! `B_θ(x, y) = tr(x yᵀ)`. Coordinates are taken in the model basis; the
//! Cholesky factor of its Gram matrix converts them to `B_θ`-orthonormal ones.

mod adjoint;
mod density;
pub mod matfn;
mod nilpotent;
mod orbit;

use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};

pub use adjoint::{adjoint_norm, ball_checks, kak_log_profile, random_rotation, BallReport, KakProfile};
pub use density::{exp_density, exp_density_eigen, exp_density_series, SERIES_RADIUS};
pub use nilpotent::{max_nilpotent_dim, nilpotent_orbit_dim, regular_nilpotent, MaxNilpotentDim};
pub use orbit::{nilcone_tube_membership, orbit_min_norm, OrbitMethod, OrbitNorm};
pub(crate) use orbit::sl2_tube_orthonormal;
pub(crate) use adjoint::kak_element;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Sl(usize),
    Heisenberg,
}

#[derive(Debug)]
pub struct LieModel {
    name: String,
    kind: ModelKind,
    basis: Vec<DMatrix<f64>>,
    /// `[e_i, e_j] = Σ_k c[(i·dim + j)·dim + k] e_k`.
    structure: Vec<f64>,
    theta: DMatrix<f64>,
    gram: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

fn unit(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

/// `sl:n` (`2 ≤ n ≤ 5`) or `heisenberg3`.
pub fn build_model(name: &str) -> Result<Arc<LieModel>> {
    let name = name.trim();
    let (kind, basis) = if name == "heisenberg3" {
        (ModelKind::Heisenberg, vec![unit(3, 0, 1), unit(3, 1, 2), unit(3, 0, 2)])
    } else if let Some(n) = name.strip_prefix("sl:") {
        let n: usize = n.parse().map_err(|_| Error::Descriptor(format!("bad model {name:?}")))?;
        if !(2..=5).contains(&n) {
            return Err(Error::Descriptor(format!("sl:n needs 2 ≤ n ≤ 5, got {n}")));
        }
        let mut basis: Vec<DMatrix<f64>> = (0..n - 1).map(|i| unit(n, i, i) - unit(n, i + 1, i + 1)).collect();
        for i in 0..n {
            for j in i + 1..n {
                basis.push(unit(n, i, j));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                basis.push(unit(n, j, i));
            }
        }
        (ModelKind::Sl(n), basis)
    } else {
        return Err(Error::Descriptor(format!("unsupported model {name:?}")));
    };
    let dim = basis.len();
    let gram = DMatrix::from_fn(dim, dim, |i, j| basis[i].dot(&basis[j]));
    let chol = Cholesky::new(gram.clone()).ok_or_else(|| Error::Numerical("Gram matrix not positive definite".into()))?;
    let mut model = LieModel {
        name: name.to_string(),
        kind,
        basis,
        structure: vec![0.0; dim * dim * dim],
        theta: DMatrix::identity(dim, dim),
        gram,
        chol,
    };
    for i in 0..dim {
        for j in 0..dim {
            let b = model.bracket_matrix(&model.basis[i], &model.basis[j]);
            let c = model.coords_of(&b);
            for k in 0..dim {
                model.structure[(i * dim + j) * dim + k] = c[k];
            }
        }
    }
    model.theta = match kind {
        ModelKind::Sl(_) => {
            let cols: Vec<DVector<f64>> = model.basis.iter().map(|b| model.coords_of(&(-b.transpose()))).collect();
            DMatrix::from_columns(&cols)
        }
        // X ↔ Y, Z ↦ -Z: an involutive automorphism, since [Y, X] = -Z.
        ModelKind::Heisenberg => DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0]),
    };
    Ok(Arc::new(model))
}

impl LieModel {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Size of the defining matrices.
    pub fn matrix_size(&self) -> usize {
        self.basis[0].nrows()
    }

    pub fn basis(&self) -> &[DMatrix<f64>] {
        &self.basis
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        let d = self.dim();
        self.structure[(i * d + j) * d + k]
    }

    pub fn cartan_involution(&self) -> &DMatrix<f64> {
        &self.theta
    }

    /// Gram matrix of `B_θ` on the basis.
    pub fn inner(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn is_sl(&self) -> bool {
        matches!(self.kind, ModelKind::Sl(_))
    }

    fn bracket_matrix(&self, a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
        a * b - b * a
    }

    /// Coordinates of a matrix in the span of the basis; off the span, of its
    /// `B_θ`-orthogonal projection.
    pub fn coords_of(&self, m: &DMatrix<f64>) -> DVector<f64> {
        match self.kind {
            ModelKind::Sl(n) => {
                // Remove the trace, then h_k = d_1 + … + d_k on the diagonal.
                let shift = m.trace() / n as f64;
                let mut c = Vec::with_capacity(self.dim());
                let mut acc = 0.0;
                for k in 0..n - 1 {
                    acc += m[(k, k)] - shift;
                    c.push(acc);
                }
                for i in 0..n {
                    for j in i + 1..n {
                        c.push(m[(i, j)]);
                    }
                }
                for i in 0..n {
                    for j in i + 1..n {
                        c.push(m[(j, i)]);
                    }
                }
                DVector::from_vec(c)
            }
            ModelKind::Heisenberg => DVector::from_vec(vec![m[(0, 1)], m[(1, 2)], m[(0, 2)]]),
        }
    }

    /// `Lᵀ c` with `gram = L Lᵀ`: coordinates in a `B_θ`-orthonormal basis.
    pub fn to_orthonormal(&self, c: &DVector<f64>) -> DVector<f64> {
        self.chol.l().transpose() * c
    }

    pub fn from_orthonormal(&self, y: &DVector<f64>) -> DVector<f64> {
        self.chol
            .l()
            .transpose()
            .solve_upper_triangular(y)
            .expect("Cholesky factor is invertible")
    }

    /// Conjugates a coordinate-space operator into orthonormal coordinates.
    pub fn operator_to_orthonormal(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        let lt = self.chol.l().transpose();
        let lt_inv = lt.clone().try_inverse().expect("Cholesky factor is invertible");
        lt * a * lt_inv
    }

    /// `max |[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]|` over basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let d = self.dim();
        let br = |a: &DVector<f64>, b: &DVector<f64>| -> DVector<f64> {
            let mut out = DVector::zeros(d);
            for i in 0..d {
                for j in 0..d {
                    let w = a[i] * b[j];
                    if w != 0.0 {
                        for k in 0..d {
                            out[k] += w * self.structure_constant(i, j, k);
                        }
                    }
                }
            }
            out
        };
        let e = |i: usize| DVector::from_fn(d, |k, _| if k == i { 1.0 } else { 0.0 });
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let s = br(&br(&e(i), &e(j)), &e(k)) + br(&br(&e(j), &e(k)), &e(i)) + br(&br(&e(k), &e(i)), &e(j));
                    worst = worst.max(s.amax());
                }
            }
        }
        worst
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraVector {
    model: Arc<LieModel>,
    coords: DVector<f64>,
}

impl AlgebraVector {
    pub fn new(model: &Arc<LieModel>, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != model.dim() {
            return invalid(format!("expected {} coordinates, got {}", model.dim(), coords.len()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return invalid("non-finite coordinate");
        }
        Ok(Self { model: model.clone(), coords: DVector::from_vec(coords) })
    }

    pub fn zero(model: &Arc<LieModel>) -> Self {
        Self { model: model.clone(), coords: DVector::zeros(model.dim()) }
    }

    pub fn basis_vector(model: &Arc<LieModel>, i: usize) -> Self {
        let mut v = Self::zero(model);
        v.coords[i] = 1.0;
        v
    }

    /// Projects a matrix onto the algebra; errors if it lies off the span by
    /// more than `1e-9` relative.
    pub fn from_matrix(model: &Arc<LieModel>, m: &DMatrix<f64>) -> Result<Self> {
        let coords = model.coords_of(m);
        let v = Self { model: model.clone(), coords };
        if (v.matrix() - m).norm() > 1e-9 * m.norm().max(1.0) {
            return invalid("matrix does not lie in the algebra");
        }
        Ok(v)
    }

    /// From `B_θ`-orthonormal coordinates.
    pub fn from_orthonormal(model: &Arc<LieModel>, y: &[f64]) -> Result<Self> {
        if y.len() != model.dim() {
            return invalid(format!("expected {} coordinates, got {}", model.dim(), y.len()));
        }
        Ok(Self { model: model.clone(), coords: model.from_orthonormal(&DVector::from_column_slice(y)) })
    }

    /// Standard Gaussian in orthonormal coordinates.
    pub fn random<R: Rng + ?Sized>(model: &Arc<LieModel>, rng: &mut R) -> Self {
        let y = DVector::from_fn(model.dim(), |_, _| rng.sample::<f64, _>(StandardNormal));
        Self { model: model.clone(), coords: model.from_orthonormal(&y) }
    }

    pub fn model(&self) -> &Arc<LieModel> {
        &self.model
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn orthonormal_coords(&self) -> DVector<f64> {
        self.model.to_orthonormal(&self.coords)
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.model.matrix_size();
        let mut m = DMatrix::zeros(n, n);
        for (c, b) in self.coords.iter().zip(&self.model.basis) {
            if *c != 0.0 {
                m += b * *c;
            }
        }
        m
    }

    /// `‖x‖_{B_θ} = sqrt(tr(x xᵀ))`.
    pub fn norm(&self) -> f64 {
        self.matrix().norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { model: self.model.clone(), coords: &self.coords * s }
    }

    pub fn bracket(&self, other: &Self) -> Self {
        Self { model: self.model.clone(), coords: ad_operator(self) * &other.coords }
    }

    /// `θ(x)`.
    pub fn theta(&self) -> Self {
        Self { model: self.model.clone(), coords: &self.model.theta * &self.coords }
    }
}

/// Matrix of `y ↦ [x, y]` in the model basis.
pub fn ad_operator(x: &AlgebraVector) -> DMatrix<f64> {
    let m = &x.model;
    let d = m.dim();
    let mut ad = DMatrix::zeros(d, d);
    for i in 0..d {
        let xi = x.coords[i];
        if xi == 0.0 {
            continue;
        }
        for j in 0..d {
            for k in 0..d {
                ad[(k, j)] += xi * m.structure_constant(i, j, k);
            }
        }
    }
    ad
}

#[derive(Clone, Debug)]
pub struct GroupMatrix {
    model: Arc<LieModel>,
    mat: DMatrix<f64>,
}

impl GroupMatrix {
    /// Validates `|det - 1| ≤ 1e-9` for `sl` models and unit upper
    /// triangularity for the Heisenberg model.
    pub fn new(model: &Arc<LieModel>, mat: DMatrix<f64>) -> Result<Self> {
        let n = model.matrix_size();
        if mat.nrows() != n || mat.ncols() != n {
            return invalid(format!("expected a {n}×{n} matrix"));
        }
        match model.kind {
            ModelKind::Sl(_) => {
                let det = mat.determinant();
                if (det - 1.0).abs() > 1e-9 {
                    return invalid(format!("determinant {det} is not 1"));
                }
            }
            ModelKind::Heisenberg => {
                let ok = (0..n).all(|i| (0..n).all(|j| {
                    let v = mat[(i, j)];
                    if i == j {
                        (v - 1.0).abs() <= 1e-12
                    } else if i > j {
                        v.abs() <= 1e-12
                    } else {
                        true
                    }
                }));
                if !ok {
                    return invalid("Heisenberg elements are unit upper triangular");
                }
            }
        }
        Ok(Self { model: model.clone(), mat })
    }

    pub fn identity(model: &Arc<LieModel>) -> Self {
        let n = model.matrix_size();
        Self { model: model.clone(), mat: DMatrix::identity(n, n) }
    }

    /// `exp(x)`.
    pub fn exp(x: &AlgebraVector) -> Self {
        Self { model: x.model.clone(), mat: matfn::expm(&x.matrix()) }
    }

    /// Rescales a matrix with positive determinant to determinant one.
    pub fn normalized(model: &Arc<LieModel>, mat: DMatrix<f64>) -> Result<Self> {
        let det = mat.determinant();
        if det <= 0.0 {
            return invalid("determinant must be positive");
        }
        let n = mat.nrows() as f64;
        Self::new(model, mat / det.powf(1.0 / n))
    }

    pub fn model(&self) -> &Arc<LieModel> {
        &self.model
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self.mat.clone().try_inverse().ok_or_else(|| Error::Numerical("singular group element".into()))?;
        Ok(Self { model: self.model.clone(), mat: inv })
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { model: self.model.clone(), mat: &self.mat * &other.mat }
    }

    /// `Ad_g(x) = g x g^{-1}`.
    pub fn adjoint(&self, x: &AlgebraVector) -> Result<AlgebraVector> {
        let inv = self.inverse()?;
        let m = &self.mat * x.matrix() * &inv.mat;
        Ok(AlgebraVector { model: self.model.clone(), coords: self.model.coords_of(&m) })
    }

    /// Matrix of `Ad_g` in the model basis.
    pub fn ad_matrix(&self) -> Result<DMatrix<f64>> {
        let inv = self.inverse()?;
        let cols: Vec<DVector<f64>> = self
            .model
            .basis
            .iter()
            .map(|b| self.model.coords_of(&(&self.mat * b * &inv.mat)))
            .collect();
        Ok(DMatrix::from_columns(&cols))
    }

    /// Principal logarithm, validated by an `exp ∘ log` round trip to `tol`
    /// (relative Frobenius error).
    pub fn log(&self, tol: f64) -> Result<AlgebraVector> {
        let l = matfn::logm(&self.mat)?;
        let back = matfn::expm(&l);
        if (back - &self.mat).norm() > tol * self.mat.norm() {
            return Err(Error::Numerical("logarithm round trip failed".into()));
        }
        AlgebraVector::from_matrix(&self.model, &l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sl2_structure() {
        let m = build_model("sl:2").unwrap();
        assert_eq!(m.dim(), 3);
        let (h, e, f) = (
            AlgebraVector::basis_vector(&m, 0),
            AlgebraVector::basis_vector(&m, 1),
            AlgebraVector::basis_vector(&m, 2),
        );
        assert_eq!(h.bracket(&e).coords().as_slice(), &[0.0, 2.0, 0.0]);
        assert_eq!(h.bracket(&f).coords().as_slice(), &[0.0, 0.0, -2.0]);
        assert_eq!(e.bracket(&f).coords().as_slice(), &[1.0, 0.0, 0.0]);
        assert_eq!(ad_operator(&h), DMatrix::from_diagonal(&DVector::from_vec(vec![0.0, 2.0, -2.0])));
        // H/√2, E, F is orthonormal.
        let y = h.orthonormal_coords();
        assert!((y[0] - 2f64.sqrt()).abs() < 1e-15 && y[1] == 0.0 && y[2] == 0.0);
    }

    #[test]
    fn heisenberg_structure() {
        let m = build_model("heisenberg3").unwrap();
        let nonzero: Vec<_> = (0..3)
            .flat_map(|i| (0..3).flat_map(move |j| (0..3).map(move |k| (i, j, k))))
            .filter(|&(i, j, k)| i < j && m.structure_constant(i, j, k) != 0.0)
            .collect();
        assert_eq!(nonzero, vec![(0, 1, 2)]);
        assert_eq!(m.structure_constant(0, 1, 2), 1.0);
        let th = m.cartan_involution();
        assert_eq!(th * th, DMatrix::identity(3, 3));
    }

    #[test]
    fn jacobi_and_involution() {
        for name in ["sl:2", "sl:3", "sl:4", "heisenberg3"] {
            let m = build_model(name).unwrap();
            assert!(m.jacobi_residual() <= 1e-12, "{name}");
            let th = m.cartan_involution();
            assert!((th * th - DMatrix::identity(m.dim(), m.dim())).amax() < 1e-12);
        }
        assert_eq!(build_model("sl:3").unwrap().dim(), 8);
        assert!(build_model("sl:6").is_err() && build_model("so:3").is_err());
    }

    #[test]
    fn ad_traceless_and_symmetric_spectrum() {
        let m = build_model("sl:3").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = AlgebraVector::random(&m, &mut rng);
        let ad = ad_operator(&x);
        assert!(ad.trace().abs() < 1e-12);
        let mut ev: Vec<_> = matfn::eigenvalues(&ad).unwrap().iter().map(|c| (c.re, c.im)).collect();
        let neg: Vec<_> = ev.iter().map(|&(a, b)| (-a, -b)).collect();
        for (a, b) in neg {
            let pos = ev
                .iter()
                .position(|&(c, d)| (c - a).abs() < 1e-8 && (d - b).abs() < 1e-8)
                .expect("eigenvalue pairs up");
            ev.remove(pos);
        }
        assert!(ev.is_empty());
    }

    #[test]
    fn group_validation_and_log() {
        let m = build_model("sl:2").unwrap();
        assert!(GroupMatrix::new(&m, DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0])).is_err());
        let x = AlgebraVector::new(&m, vec![0.2, -0.3, 0.1]).unwrap();
        let g = GroupMatrix::exp(&x);
        let back = g.log(1e-10).unwrap();
        assert!((back.coords() - x.coords()).amax() < 1e-12);
        let h = build_model("heisenberg3").unwrap();
        assert!(GroupMatrix::new(&h, DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 0.0, 1.0, 4.0, 0.0, 0.0, 1.0])).is_ok());
        assert!(GroupMatrix::new(&h, DMatrix::identity(3, 3) * 2.0).is_err());
    }
}
