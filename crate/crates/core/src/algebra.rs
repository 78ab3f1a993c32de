//! Elements of the group algebra `C[G]` and their regular representation.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::group::{same_group, FiniteGroup, GroupSubset};
use crate::Complex;

/// A coefficient function `f` on a finite group, standing for `λ(f) = Σ f(s) λ(s)`.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    group: Arc<FiniteGroup>,
    coeffs: Vec<Complex>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.coeffs == other.coeffs
    }
}

impl AlgebraElement {
    pub fn new(group: &Arc<FiniteGroup>, coeffs: Vec<Complex>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::Invalid(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        Ok(Self { group: group.clone(), coeffs })
    }

    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        Self { group: group.clone(), coeffs: vec![Complex::new(0.0, 0.0); group.order()] }
    }

    pub fn delta(group: &Arc<FiniteGroup>, s: usize) -> Self {
        let mut f = Self::zero(group);
        f.coeffs[s] = Complex::new(1.0, 0.0);
        f
    }

    pub fn indicator(set: &GroupSubset) -> Self {
        let mut f = Self::zero(set.parent());
        for &x in set.members() {
            f.coeffs[x] = Complex::new(1.0, 0.0);
        }
        f
    }

    pub fn from_real(group: &Arc<FiniteGroup>, values: &[f64]) -> Result<Self> {
        Self::new(group, values.iter().map(|&v| Complex::new(v, 0.0)).collect())
    }

    /// Independent standard complex Gaussian coefficients on `support`
    /// (all of `G` when `None`).
    pub fn random_gaussian<R: Rng + ?Sized>(group: &Arc<FiniteGroup>, support: Option<&[usize]>, rng: &mut R) -> Self {
        let mut f = Self::zero(group);
        let mut fill = |i: usize, rng: &mut R| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            f.coeffs[i] = Complex::new(re, im);
        };
        match support {
            Some(s) => s.iter().for_each(|&i| fill(i, rng)),
            None => (0..group.order()).for_each(|i| fill(i, rng)),
        }
        f
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex> {
        self.coeffs
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| self.coeffs[i] != Complex::new(0.0, 0.0)).collect()
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::ParentMismatch(self.group.label().into(), other.group.label().into()))
        }
    }

    /// `(f * g)(s) = Σ_t f(t) g(t^{-1} s)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let g = &self.group;
        let mut out = vec![Complex::new(0.0, 0.0); g.order()];
        for (t, &ft) in self.coeffs.iter().enumerate() {
            if ft == Complex::new(0.0, 0.0) {
                continue;
            }
            for (u, &gu) in other.coeffs.iter().enumerate() {
                out[g.mul(t, u)] += ft * gu;
            }
        }
        Ok(Self { group: g.clone(), coeffs: out })
    }

    /// `f*(s) = conj f(s^{-1})`.
    pub fn involution(&self) -> Self {
        let g = &self.group;
        let coeffs = (0..g.order()).map(|s| self.coeffs[g.inv(s)].conj()).collect();
        Self { group: g.clone(), coeffs }
    }

    /// `f^∨(s) = f(s^{-1})`.
    pub fn reflect(&self) -> Self {
        let g = &self.group;
        let coeffs = (0..g.order()).map(|s| self.coeffs[g.inv(s)]).collect();
        Self { group: g.clone(), coeffs }
    }

    /// Matrix of `λ(f)` on `ℓ2(G)`: entry `(t, u)` is `f(t u^{-1})`.
    pub fn regular_matrix(&self) -> DMatrix<Complex> {
        let g = &self.group;
        let n = g.order();
        DMatrix::from_fn(n, n, |t, u| self.coeffs[g.mul(t, g.inv(u))])
    }

    /// Reads off the coefficients of a matrix that lies in `λ(C[G])`:
    /// `f(s) = τ(λ(s)^* M) = N^{-1} Σ_u M[s u, u]`.
    pub fn from_regular_matrix(group: &Arc<FiniteGroup>, m: &DMatrix<Complex>) -> Result<Self> {
        let n = group.order();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::Invalid("matrix size differs from group order".into()));
        }
        let scale = 1.0 / n as f64;
        let coeffs = (0..n)
            .map(|s| (0..n).map(|u| m[(group.mul(s, u), u)]).sum::<Complex>() * scale)
            .collect();
        Ok(Self { group: group.clone(), coeffs })
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self { group: self.group.clone(), coeffs: self.coeffs.iter().map(|&x| x * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { group: self.group.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex::new(-1.0, 0.0)))
    }

    /// Euclidean norm of the coefficient vector.
    pub fn l2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `λ(a) x λ(b)` on point masses, i.e. `s ↦ f(a^{-1} s b^{-1})`.
    pub fn translate(&self, a: usize, b: usize) -> Self {
        let g = &self.group;
        let mut out = vec![Complex::new(0.0, 0.0); g.order()];
        for (s, &c) in self.coeffs.iter().enumerate() {
            out[g.mul(g.mul(a, s), b)] = c;
        }
        Self { group: g.clone(), coeffs: out }
    }

    /// Pushes `f` forward along an index map into a larger group.
    pub fn push_forward(&self, target: &Arc<FiniteGroup>, map: &[usize]) -> Self {
        let mut out = Self::zero(target);
        for (s, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[map[s]] += c;
        }
        out
    }
}

/// Free-function form of [`AlgebraElement::convolve`].
pub fn convolve(f: &AlgebraElement, g: &AlgebraElement) -> Result<AlgebraElement> {
    f.convolve(g)
}

pub fn involution(f: &AlgebraElement) -> AlgebraElement {
    f.involution()
}

pub fn regular_matrix(f: &AlgebraElement) -> DMatrix<Complex> {
    f.regular_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn group(s: &str) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::parse(s).unwrap())
    }

    #[test]
    fn convolution_basics() {
        let g = group("cyclic:4");
        let d1 = AlgebraElement::delta(&g, 1);
        assert_eq!(d1.convolve(&d1).unwrap(), AlgebraElement::delta(&g, 2));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = AlgebraElement::random_gaussian(&g, None, &mut rng);
        assert_eq!(AlgebraElement::delta(&g, 0).convolve(&f).unwrap(), f);
    }

    #[test]
    fn convolution_matches_matrix_product_on_d3() {
        let g = group("dihedral:3");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = AlgebraElement::random_gaussian(&g, None, &mut rng);
        let h = AlgebraElement::random_gaussian(&g, None, &mut rng);
        // Oracle: plain 6x6 matrix product of the two regular matrices.
        let (a, b) = (f.regular_matrix(), h.regular_matrix());
        let mut prod = DMatrix::<Complex>::zeros(6, 6);
        for i in 0..6 {
            for j in 0..6 {
                for k in 0..6 {
                    prod[(i, j)] += a[(i, k)] * b[(k, j)];
                }
            }
        }
        let conv = f.convolve(&h).unwrap().regular_matrix();
        assert!((conv - prod).camax() < 1e-12);
    }

    #[test]
    fn involution_examples() {
        let g = group("cyclic:3");
        assert_eq!(AlgebraElement::delta(&g, 1).involution(), AlgebraElement::delta(&g, 2));
        assert_eq!(AlgebraElement::delta(&g, 0).involution(), AlgebraElement::delta(&g, 0));
        let d = group("dihedral:4");
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = AlgebraElement::random_gaussian(&d, None, &mut rng);
        assert!((f.involution().regular_matrix() - f.regular_matrix().adjoint()).camax() < 1e-15);
        assert_eq!(f.involution().involution(), f);
    }

    #[test]
    fn regular_matrix_examples() {
        let g = group("cyclic:2");
        let swap = AlgebraElement::delta(&g, 1).regular_matrix();
        assert_eq!(swap[(0, 1)], Complex::new(1.0, 0.0));
        assert_eq!(swap[(0, 0)], Complex::new(0.0, 0.0));
        let d3 = group("dihedral:3");
        let w = [0.1, 0.2, 0.05, 0.3, 0.15, 0.2];
        let m = AlgebraElement::from_real(&d3, &w).unwrap().regular_matrix();
        for i in 0..6 {
            let row: Complex = m.row(i).iter().sum();
            let col: Complex = m.column(i).iter().sum();
            assert!((row.re - 1.0).abs() < 1e-12 && (col.re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn matrix_round_trip() {
        let g = group("heisenberg:2");
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = AlgebraElement::random_gaussian(&g, None, &mut rng);
        let back = AlgebraElement::from_regular_matrix(&g, &f.regular_matrix()).unwrap();
        assert!(f.sub(&back).unwrap().l2() < 1e-14);
    }
}
