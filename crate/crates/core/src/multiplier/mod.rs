//! Linear and multilinear Fourier multipliers on finite groups.
//!
//! A symbol of arity `n` is a dense table `m(s_1, …, s_n)` and acts by
//! `T_m(λ(f_1), …, λ(f_n)) = Σ m(s) f_1(s_1) ⋯ f_n(s_n) λ(s_1 ⋯ s_n)`.

mod identities;
mod optimize;
mod transference;

use std::io::{Read, Write};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::AlgebraElement;
use crate::error::{invalid, Error, Result};
use crate::group::{same_group, FiniteGroup, GroupSubset, SubgroupEmbedding};
use crate::Complex;

pub use identities::{consummation_residual, nested_residual, translation_norm_transport, translation_residual};
pub use optimize::{estimate_norm, estimate_norm_seeded, multiplier_ratio, NormEstimate, OptimizerConfig};
pub use transference::{hertz_schur_transference, TransferenceResidual};

/// Largest admissible table size `N^n`.
pub const MAX_TABLE: usize = 1 << 24;

/// A bounded function on `G^n`, stored row-major with the first argument
/// most significant.
#[derive(Clone, Debug)]
pub struct Symbol {
    group: Arc<FiniteGroup>,
    arity: usize,
    values: Vec<Complex>,
}

impl Symbol {
    pub fn new(group: &Arc<FiniteGroup>, arity: usize, values: Vec<Complex>) -> Result<Self> {
        let size = table_size(group.order(), arity)?;
        if values.len() != size {
            return invalid(format!("symbol table has {} entries, expected {size}", values.len()));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return invalid("symbol has non-finite values");
        }
        Ok(Self { group: group.clone(), arity, values })
    }

    pub fn from_fn(group: &Arc<FiniteGroup>, arity: usize, f: impl Fn(&[usize]) -> Complex) -> Result<Self> {
        let size = table_size(group.order(), arity)?;
        let n = group.order();
        let mut idx = vec![0usize; arity];
        let mut values = Vec::with_capacity(size);
        for _ in 0..size {
            values.push(f(&idx));
            for k in (0..arity).rev() {
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
            }
        }
        Self::new(group, arity, values)
    }

    pub fn constant(group: &Arc<FiniteGroup>, arity: usize, c: Complex) -> Result<Self> {
        let size = table_size(group.order(), arity)?;
        Self::new(group, arity, vec![c; size])
    }

    /// Builds a symbol from a named family:
    ///
    /// * `gaussian:σ`: `Π_i exp(-|s_i|^2 / 2σ^2)` with `|s|` the word length;
    /// * `indicator:<subset>`: `Π_i 1_S(s_i)` for a subset spec;
    /// * `random:<seed>`: real and imaginary parts uniform in `[-1, 1]`;
    /// * `constant:<re>[,<im>]`.
    pub fn family(group: &Arc<FiniteGroup>, arity: usize, spec: &str) -> Result<Self> {
        let (kind, arg) = spec.split_once(':').ok_or_else(|| Error::Descriptor(spec.to_string()))?;
        match kind {
            "gaussian" => {
                let sigma: f64 = arg.trim().parse().map_err(|_| Error::Descriptor(spec.to_string()))?;
                if !(sigma > 0.0) {
                    return invalid("gaussian width must be positive");
                }
                let len = group.word_lengths();
                if len.iter().any(|&l| l == usize::MAX) {
                    return invalid(format!("{} has no generating set for word lengths", group.label()));
                }
                Self::from_fn(group, arity, |s| {
                    let r2: f64 = s.iter().map(|&x| (len[x] * len[x]) as f64).sum();
                    Complex::new((-r2 / (2.0 * sigma * sigma)).exp(), 0.0)
                })
            }
            "indicator" => {
                let set = GroupSubset::parse(group, arg)?;
                let mask = set.mask();
                Self::from_fn(group, arity, |s| {
                    Complex::new(if s.iter().all(|&x| mask[x]) { 1.0 } else { 0.0 }, 0.0)
                })
            }
            "random" => {
                let seed: u64 = arg.trim().parse().map_err(|_| Error::Descriptor(spec.to_string()))?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let size = table_size(group.order(), arity)?;
                let values = (0..size)
                    .map(|_| Complex::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
                    .collect();
                Self::new(group, arity, values)
            }
            "constant" => {
                let parts: Vec<f64> = arg
                    .split(',')
                    .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Descriptor(spec.to_string())))
                    .collect::<Result<_>>()?;
                let c = match parts.as_slice() {
                    [re] => Complex::new(*re, 0.0),
                    [re, im] => Complex::new(*re, *im),
                    _ => return Err(Error::Descriptor(spec.to_string())),
                };
                Self::constant(group, arity, c)
            }
            _ => Err(Error::Descriptor(spec.to_string())),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[Complex] {
        &self.values
    }

    pub fn index(&self, s: &[usize]) -> usize {
        let n = self.group.order();
        s.iter().fold(0, |acc, &x| acc * n + x)
    }

    pub fn get(&self, s: &[usize]) -> Complex {
        self.values[self.index(s)]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `m^∨(s) = m(s^{-1})`, defined for linear symbols.
    pub fn reflect(&self) -> Result<Self> {
        if self.arity != 1 {
            return Err(Error::Arity { expected: 1, got: self.arity });
        }
        let g = &self.group;
        Self::from_fn(g, 1, |s| self.values[g.inv(s[0])])
    }

    /// Output coefficients of `T_m(f_1, …, f_n)`.
    pub fn apply(&self, fs: &[&AlgebraElement]) -> Result<AlgebraElement> {
        self.check_args(fs)?;
        let g = &self.group;
        let mut out = vec![Complex::new(0.0, 0.0); g.order()];
        let coeffs: Vec<&[Complex]> = fs.iter().map(|f| f.coeffs()).collect();
        let supports: Vec<Vec<usize>> = fs.iter().map(|f| f.support()).collect();
        self.walk(&supports, &mut |s, prod, idx| {
            let mut w = self.values[idx];
            for (k, &x) in s.iter().enumerate() {
                w *= coeffs[k][x];
            }
            out[prod] += w;
        });
        AlgebraElement::new(g, out)
    }

    pub(crate) fn check_args(&self, fs: &[&AlgebraElement]) -> Result<()> {
        if fs.len() != self.arity {
            return Err(Error::Arity { expected: self.arity, got: fs.len() });
        }
        for f in fs {
            if !same_group(f.group(), &self.group) {
                return Err(Error::ParentMismatch(self.group.label().into(), f.group().label().into()));
            }
        }
        Ok(())
    }

    /// Visits every tuple `s ∈ S_1 × ⋯ × S_n` with the product `s_1 ⋯ s_n`
    /// and the table index of `s`.
    pub(crate) fn walk(&self, supports: &[Vec<usize>], visit: &mut dyn FnMut(&[usize], usize, usize)) {
        let g = &self.group;
        let n = g.order();
        let k = self.arity;
        if supports.iter().any(|s| s.is_empty()) {
            return;
        }
        let mut pos = vec![0usize; k];
        let mut s = vec![0usize; k];
        let mut prods = vec![g.identity(); k + 1];
        let mut idxs = vec![0usize; k + 1];
        let mut level = 0;
        loop {
            if level == k {
                visit(&s, prods[k], idxs[k]);
                level -= 1;
                pos[level] += 1;
                continue;
            }
            if pos[level] == supports[level].len() {
                if level == 0 {
                    break;
                }
                pos[level] = 0;
                level -= 1;
                pos[level] += 1;
                continue;
            }
            let x = supports[level][pos[level]];
            s[level] = x;
            prods[level + 1] = g.mul(prods[level], x);
            idxs[level + 1] = idxs[level] * n + x;
            level += 1;
            if level < k {
                pos[level] = 0;
            }
        }
    }

    /// `m|_{H^n}` along an embedding `H → G`.
    pub fn restrict(&self, emb: &SubgroupEmbedding) -> Result<Self> {
        if !same_group(emb.amb(), &self.group) {
            return Err(Error::ParentMismatch(emb.amb().label().into(), self.group.label().into()));
        }
        Self::from_fn(emb.sub(), self.arity, |h| {
            let mapped: Vec<usize> = h.iter().map(|&x| emb.apply(x)).collect();
            self.get(&mapped)
        })
    }

    /// Writes rows `i_1,…,i_n,re,im` for all nonzero entries.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let mut header: Vec<String> = (1..=self.arity).map(|i| format!("i{i}")).collect();
        header.push("re".into());
        header.push("im".into());
        wtr.write_record(&header)?;
        let n = self.group.order();
        for (idx, v) in self.values.iter().enumerate() {
            if *v == Complex::new(0.0, 0.0) {
                continue;
            }
            let mut rec = Vec::with_capacity(self.arity + 2);
            let mut rem = idx;
            let mut s = vec![0usize; self.arity];
            for k in (0..self.arity).rev() {
                s[k] = rem % n;
                rem /= n;
            }
            rec.extend(s.iter().map(|x| x.to_string()));
            rec.push(format!("{:?}", v.re));
            rec.push(format!("{:?}", v.im));
            wtr.write_record(&rec)?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Reads rows `i_1,…,i_n,re,im`; missing entries are zero. A header row
    /// is optional.
    pub fn read_csv<R: Read>(group: &Arc<FiniteGroup>, r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(r);
        let mut rows = Vec::new();
        let mut arity = None;
        for rec in rdr.records() {
            let rec = rec?;
            if rec.get(0).map_or(true, |f| f.parse::<usize>().is_err()) {
                continue;
            }
            if rec.len() < 3 {
                return invalid("symbol rows need at least one index and re, im columns");
            }
            let a = rec.len() - 2;
            if *arity.get_or_insert(a) != a {
                return invalid("symbol rows have inconsistent arity");
            }
            let idx: Vec<usize> = (0..a)
                .map(|i| rec[i].parse::<usize>().map_err(|_| Error::Invalid(format!("bad index `{}`", &rec[i]))))
                .collect::<Result<_>>()?;
            let parse = |t: &str| t.parse::<f64>().map_err(|_| Error::Invalid(format!("bad value `{t}`")));
            rows.push((idx, Complex::new(parse(&rec[a])?, parse(&rec[a + 1])?)));
        }
        let arity = arity.ok_or_else(|| Error::Invalid("empty symbol file".into()))?;
        let size = table_size(group.order(), arity)?;
        let mut values = vec![Complex::new(0.0, 0.0); size];
        let n = group.order();
        for (idx, v) in rows {
            if idx.iter().any(|&x| x >= n) {
                return invalid("symbol index out of range");
            }
            values[idx.iter().fold(0, |acc, &x| acc * n + x)] = v;
        }
        Self::new(group, arity, values)
    }
}

fn table_size(n: usize, arity: usize) -> Result<usize> {
    if arity == 0 {
        return invalid("symbol arity must be at least 1");
    }
    let mut size = 1usize;
    for _ in 0..arity {
        size = size.checked_mul(n).filter(|&s| s <= MAX_TABLE).ok_or_else(|| {
            Error::Invalid(format!("symbol table {n}^{arity} exceeds {MAX_TABLE} entries"))
        })?;
    }
    Ok(size)
}

/// Free-function form of [`Symbol::apply`].
pub fn apply_multiplier(m: &Symbol, fs: &[&AlgebraElement]) -> Result<AlgebraElement> {
    m.apply(fs)
}

pub fn restrict_symbol(m: &Symbol, emb: &SubgroupEmbedding) -> Result<Symbol> {
    m.restrict(emb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(s: &str) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::parse(s).unwrap())
    }

    #[test]
    fn constant_symbol_is_convolution() {
        let g = group("dihedral:3");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = AlgebraElement::random_gaussian(&g, None, &mut rng);
        let h = AlgebraElement::random_gaussian(&g, None, &mut rng);
        let m = Symbol::constant(&g, 2, Complex::new(1.0, 0.0)).unwrap();
        let out = m.apply(&[&f, &h]).unwrap();
        assert!(out.sub(&f.convolve(&h).unwrap()).unwrap().l2() < 1e-12);
    }

    #[test]
    fn point_mass_eigenvector() {
        let g = group("cyclic:5");
        let m = Symbol::family(&g, 1, "random:4").unwrap();
        let out = m.apply(&[&AlgebraElement::delta(&g, 3)]).unwrap();
        assert_eq!(out.coeffs()[3], m.get(&[3]));
        assert_eq!(out.support(), vec![3]);
    }

    #[test]
    fn bilinear_brute_force_on_z3() {
        let g = group("cyclic:3");
        let m = Symbol::family(&g, 2, "random:8").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = AlgebraElement::random_gaussian(&g, None, &mut rng);
        let h = AlgebraElement::random_gaussian(&g, None, &mut rng);
        let mut expected = [Complex::new(0.0, 0.0); 3];
        for a in 0..3 {
            for b in 0..3 {
                expected[(a + b) % 3] += m.values()[a * 3 + b] * f.coeffs()[a] * h.coeffs()[b];
            }
        }
        let out = m.apply(&[&f, &h]).unwrap();
        for r in 0..3 {
            assert!((out.coeffs()[r] - expected[r]).norm() < 1e-14);
        }
    }

    #[test]
    fn restriction_by_index_arithmetic() {
        let g = group("cyclic:4");
        let m = Symbol::new(&g, 1, [1.0, 2.0, 3.0, 4.0].iter().map(|&v| Complex::new(v, 0.0)).collect()).unwrap();
        let emb = SubgroupEmbedding::from_subset(&GroupSubset::new(&g, [0, 2]).unwrap()).unwrap();
        let r = m.restrict(&emb).unwrap();
        assert_eq!(r.values(), &[Complex::new(1.0, 0.0), Complex::new(3.0, 0.0)]);
        let same = m.restrict(&SubgroupEmbedding::identity(&g)).unwrap();
        assert_eq!(same.values(), m.values());
    }

    #[test]
    fn csv_round_trip() {
        let g = group("dihedral:2");
        let m = Symbol::family(&g, 2, "random:3").unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let back = Symbol::read_csv(&g, buf.as_slice()).unwrap();
        assert_eq!(back.values(), m.values());
    }

    #[test]
    fn families() {
        let g = group("cyclic:6");
        let gauss = Symbol::family(&g, 1, "gaussian:1").unwrap();
        assert_eq!(gauss.get(&[0]), Complex::new(1.0, 0.0));
        assert!((gauss.get(&[5]).re - (-0.5f64).exp()).abs() < 1e-15);
        let ind = Symbol::family(&g, 2, "indicator:indices:0,3").unwrap();
        assert_eq!(ind.get(&[3, 0]), Complex::new(1.0, 0.0));
        assert_eq!(ind.get(&[3, 1]), Complex::new(0.0, 0.0));
        assert!(Symbol::family(&g, 1, "bogus:1").is_err());
        assert!(Symbol::constant(&g, 10, Complex::new(1.0, 0.0)).is_err());
    }
}
