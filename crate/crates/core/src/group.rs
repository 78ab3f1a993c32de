//! Finite groups stored as multiplication tables.
//!
//! Element orderings are fixed per constructor:
//!
//! * `cyclic:N`: index `k` is `k mod N`.
//! * `dihedral:N`: index `k < N` is `r^k`, index `N + k` is `r^k s`, with
//!   `s r s = r^{-1}`. Order `2N`.
//! * `heisenberg:N`: index `a N^2 + b N + c` is the triple `(a, b, c)` with
//!   `(x, y, z)(x', y', z') = (x + x', y + y', z + z' + x y')` mod `N`.
//! * `product:A,B`: index `i |B| + j` is the pair `(a_i, b_j)`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const MAX_ORDER: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupDescriptor {
    Cyclic(usize),
    Dihedral(usize),
    Heisenberg(usize),
    Product(Box<GroupDescriptor>, Box<GroupDescriptor>),
}

impl GroupDescriptor {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let text = strip_parens(text);
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::Descriptor(text.to_string()))?;
        let number = |s: &str| -> Result<usize> {
            s.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::Descriptor(text.to_string()))
        };
        match kind.trim() {
            "cyclic" => Ok(Self::Cyclic(number(rest)?)),
            "dihedral" => Ok(Self::Dihedral(number(rest)?)),
            "heisenberg" => Ok(Self::Heisenberg(number(rest)?)),
            "product" => {
                let (a, b) = split_factors(rest).ok_or_else(|| Error::Descriptor(text.to_string()))?;
                Ok(Self::Product(Box::new(Self::parse(a)?), Box::new(Self::parse(b)?)))
            }
            _ => Err(Error::Descriptor(text.to_string())),
        }
    }

    /// Order of the described group, or `None` on arithmetic overflow.
    pub fn order(&self) -> Option<usize> {
        match self {
            Self::Cyclic(n) => Some(*n),
            Self::Dihedral(n) => n.checked_mul(2),
            Self::Heisenberg(n) => n.checked_mul(*n)?.checked_mul(*n),
            Self::Product(a, b) => a.order()?.checked_mul(b.order()?),
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Cyclic(n) => write!(f, "cyclic:{n}"),
            Self::Dihedral(n) => write!(f, "dihedral:{n}"),
            Self::Heisenberg(n) => write!(f, "heisenberg:{n}"),
            Self::Product(a, b) => {
                if matches!(**a, Self::Product(..)) {
                    write!(f, "product:({a}),{b}")
                } else {
                    write!(f, "product:{a},{b}")
                }
            }
        }
    }
}

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    if s.starts_with('(') && s.ends_with(')') {
        let mut depth = 0i32;
        for (i, c) in s.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 && i != s.len() - 1 {
                        return s;
                    }
                }
                _ => {}
            }
        }
        return strip_parens(&s[1..s.len() - 1]);
    }
    s
}

fn split_factors(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GroupJson {
    order: usize,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    identity: usize,
    label: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    generators: Vec<usize>,
}

/// A finite group given by its multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<usize>,
    identity: usize,
    label: String,
    generators: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from a product function on `0..order`. The table is
    /// validated for identity, inverses and Latin-square structure.
    pub fn from_fn(
        order: usize,
        label: impl Into<String>,
        generators: Vec<usize>,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        if order == 0 {
            return invalid("group order must be positive");
        }
        if order > MAX_ORDER {
            return Err(Error::OrderOverflow(order));
        }
        let mut table = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                let c = mul(a, b);
                if c >= order {
                    return invalid(format!("product {a}*{b} = {c} out of range"));
                }
                table[a * order + b] = c as u32;
            }
        }
        Self::from_table(order, table, label.into(), generators)
    }

    fn from_table(order: usize, mul: Vec<u32>, label: String, generators: Vec<usize>) -> Result<Self> {
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul[e * order + x] as usize == x && mul[x * order + e] as usize == x))
            .ok_or_else(|| Error::Invalid(format!("{label}: no two-sided identity")))?;
        let mut inv = vec![usize::MAX; order];
        for x in 0..order {
            let mut seen_row = vec![false; order];
            let mut seen_col = vec![false; order];
            for y in 0..order {
                let r = mul[x * order + y] as usize;
                let c = mul[y * order + x] as usize;
                if seen_row[r] || seen_col[c] {
                    return invalid(format!("{label}: table is not a Latin square"));
                }
                seen_row[r] = true;
                seen_col[c] = true;
                if r == identity {
                    inv[x] = y;
                }
            }
        }
        for x in 0..order {
            if mul[inv[x] * order + x] as usize != identity {
                return invalid(format!("{label}: left and right inverses differ"));
            }
        }
        if generators.iter().any(|&g| g >= order) {
            return invalid("generator index out of range");
        }
        Ok(Self { order, mul, inv, identity, label, generators })
    }

    pub fn build(desc: &GroupDescriptor) -> Result<Self> {
        let order = desc.order().ok_or(Error::OrderOverflow(usize::MAX))?;
        if order > MAX_ORDER {
            return Err(Error::OrderOverflow(order));
        }
        let label = desc.to_string();
        match desc {
            GroupDescriptor::Cyclic(n) => {
                let n = *n;
                let gens = if n > 1 { vec![1] } else { vec![] };
                Self::from_fn(n, label, gens, |a, b| (a + b) % n)
            }
            GroupDescriptor::Dihedral(n) => {
                let n = *n;
                let mut gens = vec![];
                if n > 1 {
                    gens.push(1);
                }
                gens.push(n);
                Self::from_fn(2 * n, label, gens, |x, y| {
                    let (a, i) = (x % n, x / n);
                    let (b, j) = (y % n, y / n);
                    let c = if i == 0 { (a + b) % n } else { (a + n - b) % n };
                    c + n * ((i + j) % 2)
                })
            }
            GroupDescriptor::Heisenberg(n) => {
                let n = *n;
                let gens = if n > 1 { vec![n * n, n] } else { vec![] };
                Self::from_fn(n * n * n, label, gens, |u, v| {
                    let (x, y, z) = (u / (n * n), (u / n) % n, u % n);
                    let (x2, y2, z2) = (v / (n * n), (v / n) % n, v % n);
                    let a = (x + x2) % n;
                    let b = (y + y2) % n;
                    let c = (z + z2 + x * y2) % n;
                    a * n * n + b * n + c
                })
            }
            GroupDescriptor::Product(a, b) => {
                let g = Self::build(a)?;
                let h = Self::build(b)?;
                Ok(Self::direct_product(&g, &h))
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::build(&GroupDescriptor::parse(text)?)
    }

    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
        let nh = h.order;
        let mut gens: Vec<usize> = g.generators.iter().map(|&a| a * nh + h.identity).collect();
        gens.extend(h.generators.iter().map(|&b| g.identity * nh + b));
        let label = if g.label.starts_with("product:") {
            format!("product:({}),{}", g.label, h.label)
        } else {
            format!("product:{},{}", g.label, h.label)
        };
        Self::from_fn(g.order * nh, label, gens, |x, y| {
            g.mul(x / nh, y / nh) * nh + h.mul(x % nh, y % nh)
        })
        .expect("direct product of valid groups is valid")
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// `s t s^{-1}`.
    #[inline]
    pub fn conj(&self, s: usize, t: usize) -> usize {
        self.mul(self.mul(s, t), self.inv(s))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|x| self.mul(z, x) == self.mul(x, z)))
            .collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Checks associativity on all triples, or on `samples` pseudo-random
    /// triples when given.
    pub fn check_associativity(&self, samples: Option<usize>) -> bool {
        let n = self.order;
        match samples {
            None => (0..n).all(|a| {
                (0..n).all(|b| {
                    let ab = self.mul(a, b);
                    (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
                })
            }),
            Some(k) => {
                let mut state = 0x9e37_79b9_7f4a_7c15u64;
                let mut next = move || {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (state % n as u64) as usize
                };
                (0..k).all(|_| {
                    let (a, b, c) = (next(), next(), next());
                    self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
                })
            }
        }
    }

    /// Word length of every element with respect to the generators and their
    /// inverses; unreachable elements get `usize::MAX`.
    pub fn word_lengths(&self) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.order];
        let mut queue = VecDeque::new();
        dist[self.identity] = 0;
        queue.push_back(self.identity);
        let steps: Vec<usize> = self
            .generators
            .iter()
            .flat_map(|&g| [g, self.inv(g)])
            .collect();
        while let Some(x) = queue.pop_front() {
            for &g in &steps {
                let y = self.mul(x, g);
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn to_json(&self) -> String {
        let json = GroupJson {
            order: self.order,
            mul: (0..self.order)
                .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
                .collect(),
            inv: self.inv.clone(),
            identity: self.identity,
            label: self.label.clone(),
            generators: self.generators.clone(),
        };
        serde_json::to_string(&json).expect("group serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let json: GroupJson = serde_json::from_str(text)?;
        if json.mul.len() != json.order || json.mul.iter().any(|r| r.len() != json.order) {
            return invalid("multiplication table shape does not match order");
        }
        let g = Self::from_fn(json.order, json.label, json.generators, |a, b| json.mul[a][b])?;
        if g.identity != json.identity || g.inv != json.inv {
            return invalid("identity or inverse table inconsistent with multiplication");
        }
        Ok(g)
    }
}

/// A set of elements of a finite group.
#[derive(Clone, Debug)]
pub struct GroupSubset {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
}

impl PartialEq for GroupSubset {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.parent, &other.parent) && self.members == other.members
    }
}

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || (a.order == b.order && a.label == b.label && a.mul == b.mul)
}

impl GroupSubset {
    pub fn new(parent: &Arc<FiniteGroup>, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&m| m >= parent.order()) {
            return invalid(format!("element {bad} not in group of order {}", parent.order()));
        }
        Ok(Self { parent: parent.clone(), members: set.into_iter().collect() })
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Self {
        Self { parent: parent.clone(), members: (0..parent.order()).collect() }
    }

    pub fn identity(parent: &Arc<FiniteGroup>) -> Self {
        Self { parent: parent.clone(), members: vec![parent.identity()] }
    }

    /// Parses `indices:0,3,5`, `ball:k`, `all`, `identity` or `empty`.
    pub fn parse(parent: &Arc<FiniteGroup>, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        match spec {
            "all" => return Ok(Self::whole(parent)),
            "identity" => return Ok(Self::identity(parent)),
            "empty" | "indices:" => return Self::new(parent, []),
            _ => {}
        }
        let (kind, rest) = spec
            .split_once(':')
            .ok_or_else(|| Error::Descriptor(spec.to_string()))?;
        match kind {
            "indices" => {
                let idx = rest
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Descriptor(spec.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                Self::new(parent, idx)
            }
            "ball" => {
                let k: usize = rest.trim().parse().map_err(|_| Error::Descriptor(spec.to_string()))?;
                Self::ball(parent, k)
            }
            _ => Err(Error::Descriptor(spec.to_string())),
        }
    }

    /// Word ball of radius `k` in the generators and their inverses.
    pub fn ball(parent: &Arc<FiniteGroup>, k: usize) -> Result<Self> {
        if parent.generators().is_empty() && parent.order() > 1 {
            return invalid(format!("{} has no recorded generators", parent.label()));
        }
        let len = parent.word_lengths();
        Self::new(parent, (0..parent.order()).filter(|&x| len[x] <= k))
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.parent.order()];
        for &x in &self.members {
            m[x] = true;
        }
        m
    }

    pub fn is_symmetric(&self) -> bool {
        self.members.iter().all(|&x| self.contains(self.parent.inv(x)))
    }

    pub fn inverse(&self) -> Self {
        Self {
            parent: self.parent.clone(),
            members: sorted(self.members.iter().map(|&x| self.parent.inv(x))),
        }
    }

    pub fn is_subgroup(&self) -> bool {
        !self.is_empty()
            && self.contains(self.parent.identity())
            && self.is_symmetric()
            && self
                .members
                .iter()
                .all(|&a| self.members.iter().all(|&b| self.contains(self.parent.mul(a, b))))
    }

    pub fn is_normal_subgroup(&self) -> bool {
        self.is_subgroup()
            && (0..self.parent.order())
                .all(|g| self.members.iter().all(|&h| self.contains(self.parent.conj(g, h))))
    }

    /// `s V s^{-1}`.
    pub fn conjugate(&self, s: usize) -> Self {
        Self {
            parent: self.parent.clone(),
            members: sorted(self.members.iter().map(|&v| self.parent.conj(s, v))),
        }
    }

    /// `a V b`.
    pub fn translate(&self, a: usize, b: usize) -> Self {
        let g = &self.parent;
        Self {
            parent: g.clone(),
            members: sorted(self.members.iter().map(|&v| g.mul(g.mul(a, v), b))),
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        Self {
            parent: self.parent.clone(),
            members: self.members.iter().copied().filter(|&x| other.contains(x)).collect(),
        }
    }

    pub fn spec(&self) -> String {
        let idx: Vec<String> = self.members.iter().map(|x| x.to_string()).collect();
        format!("indices:{}", idx.join(","))
    }
}

fn sorted(it: impl Iterator<Item = usize>) -> Vec<usize> {
    let set: BTreeSet<usize> = it.collect();
    set.into_iter().collect()
}

/// `s V s^{-1}` for a subset `V`.
pub fn conjugate_set(s: usize, v: &GroupSubset) -> GroupSubset {
    v.conjugate(s)
}

/// An injective homomorphism `sub -> amb`.
#[derive(Clone, Debug)]
pub struct SubgroupEmbedding {
    sub: Arc<FiniteGroup>,
    amb: Arc<FiniteGroup>,
    map: Vec<usize>,
}

impl SubgroupEmbedding {
    pub fn new(sub: Arc<FiniteGroup>, amb: Arc<FiniteGroup>, map: Vec<usize>) -> Result<Self> {
        if map.len() != sub.order() {
            return invalid("embedding table length differs from subgroup order");
        }
        if map.iter().any(|&m| m >= amb.order()) {
            return invalid("embedding target out of range");
        }
        if BTreeSet::from_iter(map.iter().copied()).len() != map.len() {
            return invalid("embedding is not injective");
        }
        if map[sub.identity()] != amb.identity() {
            return invalid("embedding does not preserve the identity");
        }
        for x in 0..sub.order() {
            for y in 0..sub.order() {
                if map[sub.mul(x, y)] != amb.mul(map[x], map[y]) {
                    return invalid("embedding is not a homomorphism");
                }
            }
        }
        Ok(Self { sub, amb, map })
    }

    /// The subgroup carried by a closed subset of `amb`, with elements
    /// indexed in increasing order of their ambient index.
    pub fn from_subset(subset: &GroupSubset) -> Result<Self> {
        if !subset.is_subgroup() {
            return invalid(format!("{} is not a subgroup", subset.spec()));
        }
        let amb = subset.parent().clone();
        let members = subset.members().to_vec();
        let pos = |x: usize| members.binary_search(&x).expect("closed subset");
        let label = format!("{}<{}>", amb.label(), subset.spec());
        let sub = FiniteGroup::from_fn(members.len(), label, vec![], |a, b| pos(amb.mul(members[a], members[b])))?;
        let mut sub = sub;
        sub.generators = minimal_generators(&sub);
        Ok(Self { sub: Arc::new(sub), amb, map: members })
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> Self {
        Self { sub: g.clone(), amb: g.clone(), map: (0..g.order()).collect() }
    }

    pub fn sub(&self) -> &Arc<FiniteGroup> {
        &self.sub
    }

    pub fn amb(&self) -> &Arc<FiniteGroup> {
        &self.amb
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, h: usize) -> usize {
        self.map[h]
    }

    pub fn image(&self) -> GroupSubset {
        GroupSubset::new(&self.amb, self.map.iter().copied()).expect("image in range")
    }
}

fn minimal_generators(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut reached = vec![false; g.order()];
    reached[g.identity()] = true;
    let close = |gens: &[usize]| {
        let mut seen = vec![false; g.order()];
        seen[g.identity()] = true;
        let mut stack = vec![g.identity()];
        while let Some(x) = stack.pop() {
            for &s in gens {
                let y = g.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    };
    for x in 0..g.order() {
        if !reached[x] {
            gens.push(x);
            reached = close(&gens);
        }
    }
    gens
}

/// The quotient `G/H` by a normal subgroup. Cosets are indexed in increasing
/// order of their smallest member.
#[derive(Clone, Debug)]
pub struct Quotient {
    group: Arc<FiniteGroup>,
    ambient: Arc<FiniteGroup>,
    normal: GroupSubset,
    coset_of: Vec<usize>,
    reps: Vec<usize>,
}

impl Quotient {
    pub fn new(normal: &GroupSubset) -> Result<Self> {
        if !normal.is_normal_subgroup() {
            return Err(Error::Precondition(format!("{} is not a normal subgroup", normal.spec())));
        }
        let g = normal.parent().clone();
        let mut coset_of = vec![usize::MAX; g.order()];
        let mut reps = Vec::new();
        for x in 0..g.order() {
            if coset_of[x] == usize::MAX {
                let c = reps.len();
                reps.push(x);
                for &h in normal.members() {
                    coset_of[g.mul(x, h)] = c;
                }
            }
        }
        let label = format!("{}/{}", g.label(), normal.spec());
        let mut q = FiniteGroup::from_fn(reps.len(), label, vec![], |a, b| coset_of[g.mul(reps[a], reps[b])])?;
        let mut gens: Vec<usize> = g.generators().iter().map(|&s| coset_of[s]).filter(|&c| c != q.identity).collect();
        gens.sort_unstable();
        gens.dedup();
        q.generators = if gens.is_empty() && q.order() > 1 { minimal_generators(&q) } else { gens };
        Ok(Self { group: Arc::new(q), ambient: g, normal: normal.clone(), coset_of, reps })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn ambient(&self) -> &Arc<FiniteGroup> {
        &self.ambient
    }

    pub fn normal(&self) -> &GroupSubset {
        &self.normal
    }

    #[inline]
    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group() {
        let g = FiniteGroup::parse("cyclic:1").unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.mul(0, 0), 0);
    }

    #[test]
    fn dihedral_three_presentation() {
        let g = FiniteGroup::parse("dihedral:3").unwrap();
        assert_eq!(g.order(), 6);
        let (r, s) = (1, 3);
        let r3 = g.mul(g.mul(r, r), r);
        assert_eq!(r3, g.identity());
        assert_eq!(g.mul(s, s), g.identity());
        assert_eq!(g.mul(g.mul(s, r), s), g.inv(r));
        let involutions_outside: Vec<_> = (3..6).filter(|&x| g.element_order(x) == 2).collect();
        assert_eq!(involutions_outside.len(), 3);
    }

    #[test]
    fn heisenberg_center() {
        let g = FiniteGroup::parse("heisenberg:3").unwrap();
        assert_eq!(g.order(), 27);
        // Oracle: the center of the upper unitriangular group mod 3 is {(0,0,c)}.
        let mut expected = Vec::new();
        for x in 0..3usize {
            for y in 0..3usize {
                for z in 0..3usize {
                    let central = (0..3).all(|a| {
                        (0..3).all(|b| {
                            // (x,y,z)(a,b,0) vs (a,b,0)(x,y,z): z-parts x*b and a*y.
                            (x * b) % 3 == (a * y) % 3
                        })
                    });
                    if central {
                        expected.push(x * 9 + y * 3 + z);
                    }
                }
            }
        }
        assert_eq!(g.center(), expected);
        assert_eq!(g.center().len(), 3);
    }

    #[test]
    fn products_and_parsing() {
        let g = FiniteGroup::parse("product:cyclic:2,dihedral:3").unwrap();
        assert_eq!(g.order(), 12);
        assert!(g.check_associativity(None));
        let nested = GroupDescriptor::parse("product:(product:cyclic:2,cyclic:2),cyclic:3").unwrap();
        assert_eq!(nested.order(), Some(12));
        assert_eq!(GroupDescriptor::parse(&nested.to_string()).unwrap(), nested);
        assert!(GroupDescriptor::parse("klein:4").is_err());
        assert!(GroupDescriptor::parse("cyclic:0").is_err());
        assert!(matches!(FiniteGroup::parse("cyclic:5000"), Err(Error::OrderOverflow(5000))));
    }

    #[test]
    fn conjugation_fixture_in_d6() {
        let g = Arc::new(FiniteGroup::parse("dihedral:6").unwrap());
        // V = {e, r, r^-1, rs}
        let v = GroupSubset::new(&g, [0, 1, 5, 7]).unwrap();
        let w = conjugate_set(6, &v);
        // {e, r, r^-1, r^-1 s}
        assert_eq!(w.members(), &[0, 1, 5, 11]);
    }

    #[test]
    fn json_round_trip() {
        let g = FiniteGroup::parse("heisenberg:2").unwrap();
        let back = FiniteGroup::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn quotient_of_dihedral_by_rotations() {
        let g = Arc::new(FiniteGroup::parse("dihedral:3").unwrap());
        let h = GroupSubset::new(&g, [0, 1, 2]).unwrap();
        let q = Quotient::new(&h).unwrap();
        assert_eq!(q.group().order(), 2);
        assert_eq!(q.coset_of(4), 1);
        let not_normal = GroupSubset::new(&g, [0, 3]).unwrap();
        assert!(Quotient::new(&not_normal).is_err());
    }

    #[test]
    fn embedding_from_subset() {
        let g = Arc::new(FiniteGroup::parse("cyclic:4").unwrap());
        let emb = SubgroupEmbedding::from_subset(&GroupSubset::new(&g, [0, 2]).unwrap()).unwrap();
        assert_eq!(emb.map(), &[0, 2]);
        assert_eq!(emb.sub().mul(1, 1), 0);
    }

    #[test]
    fn word_ball() {
        let g = Arc::new(FiniteGroup::parse("cyclic:8").unwrap());
        let b = GroupSubset::parse(&g, "ball:2").unwrap();
        assert_eq!(b.members(), &[0, 1, 2, 6, 7]);
        assert!(b.is_symmetric());
    }
}
