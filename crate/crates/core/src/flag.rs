//! Typed flags, flag densities, products and the averaging operator.
//!
//! A flag over a type `sigma` (a fully labeled graph on `k` vertices) is a graph
//! whose first `k` vertices induce `sigma` exactly. Two flags are isomorphic
//! when a vertex bijection fixing `0..k` pointwise, composed with a color
//! permutation from the color stabilizer of `sigma`, carries one onto the other.
//! All probabilities are computed by complete enumeration, so every
//! coefficient is an exact rational.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::basis::MAX_LEVEL;
use crate::canon::{permutations, CanonicalForm};
use crate::density::binomial;
use crate::error::FlagError;
use crate::graph::{Color, ColorPerm, TricoloredGraph};
use crate::vector::RationalVector;
use crate::Rational;

/// A fully labeled graph used as the type of a family of flags.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TypeSigma {
    graph: TricoloredGraph,
    stabilizer: Vec<ColorPerm>,
}

impl TypeSigma {
    pub fn new(graph: TricoloredGraph) -> Self {
        let stabilizer = graph.color_stabilizer();
        TypeSigma { graph, stabilizer }
    }

    pub fn size(&self) -> usize {
        self.graph.n()
    }

    pub fn graph(&self) -> &TricoloredGraph {
        &self.graph
    }

    /// Color permutations fixing the labeled graph; always contains the identity.
    pub fn stabilizer(&self) -> &[ColorPerm] {
        &self.stabilizer
    }

    /// Labeled key: vertex count and literal colors, no minimization.
    pub fn key(&self) -> CanonicalForm {
        CanonicalForm::from_colors(self.size(), self.graph.colors().iter().copied())
    }

    /// The unit of the flag algebra over this type: the type itself as a flag.
    pub fn unit(&self) -> FlagVector {
        let mut v = FlagVector::new(self.clone(), self.size()).expect("level k is valid");
        v.coeffs.insert(flag_key(self, &self.graph), Rational::from_integer(1.into()));
        v
    }

    /// Recolors `g` so that its first `k` vertices induce this type exactly,
    /// if they induce it up to a color permutation.
    fn normalize(&self, g: &TricoloredGraph) -> Option<TricoloredGraph> {
        let k = self.size();
        let head: Vec<usize> = (0..k).collect();
        let labeled = g.induced(&head);
        ColorPerm::all().into_iter().find(|p| labeled.permute_colors(p) == self.graph).map(|p| g.permute_colors(&p))
    }
}

impl fmt::Debug for TypeSigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TypeSigma({:?})", self.graph)
    }
}

/// Canonical key of a flag; the labeled prefix is part of the encoding.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FlagKey(CanonicalForm);

impl FlagKey {
    pub fn form(&self) -> CanonicalForm {
        self.0
    }

    pub fn level(&self) -> usize {
        self.0.n()
    }

    pub fn representative(&self) -> TricoloredGraph {
        self.0.representative()
    }

    pub fn to_hex(&self) -> String {
        self.0.to_hex()
    }
}

/// Minimal encoding over vertex permutations fixing `0..k` and stabilizer color permutations.
fn flag_key(sigma: &TypeSigma, g: &TricoloredGraph) -> FlagKey {
    let k = sigma.size();
    let l = g.n();
    let free = permutations(l - k);
    let mut best: Option<u64> = None;
    let mut order: Vec<usize> = (0..l).collect();
    for p in free {
        for (slot, &x) in order[k..].iter_mut().zip(p) {
            *slot = k + x as usize;
        }
        for cp in sigma.stabilizer() {
            let mut code = 0u64;
            for a in 0..l {
                for b in a + 1..l {
                    code = (code << 2) | cp.apply(g.color(order[a], order[b])) as u64;
                }
            }
            if best.is_none_or(|b| code < b) {
                best = Some(code);
            }
        }
    }
    let form = CanonicalForm::from_colors(l, {
        let code = best.unwrap();
        let e = l * (l - 1) / 2;
        (0..e).map(move |i| ((code >> (2 * (e - 1 - i))) & 3) as Color)
    });
    FlagKey(form)
}

/// A graph whose first `k` vertices carry the labeled type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    sigma: TypeSigma,
    graph: TricoloredGraph,
}

impl Flag {
    pub fn new(sigma: &TypeSigma, graph: TricoloredGraph) -> Result<Flag, FlagError> {
        let k = sigma.size();
        if graph.n() < k || graph.n() > MAX_LEVEL {
            return Err(FlagError::LevelOutOfRange { level: graph.n(), min: k, max: MAX_LEVEL });
        }
        let head: Vec<usize> = (0..k).collect();
        if graph.induced(&head) != *sigma.graph() {
            return Err(FlagError::NotATypedGraph { k });
        }
        Ok(Flag { sigma: sigma.clone(), graph })
    }

    /// The flag on `k + 1` vertices whose extra vertex is joined to labeled
    /// vertex `j` by an edge of color `colors[j]`.
    pub fn one_vertex_extension(sigma: &TypeSigma, colors: &[Color]) -> Result<Flag, FlagError> {
        let k = sigma.size();
        if colors.len() != k {
            return Err(FlagError::NotATypedGraph { k });
        }
        if let Some(&c) = colors.iter().find(|&&c| !(1..=3).contains(&c)) {
            return Err(FlagError::Graph(crate::error::GraphError::InvalidColor(c)));
        }
        let g = TricoloredGraph::from_fn(k + 1, |i, j| if j == k { colors[i] } else { sigma.graph().color(i, j) });
        Flag::new(sigma, g)
    }

    pub fn sigma(&self) -> &TypeSigma {
        &self.sigma
    }

    pub fn graph(&self) -> &TricoloredGraph {
        &self.graph
    }

    pub fn level(&self) -> usize {
        self.graph.n()
    }

    pub fn key(&self) -> FlagKey {
        flag_key(&self.sigma, &self.graph)
    }

    pub fn is_isomorphic(&self, other: &Flag) -> bool {
        self.sigma == other.sigma && self.level() == other.level() && self.key() == other.key()
    }
}

fn check_level(sigma: &TypeSigma, l: usize) -> Result<(), FlagError> {
    let k = sigma.size();
    if l < k || l > MAX_LEVEL {
        return Err(FlagError::LevelOutOfRange { level: l, min: k, max: MAX_LEVEL });
    }
    Ok(())
}

/// Keys of `F^sigma_l`, sorted.
pub fn flag_keys(sigma: &TypeSigma, l: usize) -> Result<Vec<FlagKey>, FlagError> {
    check_level(sigma, l)?;
    let k = sigma.size();
    let head: Vec<usize> = (0..k).collect();
    let total = 3usize.pow((l * (l - 1) / 2) as u32);
    let mut keys: Vec<FlagKey> = (0..total)
        .map(|idx| TricoloredGraph::from_coloring_index(l, idx))
        .filter(|g| g.induced(&head) == *sigma.graph())
        .map(|g| flag_key(sigma, &g))
        .collect();
    keys.sort();
    keys.dedup();
    Ok(keys)
}

/// One representative per isomorphism class of `sigma`-flags on `l` vertices.
pub fn enumerate_flags(sigma: &TypeSigma, l: usize) -> Result<Vec<Flag>, FlagError> {
    Ok(flag_keys(sigma, l)?.into_iter().map(|key| Flag { sigma: sigma.clone(), graph: key.representative() }).collect())
}

fn extension_order(k: usize, extra: &[usize]) -> Vec<usize> {
    (0..k).chain(extra.iter().copied()).collect()
}

/// Probability that the labeled vertices of `g` together with a random
/// `(|h| - k)`-subset of its unlabeled vertices induce a flag isomorphic to `h`.
pub fn flag_density(h: &Flag, g: &Flag) -> Result<Rational, FlagError> {
    if h.sigma != g.sigma {
        return Err(FlagError::TypeMismatch);
    }
    if h.level() > g.level() {
        return Err(FlagError::LevelOutOfRange { level: h.level(), min: h.sigma.size(), max: g.level() });
    }
    let k = h.sigma.size();
    let target = h.key();
    let hits = (k..g.level())
        .combinations(h.level() - k)
        .filter(|s| flag_key(&g.sigma, &g.graph.induced(&extension_order(k, s))) == target)
        .count();
    let total = binomial(g.level() - k, h.level() - k);
    Ok(Rational::new(BigInt::from(hits), BigInt::from(total)))
}

/// A formal rational combination of `sigma`-flags of one level.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FlagVector {
    sigma: TypeSigma,
    level: usize,
    coeffs: BTreeMap<FlagKey, Rational>,
}

impl FlagVector {
    pub fn new(sigma: TypeSigma, level: usize) -> Result<Self, FlagError> {
        check_level(&sigma, level)?;
        Ok(FlagVector { sigma, level, coeffs: BTreeMap::new() })
    }

    pub fn sigma(&self) -> &TypeSigma {
        &self.sigma
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Nonzero terms, in key order.
    pub fn terms(&self) -> impl Iterator<Item = (&FlagKey, &Rational)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, flag: &Flag) -> Rational {
        self.coeffs.get(&flag.key()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, flag: &Flag, coeff: Rational) -> Result<(), FlagError> {
        if flag.sigma != self.sigma {
            return Err(FlagError::TypeMismatch);
        }
        if flag.level() != self.level {
            return Err(FlagError::LevelOutOfRange { level: flag.level(), min: self.level, max: self.level });
        }
        self.add_key(flag.key(), coeff);
        Ok(())
    }

    /// Adds a term by key. The key must belong to this vector's type and level;
    /// keys produced by [`flag_keys`] or [`Flag::key`] always do.
    pub fn add_key(&mut self, key: FlagKey, coeff: Rational) {
        debug_assert_eq!(key.level(), self.level);
        let entry = self.coeffs.entry(key).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn scaled(&self, factor: &Rational) -> FlagVector {
        let mut out = FlagVector { sigma: self.sigma.clone(), level: self.level, coeffs: BTreeMap::new() };
        if !factor.is_zero() {
            for (k, c) in &self.coeffs {
                out.coeffs.insert(*k, c * factor);
            }
        }
        out
    }

    pub fn plus(&self, other: &FlagVector) -> Result<FlagVector, FlagError> {
        if self.sigma != other.sigma {
            return Err(FlagError::TypeMismatch);
        }
        if self.level != other.level {
            return Err(FlagError::LevelOutOfRange { level: other.level, min: self.level, max: self.level });
        }
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_key(*k, c.clone());
        }
        Ok(out)
    }

    /// Rewrites the vector at a higher level using `H = sum_H' p(H, H') H'`.
    pub fn expand_to(&self, level: usize) -> Result<FlagVector, FlagError> {
        check_level(&self.sigma, level)?;
        if level < self.level {
            return Err(FlagError::LevelOutOfRange { level, min: self.level, max: MAX_LEVEL });
        }
        let mut out = FlagVector::new(self.sigma.clone(), level)?;
        if self.is_zero() {
            return Ok(out);
        }
        let k = self.sigma.size();
        let denom = Rational::from_integer(BigInt::from(binomial(level - k, self.level - k)));
        for g_key in flag_keys(&self.sigma, level)? {
            let g = g_key.representative();
            let mut coeff = Rational::zero();
            for s in (k..level).combinations(self.level - k) {
                if let Some(c) = self.coeffs.get(&flag_key(&self.sigma, &g.induced(&extension_order(k, &s)))) {
                    coeff += c;
                }
            }
            if !coeff.is_zero() {
                out.add_key(g_key, coeff / &denom);
            }
        }
        Ok(out)
    }

    /// Bilinear flag product. The result lives at level `l_a + l_b - k`.
    pub fn product(&self, other: &FlagVector) -> Result<FlagVector, FlagError> {
        if self.sigma != other.sigma {
            return Err(FlagError::TypeMismatch);
        }
        let k = self.sigma.size();
        let level = self.level + other.level - k;
        if level > MAX_LEVEL {
            return Err(FlagError::ProductTooLarge(level));
        }
        let mut out = FlagVector::new(self.sigma.clone(), level)?;
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        let (a_extra, b_extra) = (self.level - k, other.level - k);
        let pairs = binomial(level - k, a_extra) * binomial(level - k - a_extra, b_extra);
        let denom = Rational::from_integer(BigInt::from(pairs));
        for g_key in flag_keys(&self.sigma, level)? {
            let g = g_key.representative();
            let mut coeff = Rational::zero();
            for s1 in (k..level).combinations(a_extra) {
                let Some(ca) = self.coeffs.get(&flag_key(&self.sigma, &g.induced(&extension_order(k, &s1)))) else {
                    continue;
                };
                let rest: Vec<usize> = (k..level).filter(|v| !s1.contains(v)).collect();
                for s2 in rest.into_iter().combinations(b_extra) {
                    if let Some(cb) = other.coeffs.get(&flag_key(&self.sigma, &g.induced(&extension_order(k, &s2)))) {
                        coeff += ca * cb;
                    }
                }
            }
            if !coeff.is_zero() {
                out.add_key(g_key, coeff / &denom);
            }
        }
        Ok(out)
    }

    /// The averaging (unlabeling) operator, written in the level-5 basis.
    ///
    /// A flag `F` with underlying graph `H` maps to `p * H`, where `p` is the
    /// probability that a uniformly random injection of the type's vertices
    /// into `V(H)` embeds the type (up to color permutation) and yields `F`.
    pub fn average(&self) -> RationalVector {
        let k = self.sigma.size();
        let mut out = RationalVector::zeros();
        for (key, coeff) in &self.coeffs {
            let h = key.representative();
            let l = h.n();
            let mut hits = 0u64;
            let mut total = 0u64;
            for nu in (0..l).permutations(k) {
                total += 1;
                let rest: Vec<usize> = (0..l).filter(|v| !nu.contains(v)).collect();
                let relabeled = h.induced(&extension_order(0, &[nu.clone(), rest].concat()));
                if let Some(normal) = self.sigma.normalize(&relabeled) {
                    if flag_key(&self.sigma, &normal) == *key {
                        hits += 1;
                    }
                }
            }
            let p = Rational::new(BigInt::from(hits), BigInt::from(total));
            let lifted = RationalVector::lift(&h).expect("flag level <= 5");
            out.add_scaled(&(coeff * p), &lifted);
        }
        out
    }
}
