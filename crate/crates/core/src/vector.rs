//! Exact vectors over the level-5 basis.

use std::ops::{Add, Index, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::basis::{Basis, MAX_LEVEL};
use crate::density::density_profile;
use crate::error::GraphError;
use crate::graph::TricoloredGraph;
use crate::Rational;

/// An element of the algebra written in the `F_5` basis: one exact rational
/// per class, in [`Basis::top`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalVector {
    coeffs: Vec<Rational>,
}

/// `LIFT[l][h][g]` is the density of the level-`l` class `h` in the level-5 class `g`.
fn lift_matrix(l: usize) -> &'static [Vec<Rational>] {
    static CACHE: [OnceLock<Vec<Vec<Rational>>>; MAX_LEVEL + 1] = [const { OnceLock::new() }; MAX_LEVEL + 1];
    CACHE[l].get_or_init(|| {
        let low = Basis::get(l).expect("valid level");
        let top = Basis::top();
        let mut m = vec![vec![Rational::zero(); top.len()]; low.len()];
        for (g_idx, g) in top.representatives().iter().enumerate() {
            for (h_idx, d) in density_profile(l, g).expect("l <= 5").into_iter().enumerate() {
                m[h_idx][g_idx] = d;
            }
        }
        m
    })
}

impl RationalVector {
    pub fn zeros() -> Self {
        RationalVector { coeffs: vec![Rational::zero(); Basis::top().len()] }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Result<Self, GraphError> {
        let len = Basis::top().len();
        if coeffs.len() != len {
            return Err(GraphError::Parse(format!("expected {len} coefficients, got {}", coeffs.len())));
        }
        Ok(RationalVector { coeffs })
    }

    /// Indicator of basis element `i`.
    pub fn unit(i: usize) -> Self {
        let mut v = Self::zeros();
        v.coeffs[i] = Rational::from_integer(1.into());
        v
    }

    /// Expresses an unlabeled graph on at most 5 vertices in the level-5 basis:
    /// the coefficient of `g` is the density of `h` in `g`.
    pub fn lift(h: &TricoloredGraph) -> Result<Self, GraphError> {
        let basis = Basis::get(h.n())?;
        Ok(RationalVector { coeffs: lift_matrix(h.n())[basis.class_of(h)].clone() })
    }

    /// Linear extension of [`RationalVector::lift`] to a weighted combination.
    pub fn lift_combination<'a>(
        terms: impl IntoIterator<Item = (&'a TricoloredGraph, &'a Rational)>,
    ) -> Result<Self, GraphError> {
        let mut out = Self::zeros();
        for (h, c) in terms {
            out.add_scaled(c, &Self::lift(h)?);
        }
        Ok(out)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn set(&mut self, i: usize, value: Rational) {
        self.coeffs[i] = value;
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, factor: &Rational, other: &RationalVector) {
        if factor.is_zero() {
            return;
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += factor * b;
            }
        }
    }

    pub fn scaled(&self, factor: &Rational) -> RationalVector {
        RationalVector { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_nonpositive(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_positive())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Smallest entry together with its first index.
    pub fn min_entry(&self) -> (usize, &Rational) {
        let mut best = 0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c < &self.coeffs[best] {
                best = i;
            }
        }
        (best, &self.coeffs[best])
    }

    pub fn max_abs(&self) -> Rational {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Evaluates the vector against a probability distribution over the basis.
    pub fn dot_f64(&self, weights: &[f64]) -> f64 {
        self.coeffs.iter().zip(weights).map(|(c, w)| c.to_f64().unwrap_or(f64::NAN) * w).sum()
    }

    /// Exact pairing with a density profile.
    pub fn dot(&self, weights: &[Rational]) -> Rational {
        self.coeffs.iter().zip(weights).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// All-ones vector: the unit of the algebra written at level 5.
    pub fn ones() -> Self {
        RationalVector { coeffs: vec![Rational::from_integer(BigInt::from(1)); Basis::top().len()] }
    }
}

impl Index<usize> for RationalVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }
}

impl Add<&RationalVector> for &RationalVector {
    type Output = RationalVector;

    fn add(self, rhs: &RationalVector) -> RationalVector {
        RationalVector { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub<&RationalVector> for &RationalVector {
    type Output = RationalVector;

    fn sub(self, rhs: &RationalVector) -> RationalVector {
        RationalVector { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;

    fn neg(self) -> RationalVector {
        RationalVector { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn lift_of_top_level_class_is_indicator() {
        let top = Basis::top();
        for i in [0, 17, 141] {
            assert_eq!(RationalVector::lift(&top.representative(i)).unwrap(), RationalVector::unit(i));
        }
    }

    #[test]
    fn lift_of_single_vertex_is_all_ones() {
        let k1 = TricoloredGraph::monochromatic(1, 1);
        assert_eq!(RationalVector::lift(&k1).unwrap(), RationalVector::ones());
    }

    #[test]
    fn lifted_levels_sum_to_ones() {
        for l in 1..=5 {
            let basis = Basis::get(l).unwrap();
            let mut sum = RationalVector::zeros();
            for h in basis.representatives() {
                sum = &sum + &RationalVector::lift(&h).unwrap();
            }
            assert_eq!(sum, RationalVector::ones(), "level {l}");
        }
    }

    #[test]
    fn min_entry_and_signs() {
        let mut v = RationalVector::zeros();
        v.set(3, -Rational::one());
        assert_eq!(v.min_entry().0, 3);
        assert!(v.is_nonpositive());
        assert!(!v.is_nonnegative());
    }
}
