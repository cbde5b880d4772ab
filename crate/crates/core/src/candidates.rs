//! Vectors in the level-5 basis whose value is nonnegative on every
//! counterexample, and the target vector they are combined against.

use std::fmt;
use std::str::FromStr;

use itertools::iproduct;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::basis::Basis;
use crate::epsilon::{epsilon_case, EpsilonCase};
use crate::error::{CertificateError, FlagError};
use crate::flag::{Flag, FlagVector, TypeSigma};
use crate::graph::{Color, TricoloredGraph, COLORS};
use crate::vector::RationalVector;
use crate::Rational;

/// The four named elements whose squares enter the certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SquareName {
    WB,
    WBPrime,
    WC,
    WCPrime,
}

impl SquareName {
    pub const ALL: [SquareName; 4] = [SquareName::WB, SquareName::WBPrime, SquareName::WC, SquareName::WCPrime];

    /// `(extension colors, coefficient)` pairs over the relevant triangle type.
    pub fn terms(self) -> &'static [([Color; 3], i64)] {
        const B_INDEX: [[Color; 3]; 7] = [[1, 1, 3], [3, 3, 3], [1, 2, 3], [1, 3, 1], [1, 3, 3], [2, 3, 3], [3, 2, 3]];
        const C_INDEX: [[Color; 3]; 6] = [[1, 1, 2], [3, 1, 2], [1, 1, 3], [1, 3, 3], [1, 2, 2], [2, 2, 1]];
        const WB: [([Color; 3], i64); 7] = [
            (B_INDEX[0], 165),
            (B_INDEX[1], 165),
            (B_INDEX[2], -279),
            (B_INDEX[3], -44),
            (B_INDEX[4], 328),
            (B_INDEX[5], 10),
            (B_INDEX[6], 421),
        ];
        const WB_PRIME: [([Color; 3], i64); 7] = [
            (B_INDEX[0], -580),
            (B_INDEX[1], -580),
            (B_INDEX[2], 668),
            (B_INDEX[3], -264),
            (B_INDEX[4], 10),
            (B_INDEX[5], 725),
            (B_INDEX[6], 632),
        ];
        const WC: [([Color; 3], i64); 6] = [
            (C_INDEX[0], 100),
            (C_INDEX[1], 100),
            (C_INDEX[2], -100),
            (C_INDEX[3], -100),
            (C_INDEX[4], 162),
            (C_INDEX[5], 163),
        ];
        const WC_PRIME: [([Color; 3], i64); 6] = [
            (C_INDEX[0], -10),
            (C_INDEX[1], -10),
            (C_INDEX[2], 10),
            (C_INDEX[3], 10),
            (C_INDEX[4], -77),
            (C_INDEX[5], 89),
        ];
        match self {
            SquareName::WB => &WB,
            SquareName::WBPrime => &WB_PRIME,
            SquareName::WC => &WC,
            SquareName::WCPrime => &WC_PRIME,
        }
    }

    /// True for the two elements over the two-colored triangle.
    pub fn over_two_colored_triangle(self) -> bool {
        matches!(self, SquareName::WB | SquareName::WBPrime)
    }

    /// All labeled triangles the element can be placed on: the 18 two-colored
    /// triangles or the 6 rainbow triangles, as edge colors of `01, 02, 12`.
    pub fn labelings(self) -> Vec<TricoloredGraph> {
        let want = if self.over_two_colored_triangle() { 2 } else { 3 };
        iproduct!(COLORS, COLORS, COLORS)
            .map(|(a, b, c)| TricoloredGraph::from_fn(3, |i, j| [a, b, c][i + j - 1]))
            .filter(|g| g.used_colors().count_ones() == want)
            .collect()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SquareName::WB => "wB",
            SquareName::WBPrime => "wB'",
            SquareName::WC => "wC",
            SquareName::WCPrime => "wC'",
        }
    }
}

impl fmt::Display for SquareName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SquareName {
    type Err = CertificateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SquareName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| CertificateError::UnknownCandidate(s.to_string()))
    }
}

/// What a candidate vector is.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CandidateKind {
    /// The averaged domination inequality for a four-vertex type and a color.
    Inequality { sigma: TricoloredGraph, color: Color },
    /// The averaged square of a named element placed on a labeled triangle.
    Square { name: SquareName, sigma: TricoloredGraph },
}

impl CandidateKind {
    /// Self-describing key, e.g. `ineq:123111:c1` or `sq:wB:113`.
    pub fn key(&self) -> String {
        match self {
            CandidateKind::Inequality { sigma, color } => format!("ineq:{sigma}:c{color}"),
            CandidateKind::Square { name, sigma } => format!("sq:{name}:{sigma}"),
        }
    }

    pub fn kind_str(&self) -> &'static str {
        match self {
            CandidateKind::Inequality { .. } => "inequality",
            CandidateKind::Square { .. } => "square",
        }
    }

    pub fn parse_key(key: &str) -> Result<CandidateKind, CertificateError> {
        let bad = || CertificateError::UnknownCandidate(key.to_string());
        let parts: Vec<&str> = key.split(':').collect();
        match parts.as_slice() {
            ["ineq", sigma, color] => {
                let sigma: TricoloredGraph = sigma.parse().map_err(|_| bad())?;
                let color: Color = color.strip_prefix('c').and_then(|c| c.parse().ok()).ok_or_else(bad)?;
                if !(1..=3).contains(&color) {
                    return Err(bad());
                }
                Ok(CandidateKind::Inequality { sigma, color })
            }
            ["sq", name, sigma] => {
                let name: SquareName = name.parse()?;
                let sigma: TricoloredGraph = sigma.parse().map_err(|_| bad())?;
                Ok(CandidateKind::Square { name, sigma })
            }
            _ => Err(bad()),
        }
    }

    /// Whether the vector is provably nonnegative on counterexamples.
    pub fn check_admissible(&self) -> Result<(), CertificateError> {
        match self {
            CandidateKind::Inequality { sigma, color } => {
                let ok = sigma.n() == 4
                    && epsilon_case(sigma, *color).is_admissible()
                    && sigma.colors().contains(color)
                    && sigma.color_stabilizer().len() == 1;
                if ok {
                    Ok(())
                } else {
                    Err(CertificateError::Inadmissible(self.key()))
                }
            }
            CandidateKind::Square { name, sigma } => {
                if name.labelings().contains(sigma) {
                    Ok(())
                } else {
                    Err(CertificateError::Inadmissible(self.key()))
                }
            }
        }
    }

    pub fn build(&self) -> Result<CandidateVector, CertificateError> {
        self.check_admissible()?;
        let vector = match self {
            CandidateKind::Inequality { sigma, color } => inequality_vector(sigma, *color)?,
            CandidateKind::Square { name, sigma } => square_vector(&named_element(*name, sigma)?)?,
        };
        Ok(CandidateVector { kind: self.clone(), vector })
    }
}

impl fmt::Display for CandidateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// A candidate together with its expansion in the level-5 basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateVector {
    pub kind: CandidateKind,
    pub vector: RationalVector,
}

/// `sum_d (2/3 - [c in d]) F_d` over the 81 one-vertex extensions of `sigma`.
///
/// This is `(2/3) * unit - F_(c)` with the unit written at level 5.
pub fn inequality_flag_vector(sigma: &TricoloredGraph, c: Color) -> Result<FlagVector, FlagError> {
    let t = TypeSigma::new(sigma.clone());
    let mut v = FlagVector::new(t.clone(), sigma.n() + 1)?;
    let two_thirds = Rational::new(BigInt::from(2), BigInt::from(3));
    let minus_third = Rational::new(BigInt::from(-1), BigInt::from(3));
    let k = sigma.n();
    for code in 0..3usize.pow(k as u32) {
        let d: Vec<Color> = (0..k).map(|j| ((code / 3usize.pow(j as u32)) % 3) as Color + 1).collect();
        let w = if d.contains(&c) { minus_third.clone() } else { two_thirds.clone() };
        v.add_term(&Flag::one_vertex_extension(&t, &d)?, w)?;
    }
    Ok(v)
}

pub fn inequality_vector(sigma: &TricoloredGraph, c: Color) -> Result<RationalVector, FlagError> {
    Ok(inequality_flag_vector(sigma, c)?.average())
}

/// The named element on the given labeled triangle, at level 4.
pub fn named_element(name: SquareName, sigma: &TricoloredGraph) -> Result<FlagVector, FlagError> {
    let t = TypeSigma::new(sigma.clone());
    let mut w = FlagVector::new(t.clone(), 4)?;
    for (colors, coeff) in name.terms() {
        w.add_term(&Flag::one_vertex_extension(&t, colors)?, Rational::from_integer(BigInt::from(*coeff)))?;
    }
    Ok(w)
}

/// Averaged square of a flag vector.
pub fn square_vector(w: &FlagVector) -> Result<RationalVector, FlagError> {
    Ok(w.product(w)?.average())
}

/// Indicator of the classes in which some vertex meets edges of all three colors.
pub fn build_w3() -> RationalVector {
    let top = Basis::top();
    let mut v = RationalVector::zeros();
    for (i, g) in top.representatives().iter().enumerate() {
        if (0..g.n()).any(|u| g.incident_colors(u) == 0b111) {
            v.set(i, Rational::from_integer(1.into()));
        }
    }
    v
}

/// Same set as [`build_w3`], found by searching for a vertex with three
/// neighbors joined in three distinct colors.
pub fn w3_by_witness_scan() -> RationalVector {
    let top = Basis::top();
    let mut v = RationalVector::zeros();
    for (i, g) in top.representatives().iter().enumerate() {
        let n = g.n();
        let found = (0..n).any(|u| {
            let others: Vec<usize> = (0..n).filter(|&x| x != u).collect();
            iproduct!(others.iter(), others.iter(), others.iter())
                .any(|(&a, &b, &c)| g.color(u, a) == 1 && g.color(u, b) == 2 && g.color(u, c) == 3)
        });
        if found {
            v.set(i, Rational::from_integer(1.into()));
        }
    }
    v
}

pub fn count_nonzero(v: &RationalVector) -> usize {
    v.coeffs().iter().filter(|c| !c.is_zero()).count()
}

/// The 14 inequality candidates of an interpretation, ordered by type index then color.
pub fn inequality_kinds(interp: &crate::epsilon::Interpretation) -> Vec<CandidateKind> {
    let table = interp.epsilon_table();
    table
        .admissible_pairs()
        .into_iter()
        .map(|(i, c)| CandidateKind::Inequality { sigma: interp.sigma(i).clone(), color: c })
        .collect()
}

/// Every square candidate: each named element on each of its labeled triangles.
pub fn all_square_kinds() -> Vec<CandidateKind> {
    SquareName::ALL
        .into_iter()
        .flat_map(|name| name.labelings().into_iter().map(move |sigma| CandidateKind::Square { name, sigma }))
        .collect()
}

/// Whether the case analysis behind an inequality applies.
pub fn inequality_case(sigma: &TricoloredGraph, c: Color) -> EpsilonCase {
    epsilon_case(sigma, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn labeling_counts() {
        assert_eq!(SquareName::WB.labelings().len(), 18);
        assert_eq!(SquareName::WC.labelings().len(), 6);
    }

    #[test]
    fn key_round_trip() {
        let kinds = [
            CandidateKind::Inequality { sigma: "123111".parse().unwrap(), color: 1 },
            CandidateKind::Square { name: SquareName::WBPrime, sigma: "113".parse().unwrap() },
        ];
        for k in kinds {
            assert_eq!(CandidateKind::parse_key(&k.key()).unwrap(), k);
        }
        assert!(CandidateKind::parse_key("ineq:123:c9").is_err());
        assert!(CandidateKind::parse_key("sq:wZ:113").is_err());
    }

    #[test]
    fn inadmissible_inequality_rejected() {
        // one edge of color 2: the one-half case
        let k = CandidateKind::Inequality { sigma: "123111".parse().unwrap(), color: 2 };
        assert!(matches!(k.build(), Err(CertificateError::Inadmissible(_))));
        let mono = CandidateKind::Inequality { sigma: "111111".parse().unwrap(), color: 1 };
        assert!(mono.build().is_err());
    }

    #[test]
    fn inequality_coefficients_bounded() {
        let v = inequality_vector(&"123111".parse().unwrap(), 1).unwrap();
        let one = Rational::one();
        assert!(v.coeffs().iter().all(|c| *c <= one && *c >= -one.clone()));
    }

    #[test]
    fn square_of_zero_is_zero_and_scaling_is_quadratic() {
        let sigma: TricoloredGraph = "113".parse().unwrap();
        let w = named_element(SquareName::WB, &sigma).unwrap();
        let zero = w.scaled(&Rational::zero());
        assert!(square_vector(&zero).unwrap().is_zero());
        let two = Rational::from_integer(2.into());
        let four = Rational::from_integer(4.into());
        assert_eq!(square_vector(&w.scaled(&two)).unwrap(), square_vector(&w).unwrap().scaled(&four));
    }

    #[test]
    fn w3_two_scans_agree() {
        let a = build_w3();
        let b = w3_by_witness_scan();
        assert_eq!(a, b);
        let top = Basis::top();
        let mono = top.class_of(&TricoloredGraph::monochromatic(5, 1));
        assert!(a[mono].is_zero());
        assert!(count_nonzero(&a) > 0);
    }
}
